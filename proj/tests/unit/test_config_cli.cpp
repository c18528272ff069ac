#include "topk/commands.hpp"
#include "topk/config.hpp"
#include "topk/error.hpp"
#include "topk/output.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace topk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = TOPK_TEST_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("topk_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

json small_config() {
  return json::parse(R"({
    "graph": {"type": "ring", "n": 10},
    "data": {"values": [45, 8, 22, 91, 15, 82, 53, 7, 44, 99]},
    "target": {"k": 1},
    "schedule": {"alpha0": 80, "beta0": "auto", "tau1": 1, "tau2": 0.505},
    "noise": {"type": "gaussian", "sigma2": 10},
    "run": {"iterations": 300, "replications": 3, "seed": 1},
    "output": {"dir": "out"}
  })");
}

fs::path write_config(const fs::path& dir, const json& doc, const std::string& name = "cfg.json") {
  const fs::path p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc, kData);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("parse_config reads every section") {
  const auto cfg = parse_config(small_config(), kData);
  CHECK(cfg.graph.kind == GraphKind::ring);
  CHECK(cfg.graph.n == 10);
  CHECK(cfg.data.size() == 10);
  CHECK(cfg.target == Target::top(1));
  CHECK(cfg.schedule.alpha0 == 80.0);
  CHECK_FALSE(cfg.schedule.beta0.has_value());
  CHECK(cfg.noise == NoiseModel::gaussian(10.0));
  CHECK(cfg.iterations == 300);
  CHECK(cfg.replications == 3);
  CHECK(cfg.seed == 1);
  CHECK(cfg.decision_offset == 0.5);
}

TEST_CASE("config files shipped with the project load") {
  for (const char* name : {"noisy_k1.json", "noiseless_k3.json", "path_baseline.json"}) {
    CAPTURE(name);
    const auto cfg = load_config(kData / name);
    CHECK(build_graph(cfg).size() == cfg.data.size());
  }
  const auto noisy = load_config(kData / "noisy_k1.json");
  CHECK(noisy.data == std::vector<double>{45, 8, 22, 91, 15, 82, 53, 7, 44, 99});
  CHECK(build_graph(noisy).edges().size() == 12);
}

TEST_CASE("config validation messages name the key") {
  auto doc = small_config();
  doc["schedule"].erase("tau2");
  CHECK(config_error(doc).find("schedule.tau2") != std::string::npos);

  doc = small_config();
  doc["run"]["speed"] = 3;
  CHECK(config_error(doc).find("run.speed") != std::string::npos);

  doc = small_config();
  doc["target"]["p"] = 0.95;
  CHECK_FALSE(config_error(doc).empty());

  doc = small_config();
  doc["data"] = json::parse(R"({"file": "does_not_exist.txt"})");
  CHECK(config_error(doc).find("does_not_exist.txt") != std::string::npos);

  doc = small_config();
  doc["noise"] = json::parse(R"({"type": "gaussian"})");
  CHECK(config_error(doc).find("noise.sigma2") != std::string::npos);

  doc = small_config();
  doc["graph"]["type"] = "torus";
  CHECK_THROWS(parse_config(doc, kData));
}

TEST_CASE("data generator and explicit beta0") {
  auto doc = small_config();
  doc["data"] = json::parse(R"({"generator": {"type": "uniform_int", "lo": 1, "hi": 5, "seed": 3}})");
  doc["schedule"]["beta0"] = 0.1;
  const auto cfg = parse_config(doc, kData);
  REQUIRE(cfg.data.size() == 10);
  for (double x : cfg.data) {
    CHECK(x >= 1);
    CHECK(x <= 5);
    CHECK(x == std::floor(x));
  }
  CHECK(cfg.schedule.beta0 == std::optional<double>{0.1});
  CHECK(parse_config(doc, kData).data == cfg.data);
}

TEST_CASE("to_json round-trips") {
  const auto cfg = load_config(kData / "noisy_k1.json");
  const auto again = parse_config(to_json(cfg), kData);
  CHECK(again.data == cfg.data);
  CHECK(build_graph(again) == build_graph(cfg));
  CHECK(again.schedule.beta0 == cfg.schedule.beta0);
  CHECK(again.noise == cfg.noise);
  CHECK(again.iterations == cfg.iterations);
  CHECK(again.seed == cfg.seed);
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("parse_data") {
  std::istringstream in("# header\n1 2,3\n\n4.5 # trailing\n");
  CHECK(parse_data(in) == std::vector<double>{1, 2, 3, 4.5});
  std::istringstream bad("1 two 3");
  CHECK_THROWS(parse_data(bad));
  CHECK(read_data_file(kData / "reference_dataset.txt").size() == 10);
  CHECK_THROWS_AS(read_data_file(kData / "nope.txt"), IoError);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 82.0, 1e-300, -2.5e17}) {
    CHECK(std::stod(format_double(x)) == x);
    CHECK(std::stod(format_short(x)) == x);
  }
  CHECK(format_short(0.7) == "0.7");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cmd_run writes traces and manifest") {
  TempDir tmp;
  const auto cfg_path = write_config(tmp.path, small_config());
  std::ostringstream out, err;
  REQUIRE(cmd_run(cfg_path, {}, out, err) == ExitCode::ok);
  const fs::path dir = tmp.path / "out";
  REQUIRE(fs::exists(dir / "aggregate.csv"));
  CHECK(fs::exists(dir / "replications" / "replication_0000.csv"));
  CHECK(fs::exists(dir / "replications" / "replication_0002.csv"));

  const std::string agg = slurp(dir / "aggregate.csv");
  CHECK(agg.substr(0, agg.find('\n')) == kAggregateHeader);
  const std::string rep = slurp(dir / "replications" / "replication_0001.csv");
  CHECK(rep.substr(0, rep.find('\n')) == kReplicationHeader);

  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["theta_p"].get<double>() == 99.0);
  CHECK(manifest["true_topk"] == json::array({10}));
  CHECK(manifest["config_format"] == "json");
  CHECK(manifest.contains("lambda2"));
  CHECK(manifest.contains("lambdaN"));
  CHECK(manifest["beta0"].get<double>() == doctest::Approx(manifest["beta0_bound"].get<double>()));
  CHECK(manifest["software"]["version"] == kVersion);

  SUBCASE("resolved config reproduces the aggregate byte for byte") {
    const fs::path resolved = dir / "resolved_config.json";
    RunOverrides o;
    o.output = tmp.path / "again";
    REQUIRE(cmd_run(resolved, o, out, err) == ExitCode::ok);
    CHECK(slurp(tmp.path / "again" / "aggregate.csv") == agg);
  }

  SUBCASE("jobs does not change the output") {
    RunOverrides o;
    o.output = tmp.path / "threaded";
    o.jobs = 3;
    REQUIRE(cmd_run(cfg_path, o, out, err) == ExitCode::ok);
    CHECK(slurp(tmp.path / "threaded" / "aggregate.csv") == agg);
  }

  SUBCASE("seed override changes traces but not theta") {
    RunOverrides o;
    o.output = tmp.path / "seeded";
    o.seed = 12345;
    REQUIRE(cmd_run(cfg_path, o, out, err) == ExitCode::ok);
    CHECK(slurp(tmp.path / "seeded" / "aggregate.csv") != agg);
    const json m2 = json::parse(slurp(tmp.path / "seeded" / "manifest.json"));
    CHECK(m2["theta_p"] == manifest["theta_p"]);
    CHECK(m2["true_topk"] == manifest["true_topk"]);
  }
}

TEST_CASE("cmd_run exit codes") {
  TempDir tmp;
  std::ostringstream out, err;

  SUBCASE("missing key is a config error naming the key") {
    auto doc = small_config();
    doc["schedule"].erase("tau2");
    CHECK(cmd_run(write_config(tmp.path, doc), {}, out, err) == ExitCode::config_error);
    CHECK(err.str().find("tau2") != std::string::npos);
  }
  SUBCASE("schedule constraint violation") {
    auto doc = small_config();
    doc["schedule"]["tau1"] = 0.7;
    CHECK(cmd_run(write_config(tmp.path, doc), {}, out, err) == ExitCode::constraint_violation);
    CHECK(err.str().find("2*tau1 - tau2 > 1") != std::string::npos);
    RunOverrides o;
    o.allow_unsafe_schedule = true;
    CHECK(cmd_run(write_config(tmp.path, doc), o, out, err) == ExitCode::ok);
  }
  SUBCASE("beta0 above the bound") {
    auto doc = small_config();
    doc["schedule"]["beta0"] = 5.0;
    CHECK(cmd_run(write_config(tmp.path, doc), {}, out, err) == ExitCode::constraint_violation);
  }
  SUBCASE("divergence") {
    auto doc = small_config();
    doc["schedule"]["alpha0"] = 1;
    doc["schedule"]["beta0"] = 1e300;
    RunOverrides o;
    o.allow_unsafe_schedule = true;
    CHECK(cmd_run(write_config(tmp.path, doc), o, out, err) == ExitCode::divergence);
    const json m = json::parse(slurp(tmp.path / "out" / "manifest.json"));
    CHECK(m["aborted"].size() == 3);
  }
  SUBCASE("unreadable config and unwritable output") {
    CHECK(cmd_run(tmp.path / "missing.json", {}, out, err) == ExitCode::io_failure);
    const fs::path blocker = tmp.path / "blocker";
    std::ofstream(blocker) << "x";
    RunOverrides o;
    o.output = blocker / "sub";
    CHECK(cmd_run(write_config(tmp.path, small_config()), o, out, err) == ExitCode::io_failure);
  }
  SUBCASE("malformed json") {
    const fs::path p = tmp.path / "broken.json";
    std::ofstream(p) << "{ not json";
    CHECK(cmd_run(p, {}, out, err) == ExitCode::config_error);
  }
}

TEST_CASE("cmd_quantile") {
  TempDir tmp;
  std::ostringstream out, err;
  REQUIRE(cmd_quantile(kData / "reference_dataset.txt", 3, std::nullopt, out, err) == ExitCode::ok);
  const std::string s = out.str();
  CHECK(s.find("p_interval = (0.7, 0.8)") != std::string::npos);
  CHECK(s.find("theta_p = 82") != std::string::npos);
  CHECK(s.find("topk_agents = 4 6 10") != std::string::npos);

  std::ostringstream err2;
  CHECK(cmd_quantile(kData / "reference_dataset.txt", std::nullopt, 0.5, out, err2) != ExitCode::ok);
  CHECK_FALSE(err2.str().empty());

  const fs::path single = tmp.path / "one.txt";
  std::ofstream(single) << "5\n";
  std::ostringstream out3;
  REQUIRE(cmd_quantile(single, 1, std::nullopt, out3, err) == ExitCode::ok);
  CHECK(out3.str().find("theta_p = 5\n") != std::string::npos);
}

TEST_CASE("cmd_baseline") {
  TempDir tmp;
  std::ostringstream out, err;
  REQUIRE(cmd_baseline(kData / "path_baseline.json", {}, out, err) == ExitCode::ok);
  CHECK(out.str().find("rounds_to_converge = 9") != std::string::npos);

  auto doc = small_config();
  doc["graph"] = json::parse(R"({"type": "complete", "n": 10})");
  std::ostringstream out2;
  RunOverrides quiet;
  quiet.sigma2 = 0.0;
  REQUIRE(cmd_baseline(write_config(tmp.path, doc), quiet, out2, err) == ExitCode::ok);
  CHECK(out2.str().find("rounds_to_converge = 1") != std::string::npos);

  std::ostringstream err3;
  CHECK(cmd_baseline(write_config(tmp.path, doc), {}, out, err3) == ExitCode::config_error);
  CHECK(err3.str().find("noise") != std::string::npos);
}
