#include "topk/config.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace topk {

using nlohmann::json;

namespace {

std::string key_path(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

const json& section_of(const json& doc, const std::string& name) {
  if (!doc.contains(name)) {
    throw ConfigError("missing section '" + name + "'");
  }
  const json& s = doc.at(name);
  if (!s.is_object()) {
    throw ConfigError("section '" + name + "' must be an object");
  }
  return s;
}

void check_keys(const json& obj, const std::string& section, std::set<std::string> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key_path(section, key) + "'");
    }
  }
}

double number(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key_path(section, key) + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError("'" + key_path(section, key) + "' must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError("'" + key_path(section, key) + "' must be finite");
  }
  return x;
}

std::uint64_t count(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key_path(section, key) + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError("'" + key_path(section, key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key_path(section, key) + "'");
  }
  if (!obj.at(key).is_string()) {
    throw ConfigError("'" + key_path(section, key) + "' must be a string");
  }
  return obj.at(key).get<std::string>();
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path& path, const std::string& key) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("'" + key + "' refers to a missing file: " + path.string());
  }
}

std::vector<Edge> parse_inline_edges(const json& edges) {
  if (!edges.is_array()) {
    throw ConfigError("'graph.edges' must be an array of [i, j] pairs");
  }
  std::vector<Edge> out;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<long long>() < 1 || e[1].get<long long>() < 1) {
      throw ConfigError("'graph.edges' entries must be [i, j] with 1-based node ids");
    }
    out.emplace_back(e[0].get<std::size_t>() - 1, e[1].get<std::size_t>() - 1);
  }
  return out;
}

void parse_graph(const json& s, const std::filesystem::path& base, ExperimentConfig& cfg) {
  check_keys(s, "graph", {"type", "n", "edge_prob", "seed", "edges_file", "edges"});
  try {
    cfg.graph.kind = parse_graph_kind(text(s, "graph", "type"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  cfg.graph.n = count(s, "graph", "n");
  if (s.contains("seed")) {
    cfg.graph_seed = count(s, "graph", "seed");
  }
  if (cfg.graph.kind == GraphKind::erdos_renyi) {
    cfg.graph.edge_prob = number(s, "graph", "edge_prob");
  } else if (s.contains("edge_prob")) {
    throw ConfigError("'graph.edge_prob' only applies to erdos_renyi graphs");
  }
  const bool has_file = s.contains("edges_file");
  const bool has_inline = s.contains("edges");
  if (cfg.graph.kind == GraphKind::explicit_edges) {
    if (has_file == has_inline) {
      throw ConfigError("explicit graphs need exactly one of 'graph.edges_file' or 'graph.edges'");
    }
    if (has_file) {
      const auto path = resolve_path(base, text(s, "graph", "edges_file"));
      require_file(path, "graph.edges_file");
      try {
        cfg.graph.edges = read_edge_list(path);
      } catch (const InvalidArgument& e) {
        throw ConfigError(path.string() + ": " + e.what());
      }
    } else {
      cfg.graph.edges = parse_inline_edges(s.at("edges"));
    }
  } else if (has_file || has_inline) {
    throw ConfigError("edge lists only apply to graph type 'explicit'");
  }
}

std::vector<double> generate_uniform_int(const json& g, std::size_t n) {
  check_keys(g, "data.generator", {"type", "lo", "hi", "seed"});
  if (text(g, "data.generator", "type") != "uniform_int") {
    throw ConfigError("'data.generator.type' must be 'uniform_int'");
  }
  const double lo = number(g, "data.generator", "lo");
  const double hi = number(g, "data.generator", "hi");
  if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo) {
    throw ConfigError("'data.generator' needs integer bounds lo <= hi");
  }
  const std::uint64_t seed = g.contains("seed") ? count(g, "data.generator", "seed") : 0;
  std::mt19937_64 rng(seed);
  const double span = hi - lo + 1.0;
  std::vector<double> values(n);
  for (auto& v : values) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = lo + std::floor(u * span);
  }
  return values;
}

void parse_data_section(const json& s, const std::filesystem::path& base, ExperimentConfig& cfg) {
  check_keys(s, "data", {"values", "file", "generator"});
  const int sources = static_cast<int>(s.contains("values")) + static_cast<int>(s.contains("file")) +
                      static_cast<int>(s.contains("generator"));
  if (sources != 1) {
    throw ConfigError("'data' needs exactly one of 'values', 'file' or 'generator'");
  }
  if (s.contains("values")) {
    const json& v = s.at("values");
    if (!v.is_array()) {
      throw ConfigError("'data.values' must be an array of numbers");
    }
    for (const auto& x : v) {
      if (!x.is_number()) {
        throw ConfigError("'data.values' must be an array of numbers");
      }
      cfg.data.push_back(x.get<double>());
    }
  } else if (s.contains("file")) {
    const auto path = resolve_path(base, text(s, "data", "file"));
    require_file(path, "data.file");
    cfg.data = read_data_file(path);
  } else {
    const json& g = s.at("generator");
    if (!g.is_object()) {
      throw ConfigError("'data.generator' must be an object");
    }
    cfg.data = generate_uniform_int(g, cfg.graph.n);
  }
}

void parse_target(const json& s, ExperimentConfig& cfg) {
  check_keys(s, "target", {"k", "p"});
  if (s.contains("k") == s.contains("p")) {
    throw ConfigError("'target' needs exactly one of 'k' or 'p'");
  }
  if (s.contains("k")) {
    cfg.target = Target::top(count(s, "target", "k"));
  } else {
    cfg.target = Target::level(number(s, "target", "p"));
  }
}

void parse_schedule(const json& s, ExperimentConfig& cfg) {
  check_keys(s, "schedule", {"alpha0", "beta0", "tau1", "tau2", "allow_unsafe"});
  cfg.schedule.alpha0 = number(s, "schedule", "alpha0");
  cfg.schedule.tau1 = number(s, "schedule", "tau1");
  cfg.schedule.tau2 = number(s, "schedule", "tau2");
  cfg.schedule.beta0.reset();
  if (s.contains("beta0")) {
    const json& b = s.at("beta0");
    if (b.is_string()) {
      if (b.get<std::string>() != "auto") {
        throw ConfigError("'schedule.beta0' must be a number or \"auto\"");
      }
    } else {
      cfg.schedule.beta0 = number(s, "schedule", "beta0");
    }
  }
  if (s.contains("allow_unsafe")) {
    if (!s.at("allow_unsafe").is_boolean()) {
      throw ConfigError("'schedule.allow_unsafe' must be a boolean");
    }
    cfg.allow_unsafe_schedule = s.at("allow_unsafe").get<bool>();
  }
}

void parse_noise(const json& s, ExperimentConfig& cfg) {
  check_keys(s, "noise", {"type", "sigma2"});
  NoiseKind kind;
  try {
    kind = parse_noise_kind(text(s, "noise", "type"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const double sigma2 = s.contains("sigma2") ? number(s, "noise", "sigma2") : 0.0;
  if (sigma2 < 0.0) {
    throw ConfigError("'noise.sigma2' must be >= 0");
  }
  if (kind == NoiseKind::none) {
    if (sigma2 != 0.0) {
      throw ConfigError("'noise.sigma2' must be 0 (or absent) when noise.type is 'none'");
    }
    cfg.noise = NoiseModel::noiseless();
  } else {
    if (!s.contains("sigma2")) {
      throw ConfigError("missing key 'noise.sigma2'");
    }
    cfg.noise = NoiseModel::gaussian(sigma2);
  }
}

void parse_run(const json& s, ExperimentConfig& cfg) {
  check_keys(s, "run", {"iterations", "replications", "seed", "record_cadence", "decision_offset"});
  cfg.iterations = count(s, "run", "iterations");
  if (s.contains("replications")) {
    cfg.replications = count(s, "run", "replications");
  }
  if (s.contains("seed")) {
    cfg.seed = count(s, "run", "seed");
  }
  if (s.contains("record_cadence")) {
    const json& c = s.at("record_cadence");
    cfg.cadence = parse_record_cadence(c.is_number_integer() ? std::to_string(c.get<long long>())
                                                             : text(s, "run", "record_cadence"));
  }
  if (s.contains("decision_offset")) {
    cfg.decision_offset = number(s, "run", "decision_offset");
  }
}

} // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  check_keys(doc, "", {"graph", "data", "target", "schedule", "noise", "run", "output"});
  ExperimentConfig cfg;
  parse_graph(section_of(doc, "graph"), base_dir, cfg);
  parse_data_section(section_of(doc, "data"), base_dir, cfg);
  parse_target(section_of(doc, "target"), cfg);
  parse_schedule(section_of(doc, "schedule"), cfg);
  if (doc.contains("noise")) {
    parse_noise(section_of(doc, "noise"), cfg);
  }
  parse_run(section_of(doc, "run"), cfg);
  if (doc.contains("output")) {
    const json& out = section_of(doc, "output");
    check_keys(out, "output", {"dir"});
    cfg.output_dir = resolve_path(base_dir, text(out, "output", "dir"));
  }
  if (cfg.data.size() != cfg.graph.n) {
    throw ConfigError("data has " + std::to_string(cfg.data.size()) + " values but graph.n = " +
                      std::to_string(cfg.graph.n));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

json to_json(const ExperimentConfig& cfg) {
  json graph{{"type", to_string(cfg.graph.kind)}, {"n", cfg.graph.n}};
  if (cfg.graph.kind == GraphKind::erdos_renyi) {
    graph["edge_prob"] = cfg.graph.edge_prob;
    graph["seed"] = cfg.graph_seed;
  }
  if (cfg.graph.kind == GraphKind::explicit_edges) {
    json edges = json::array();
    for (const auto& [a, b] : cfg.graph.edges) {
      edges.push_back({a + 1, b + 1});
    }
    graph["edges"] = edges;
  }

  json target = cfg.target.k ? json{{"k", *cfg.target.k}} : json{{"p", *cfg.target.p}};
  json schedule{{"alpha0", cfg.schedule.alpha0},
                {"tau1", cfg.schedule.tau1},
                {"tau2", cfg.schedule.tau2}};
  schedule["beta0"] = cfg.schedule.beta0 ? json(*cfg.schedule.beta0) : json("auto");
  if (cfg.allow_unsafe_schedule) {
    schedule["allow_unsafe"] = true;
  }
  json noise{{"type", to_string(cfg.noise.kind)}};
  if (cfg.noise.kind == NoiseKind::gaussian) {
    noise["sigma2"] = cfg.noise.sigma2;
  }
  json run{{"iterations", cfg.iterations},
           {"replications", cfg.replications},
           {"seed", cfg.seed},
           {"record_cadence", to_string(cfg.cadence)},
           {"decision_offset", cfg.decision_offset}};

  return json{{"graph", graph},
              {"data", {{"values", cfg.data}}},
              {"target", target},
              {"schedule", schedule},
              {"noise", noise},
              {"run", run},
              {"output", {{"dir", cfg.output_dir.string()}}}};
}

Graph build_graph(const ExperimentConfig& cfg) {
  try {
    return make_graph(cfg.graph, cfg.graph_seed);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

SimConfig to_sim_config(const ExperimentConfig& cfg) {
  Dataset data = [&] {
    try {
      return Dataset(cfg.data);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("data: ") + e.what());
    }
  }();
  return SimConfig{build_graph(cfg),
                   std::move(data),
                   cfg.target,
                   cfg.schedule,
                   cfg.noise,
                   cfg.iterations,
                   cfg.replications,
                   cfg.seed,
                   cfg.decision_offset,
                   cfg.cadence,
                   cfg.allow_unsafe_schedule};
}

std::vector<double> parse_data(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(x)) {
        throw ConfigError("data line " + std::to_string(lineno) + ": '" + tok + "' is not a finite number");
      }
      values.push_back(x);
    }
  }
  return values;
}

std::vector<double> read_data_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open data file " + path.string());
  }
  return parse_data(in);
}

} // namespace topk
