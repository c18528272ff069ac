#include "generators.hpp"

#include "topk/error.hpp"
#include "topk/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace topk;
using topk::testing::reference_values;

namespace {

Graph chords_graph() {
  auto edges = std::vector<Edge>{};
  for (std::size_t i = 0; i < 10; ++i) edges.emplace_back(i, (i + 1) % 10);
  edges.emplace_back(0, 5);
  edges.emplace_back(2, 7);
  return Graph(10, std::move(edges));
}

SimConfig reference_config(std::size_t k, double sigma2, std::uint64_t iterations,
                       std::size_t replications = 1) {
  SimConfig cfg{chords_graph(), Dataset(reference_values()), Target::top(k),
                StepSchedule{80.0, std::nullopt, 1.0, 0.505},
                sigma2 > 0 ? NoiseModel::gaussian(sigma2) : NoiseModel::noiseless()};
  cfg.iterations = iterations;
  cfg.replications = replications;
  cfg.base_seed = 1;
  return cfg;
}

std::vector<std::size_t> one_based(std::vector<std::size_t> ids) {
  for (auto& i : ids) ++i;
  return ids;
}

} // namespace

TEST_CASE("topk_decision examples") {
  const auto& z = reference_values();
  CHECK(one_based(topk_decision(std::vector<double>(10, 82.0), z, 0.5)) ==
        std::vector<std::size_t>{4, 6, 10});
  CHECK(one_based(topk_decision(std::vector<double>(10, 99.0), z, 0.5)) ==
        std::vector<std::size_t>{10});
  CHECK(topk_decision(z, z, 0.0).empty());
  CHECK_THROWS_AS(topk_decision(std::vector<double>(3, 0.0), z, 0.5), InvalidArgument);
}

TEST_CASE("target_level") {
  CHECK(target_level(Target::top(1), 10) == doctest::Approx(0.95));
  CHECK(target_level(Target::top(3), 10) == doctest::Approx(0.75));
  CHECK(target_level(Target::level(0.93), 10) == 0.93);
  CHECK_THROWS_AS(target_level(Target::level(0.5), 10), InvalidArgument);
  CHECK_THROWS_AS(target_level(Target{}, 10), ConfigError);
}

TEST_CASE("recording cadence") {
  const auto every = recording_rounds({RecordCadence::Mode::every, 1}, 5);
  CHECK(every == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5});
  const auto stride = recording_rounds(parse_record_cadence("4"), 10);
  CHECK(stride == std::vector<std::uint64_t>{0, 4, 8, 10});
  const auto geo = recording_rounds(parse_record_cadence("auto"), 100'000);
  CHECK(geo.front() == 0);
  CHECK(geo.back() == 100'000);
  CHECK(geo.size() < 300);
  for (std::uint64_t t : {1ull, 10ull, 100ull, 1000ull, 10'000ull}) {
    CHECK(std::find(geo.begin(), geo.end(), t) != geo.end());
  }
  CHECK(std::is_sorted(geo.begin(), geo.end()));
  CHECK(std::adjacent_find(geo.begin(), geo.end()) == geo.end());
  CHECK(recording_rounds(parse_record_cadence("auto"), 10'000).size() == 10'001);
  CHECK(to_string(parse_record_cadence("geometric")) == "geometric");
  CHECK_THROWS_AS(parse_record_cadence("0"), ConfigError);
  CHECK_THROWS_AS(parse_record_cadence("sometimes"), ConfigError);
}

TEST_CASE("prepare validates and derives") {
  const PreparedSim sim = prepare(reference_config(1, 10.0, 10));
  CHECK(sim.theta == 99.0);
  CHECK(sim.p == doctest::Approx(0.95));
  CHECK(sim.true_topk == std::vector<std::size_t>{9});
  CHECK(sim.schedule.beta0.has_value());

  auto bad = reference_config(1, 0.0, 0);
  CHECK_THROWS_AS(prepare(bad), ConfigError);
  bad = reference_config(1, 0.0, 10, 0);
  CHECK_THROWS_AS(prepare(bad), ConfigError);
  bad = reference_config(1, 0.0, 10);
  bad.data = Dataset({1.0, 2.0});
  CHECK_THROWS_AS(prepare(bad), ConfigError);
  bad = reference_config(1, 0.0, 10);
  bad.graph = Graph(10, {{0, 1}});
  CHECK_THROWS_AS(prepare(bad), ConfigError);
  bad = reference_config(1, 0.0, 10);
  bad.schedule.tau1 = 0.7;
  CHECK_THROWS_AS(prepare(bad), ScheduleError);
}

TEST_CASE("initial record reflects the data") {
  const PreparedSim sim = prepare(reference_config(3, 0.0, 1));
  const auto run = run_replication(sim, 0);
  REQUIRE(run.records.size() == 2);
  const auto& r0 = run.records.front();
  CHECK(r0.t == 0);
  const auto& z = reference_values();
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / 10.0;
  double ss = 0.0, mx = 0.0;
  for (double x : z) {
    ss += (x - mean) * (x - mean);
    mx = std::max(mx, std::abs(x - 82.0));
  }
  CHECK(r0.consensus_error == doctest::Approx(std::sqrt(ss)));
  CHECK(r0.mean_error == doctest::Approx(std::abs(mean - 82.0)));
  CHECK(r0.max_error == doctest::Approx(mx));
  CHECK(r0.topk_count == 10);  // w = z passes z > w - 0.5 everywhere
  CHECK_FALSE(r0.topk_correct);
}

TEST_CASE("noiseless run converges and decides") {
  const PreparedSim sim = prepare(reference_config(3, 0.0, 10'000));
  const auto run = run_replication(sim, 0);
  REQUIRE_FALSE(run.aborted);
  const auto at = [&](std::uint64_t t) {
    for (const auto& r : run.records)
      if (r.t == t) return r;
    FAIL("round not recorded");
    return TraceRecord{};
  };
  CHECK(at(10'000).max_error < at(100).max_error);
  CHECK(at(10'000).consensus_error < at(100).consensus_error);
  CHECK(at(10'000).topk_correct);
  REQUIRE(run.stable_from.has_value());
  const auto recorded = first_stable_decision_round(run.records);
  REQUIRE(recorded.has_value());
  // every round is recorded here, so both notions coincide
  CHECK(*recorded == *run.stable_from);
}

TEST_CASE("metric consistency: Pythagorean split") {
  const PreparedSim sim = prepare(reference_config(1, 10.0, 300));
  const auto run = run_replication(sim, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(90.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(10);
    for (auto& x : w) x = nd(rng);
    const TraceRecord r = measure(7, w, sim);
    double direct = 0.0;
    for (double x : w) direct += (x - sim.theta) * (x - sim.theta);
    const double split = r.consensus_error * r.consensus_error + 10.0 * r.mean_error * r.mean_error;
    CHECK(split == doctest::Approx(direct).epsilon(1e-6));
  }
  CHECK_FALSE(run.records.empty());
}

TEST_CASE("decision sanity under a small max error") {
  const PreparedSim sim = prepare(reference_config(5, 0.0, 1));
  // k=5: theta = 45, next value below is 44, gap 1
  std::vector<double> w(10, sim.theta + 0.49);
  const auto r = measure(0, w, sim);
  CHECK(r.max_error < 0.5);
  CHECK(r.topk_correct);
  CHECK(r.topk_count == 5);
}

TEST_CASE("determinism and replication independence") {
  const PreparedSim sim = prepare(reference_config(1, 10.0, 2000, 4));
  const auto a = run_replication(sim, 3);
  const auto b = run_replication(sim, 3);
  CHECK(a.records == b.records);
  CHECK(a.final_estimates == b.final_estimates);
  const auto c = run_replication(sim, 2);
  CHECK(a.final_estimates != c.final_estimates);

  auto other_seed = sim;
  other_seed.config.base_seed = 2;
  CHECK(run_replication(other_seed, 3).final_estimates != a.final_estimates);
}

TEST_CASE("monte carlo aggregate") {
  const PreparedSim one = prepare(reference_config(1, 10.0, 500, 1));
  const auto mc1 = run_monte_carlo(one, 1);
  const auto single = run_replication(one, 0);
  REQUIRE(mc1.aggregate.rows.size() == single.records.size());
  for (std::size_t k = 0; k < single.records.size(); ++k) {
    const auto& row = mc1.aggregate.rows[k];
    const auto& rec = single.records[k];
    CHECK(row.t == rec.t);
    CHECK(row.consensus_error == rec.consensus_error);
    CHECK(row.mean_error == rec.mean_error);
    CHECK(row.max_error == rec.max_error);
    CHECK(row.topk_count == static_cast<double>(rec.topk_count));
    CHECK(row.frac_topk_correct == (rec.topk_correct ? 1.0 : 0.0));
  }

  const PreparedSim many = prepare(reference_config(1, 10.0, 500, 7));
  const auto serial = run_monte_carlo(many, 1);
  const auto threaded = run_monte_carlo(many, 3);
  CHECK(serial.aggregate.rows == threaded.aggregate.rows);
  CHECK(serial.aggregate.completed == 7);

  // execution order does not matter: fold a reversed run list by index
  std::vector<ReplicationResult> reversed;
  for (std::size_t r = 7; r-- > 0;) reversed.push_back(run_replication(many, r));
  std::sort(reversed.begin(), reversed.end(),
            [](const auto& x, const auto& y) { return x.replication < y.replication; });
  CHECK(aggregate(reversed).rows == serial.aggregate.rows);
}

TEST_CASE("divergence aborts the replication") {
  auto cfg = reference_config(1, 10.0, 50, 3);
  cfg.schedule = StepSchedule{1.0, 1e300, 1.0, 0.505};
  cfg.allow_unsafe_schedule = true;
  const PreparedSim sim = prepare(cfg);
  const auto mc = run_monte_carlo(sim, 1);
  CHECK(mc.aggregate.aborted == 3);
  CHECK(mc.aggregate.completed == 0);
  for (const auto& r : mc.replications) {
    CHECK(r.aborted);
    CHECK(r.diagnostic.find("round") != std::string::npos);
  }
}

TEST_CASE("first_stable_decision_round") {
  auto rec = [](std::uint64_t t, bool ok) {
    TraceRecord r;
    r.t = t;
    r.topk_correct = ok;
    return r;
  };
  std::vector<TraceRecord> trace;
  for (std::uint64_t t = 0; t < 100; ++t) trace.push_back(rec(t, t >= 61));
  CHECK(first_stable_decision_round(trace) == std::optional<std::uint64_t>{61});
  trace.back().topk_correct = false;
  CHECK_FALSE(first_stable_decision_round(trace).has_value());
  std::vector<TraceRecord> always{rec(5, true), rec(9, true)};
  CHECK(first_stable_decision_round(always) == std::optional<std::uint64_t>{5});
  CHECK_FALSE(first_stable_decision_round({}).has_value());
}
