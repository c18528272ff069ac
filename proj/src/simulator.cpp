#include "topk/simulator.hpp"

#include "topk/error.hpp"
#include "topk/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <cmath>
#include <thread>

namespace topk {

double target_level(const Target& target, std::size_t n) {
  if (target.k.has_value() == target.p.has_value()) {
    throw ConfigError("target must give exactly one of k or p");
  }
  if (target.k) {
    return p_interval_for_k(n, *target.k).mid;
  }
  return QuantileParam(*target.p, n).p();
}

RecordCadence parse_record_cadence(const std::string& text) {
  if (text == "auto") return {RecordCadence::Mode::automatic, 1};
  if (text == "every") return {RecordCadence::Mode::every, 1};
  if (text == "geometric") return {RecordCadence::Mode::geometric, 1};
  std::uint64_t stride = 0;
  const auto* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, stride); ec == std::errc{} && ptr == end && stride > 0) {
    return {RecordCadence::Mode::stride, stride};
  }
  throw ConfigError("record_cadence must be auto, every, geometric or a positive integer (got '" +
                    text + "')");
}

std::string to_string(const RecordCadence& cadence) {
  switch (cadence.mode) {
  case RecordCadence::Mode::automatic: return "auto";
  case RecordCadence::Mode::every: return "every";
  case RecordCadence::Mode::geometric: return "geometric";
  case RecordCadence::Mode::stride: return std::to_string(cadence.stride);
  }
  return "auto";
}

std::vector<std::uint64_t> recording_rounds(const RecordCadence& cadence, std::uint64_t horizon) {
  auto mode = cadence.mode;
  if (mode == RecordCadence::Mode::automatic) {
    mode = horizon <= 10'000 ? RecordCadence::Mode::every : RecordCadence::Mode::geometric;
  }
  std::vector<std::uint64_t> rounds{0};
  switch (mode) {
  case RecordCadence::Mode::every:
  case RecordCadence::Mode::stride: {
    const std::uint64_t step = mode == RecordCadence::Mode::every ? 1 : cadence.stride;
    for (std::uint64_t t = step; t <= horizon; t += step) {
      rounds.push_back(t);
    }
    break;
  }
  case RecordCadence::Mode::geometric:
  case RecordCadence::Mode::automatic: {
    for (int j = 0;; ++j) {
      const auto t = static_cast<std::uint64_t>(std::floor(std::pow(1.05, j)));
      if (t > horizon) {
        break;
      }
      rounds.push_back(t);
    }
    for (std::uint64_t t = 1; t <= horizon; t *= 10) {
      rounds.push_back(t);
    }
    break;
  }
  }
  rounds.push_back(horizon);
  std::sort(rounds.begin(), rounds.end());
  rounds.erase(std::unique(rounds.begin(), rounds.end()), rounds.end());
  return rounds;
}

PreparedSim prepare(SimConfig config) {
  const std::size_t n = config.graph.size();
  if (config.data.size() != n) {
    throw ConfigError("dataset has " + std::to_string(config.data.size()) +
                      " values but the graph has " + std::to_string(n) + " agents");
  }
  if (config.iterations < 1) {
    throw ConfigError("iterations must be >= 1");
  }
  if (config.replications < 1) {
    throw ConfigError("replications must be >= 1");
  }
  if (!std::isfinite(config.decision_offset)) {
    throw ConfigError("decision_offset must be finite");
  }
  if (!is_connected(config.graph)) {
    throw ConfigError("communication graph is not connected");
  }

  const double p = target_level(config.target, n);
  const double theta = sample_quantile(config.data, QuantileParam(p, n));
  SpectralInfo spectral = spectral_extremes(config.graph);
  StepSchedule schedule = resolve(config.schedule, spectral, config.allow_unsafe_schedule);
  auto truth = agents_at_or_above(config.data, theta);
  auto record_at = recording_rounds(config.cadence, config.iterations);

  return PreparedSim{std::move(config), p,
                     theta,             std::move(spectral),
                     schedule,          std::move(truth),
                     std::move(record_at)};
}

std::vector<std::size_t> topk_decision(std::span<const double> w, std::span<const double> z,
                                       double offset) {
  if (w.size() != z.size()) {
    throw InvalidArgument("estimate and data vectors differ in length");
  }
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (z[i] > w[i] - offset) {
      ids.push_back(i);
    }
  }
  return ids;
}

namespace {

bool decision_matches(std::span<const double> w, std::span<const double> z, double offset,
                      const std::vector<char>& truth, std::size_t& count) {
  bool ok = true;
  count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool in = z[i] > w[i] - offset;
    count += in ? 1 : 0;
    ok = ok && (in == static_cast<bool>(truth[i]));
  }
  return ok;
}

std::vector<char> membership(const PreparedSim& sim) {
  std::vector<char> truth(sim.config.graph.size(), 0);
  for (auto i : sim.true_topk) {
    truth[i] = 1;
  }
  return truth;
}

} // namespace

TraceRecord measure(std::uint64_t t, std::span<const double> w, const PreparedSim& sim) {
  const std::size_t n = w.size();
  double mean = 0.0;
  for (double x : w) {
    mean += x;
  }
  mean /= static_cast<double>(n);

  TraceRecord rec;
  rec.t = t;
  double sq = 0.0;
  for (double x : w) {
    sq += (x - mean) * (x - mean);
    rec.max_error = std::max(rec.max_error, std::abs(x - sim.theta));
  }
  rec.consensus_error = std::sqrt(sq);
  rec.mean_error = std::abs(mean - sim.theta);
  rec.topk_correct = decision_matches(w, sim.config.data.values(), sim.config.decision_offset,
                                      membership(sim), rec.topk_count);
  return rec;
}

ReplicationResult run_replication(const PreparedSim& sim, std::size_t replication) {
  const SimConfig& cfg = sim.config;
  const Graph& g = cfg.graph;
  const auto z = cfg.data.values();
  const std::vector<char> truth = membership(sim);
  const NoiseStream stream(cfg.base_seed, replication);

  ReplicationResult result;
  result.replication = replication;
  result.records.reserve(sim.record_at.size());

  std::vector<double> w(z.begin(), z.end());
  std::vector<double> scratch;
  RoundNoise noise{std::vector<double>(g.directed_link_count(), 0.0)};
  auto next_record = sim.record_at.begin();
  std::optional<std::uint64_t> last_wrong;

  for (std::uint64_t t = 0;; ++t) {
    std::size_t count = 0;
    if (!decision_matches(w, z, cfg.decision_offset, truth, count)) {
      last_wrong = t;
    }
    if (next_record != sim.record_at.end() && *next_record == t) {
      result.records.push_back(measure(t, w, sim));
      ++next_record;
    }
    if (t == cfg.iterations) {
      break;
    }
    draw_round_noise(cfg.noise, stream, t, noise);
    try {
      step_in_place(w, z, g, sim.p, alpha(sim.schedule, t), beta(sim.schedule, t), noise, scratch);
    } catch (const DivergenceError& e) {
      result.aborted = true;
      result.diagnostic = "round " + std::to_string(t) + ": " + e.what();
      result.final_estimates = w;
      return result;
    }
  }

  if (!last_wrong) {
    result.stable_from = 0;
  } else if (*last_wrong < cfg.iterations) {
    result.stable_from = *last_wrong + 1;
  }
  result.final_estimates = std::move(w);
  return result;
}

AggregateTrace aggregate(std::span<const ReplicationResult> runs) {
  AggregateTrace agg;
  for (const auto& run : runs) {
    if (run.aborted) {
      ++agg.aborted;
      continue;
    }
    if (agg.completed == 0) {
      agg.rows.resize(run.records.size());
      for (std::size_t k = 0; k < run.records.size(); ++k) {
        agg.rows[k].t = run.records[k].t;
      }
    } else if (run.records.size() != agg.rows.size()) {
      throw InvalidArgument("replications recorded different rounds");
    }
    for (std::size_t k = 0; k < run.records.size(); ++k) {
      const auto& rec = run.records[k];
      auto& row = agg.rows[k];
      row.consensus_error += rec.consensus_error;
      row.mean_error += rec.mean_error;
      row.max_error += rec.max_error;
      row.topk_count += static_cast<double>(rec.topk_count);
      row.frac_topk_correct += rec.topk_correct ? 1.0 : 0.0;
    }
    ++agg.completed;
  }
  if (agg.completed > 0) {
    const auto r = static_cast<double>(agg.completed);
    for (auto& row : agg.rows) {
      row.consensus_error /= r;
      row.mean_error /= r;
      row.max_error /= r;
      row.topk_count /= r;
      row.frac_topk_correct /= r;
    }
  }
  return agg;
}

MonteCarloResult run_monte_carlo(const PreparedSim& sim, unsigned jobs) {
  const std::size_t reps = sim.config.replications;
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, reps));

  MonteCarloResult out;
  out.replications.resize(reps);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(reps);
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        out.replications[r] = run_replication(sim, r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
  out.aggregate = aggregate(out.replications);
  return out;
}

std::optional<std::uint64_t> first_stable_decision_round(std::span<const TraceRecord> trace) {
  std::optional<std::uint64_t> stable;
  for (auto it = trace.rbegin(); it != trace.rend() && it->topk_correct; ++it) {
    stable = it->t;
  }
  return stable;
}

} // namespace topk
