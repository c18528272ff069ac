#pragma once

#include "topk/graph.hpp"
#include "topk/noise.hpp"
#include "topk/quantile.hpp"
#include "topk/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topk {

/// Which quantile to chase: either "the k largest" or an explicit level p.
struct Target {
  std::optional<std::size_t> k;
  std::optional<double> p;

  static Target top(std::size_t k) { return {k, std::nullopt}; }
  static Target level(double p) { return {std::nullopt, p}; }
  bool operator==(const Target&) const = default;
};

/// Quantile level for a target: the midpoint of the k-th-largest interval, or
/// the explicit p after admissibility checks.
double target_level(const Target& target, std::size_t n);

struct RecordCadence {
  enum class Mode { automatic, every, geometric, stride };
  Mode mode = Mode::automatic;
  std::uint64_t stride = 1;

  bool operator==(const RecordCadence&) const = default;
};

RecordCadence parse_record_cadence(const std::string& text);
std::string to_string(const RecordCadence& cadence);

/// Rounds at which a trace record is emitted for a horizon of T rounds.
/// Always contains 0 and T. `every` records each round; `geometric` records
/// floor(1.05^j), every power of ten and T; `automatic` is `every` up to
/// T = 10^4 and `geometric` beyond.
std::vector<std::uint64_t> recording_rounds(const RecordCadence& cadence, std::uint64_t horizon);

struct SimConfig {
  Graph graph;
  Dataset data;
  Target target;
  StepSchedule schedule;
  NoiseModel noise;
  std::uint64_t iterations = 1000;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  double decision_offset = 0.5;
  RecordCadence cadence;
  bool allow_unsafe_schedule = false;
};

/// A SimConfig with every derived quantity computed once and shared
/// read-only by all replications.
struct PreparedSim {
  SimConfig config;
  double p = 0.0;
  double theta = 0.0;
  SpectralInfo spectral;
  StepSchedule schedule;               // resolved
  std::vector<std::size_t> true_topk;  // 0-based, ascending
  std::vector<std::uint64_t> record_at;
};

/// Validates the config, computes the spectrum, resolves the schedule and the
/// oracle quantile. Throws ConfigError / ScheduleError / InvalidArgument.
PreparedSim prepare(SimConfig config);

struct TraceRecord {
  std::uint64_t t = 0;
  double consensus_error = 0.0;  // ||w - mean(w) 1||_2
  double mean_error = 0.0;       // |mean(w) - theta|
  double max_error = 0.0;        // max_i |w_i - theta|
  std::size_t topk_count = 0;    // |{i : z_i > w_i - offset}|
  bool topk_correct = false;

  bool operator==(const TraceRecord&) const = default;
};

/// Agents (0-based, ascending) that declare themselves in the top-k:
/// {i : z_i > w_i - offset}.
std::vector<std::size_t> topk_decision(std::span<const double> w, std::span<const double> z,
                                       double offset);

TraceRecord measure(std::uint64_t t, std::span<const double> w, const PreparedSim& sim);

struct ReplicationResult {
  std::size_t replication = 0;
  std::vector<TraceRecord> records;
  /// First round from which the decision was correct at every later round up
  /// to the horizon, evaluated on every round (not just recorded ones).
  std::optional<std::uint64_t> stable_from;
  std::vector<double> final_estimates;
  bool aborted = false;
  std::string diagnostic;
};

/// Runs one sample path: w(0) = z, then `iterations` synchronous rounds with
/// noise drawn from NoiseStream(base_seed, replication).
ReplicationResult run_replication(const PreparedSim& sim, std::size_t replication);

struct AggregateRow {
  std::uint64_t t = 0;
  double consensus_error = 0.0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double topk_count = 0.0;
  double frac_topk_correct = 0.0;

  bool operator==(const AggregateRow&) const = default;
};

/// Per-round means over the replications that completed, folded in
/// replication order.
struct AggregateTrace {
  std::vector<AggregateRow> rows;
  std::size_t completed = 0;
  std::size_t aborted = 0;
};

AggregateTrace aggregate(std::span<const ReplicationResult> runs);

struct MonteCarloResult {
  std::vector<ReplicationResult> replications;
  AggregateTrace aggregate;
};

/// Runs all replications on up to `jobs` threads (0 = hardware concurrency).
/// Results do not depend on `jobs`.
MonteCarloResult run_monte_carlo(const PreparedSim& sim, unsigned jobs = 1);

/// Smallest recorded t such that every record from t on has topk_correct;
/// nullopt if the last record is incorrect or the trace is empty.
std::optional<std::uint64_t> first_stable_decision_round(std::span<const TraceRecord> trace);

} // namespace topk
