#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace topk {

inline constexpr const char* kVersion = "0.1.0";

enum class ExitCode : int {
  ok = 0,
  usage = 1,
  config_error = 2,
  constraint_violation = 3,
  divergence = 4,
  io_failure = 5,
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> iterations;
  std::optional<double> sigma2;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::optional<std::filesystem::path> output;
  unsigned jobs = 1;
  bool allow_unsafe_schedule = false;
};

/// Runs the Monte Carlo experiment described by a config file and writes
///   <dir>/aggregate.csv, <dir>/replications/replication_NNNN.csv,
///   <dir>/manifest.json, <dir>/resolved_config.json
ExitCode cmd_run(const std::filesystem::path& config, const RunOverrides& overrides,
                 std::ostream& out, std::ostream& err);

/// Centralized answer for a data file: theta_p, the p-interval and the top-k agents.
ExitCode cmd_quantile(const std::filesystem::path& data_file, std::optional<std::size_t> k,
                      std::optional<double> p, std::ostream& out, std::ostream& err);

/// Runs noiseless list gossip on the config's graph and data and prints the
/// convergence round and a cost comparison table.
ExitCode cmd_baseline(const std::filesystem::path& config, const RunOverrides& overrides,
                      std::ostream& out, std::ostream& err);

} // namespace topk
