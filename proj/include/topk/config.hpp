#pragma once

#include "topk/graph.hpp"
#include "topk/noise.hpp"
#include "topk/schedule.hpp"
#include "topk/simulator.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace topk {

/// File form of a simulation. The on-disk dialect is JSON:
///
///   {
///     "graph":    {"type": "ring|path|complete|erdos_renyi|explicit", "n": 10,
///                  "edge_prob": 0.5, "seed": 0, "edges_file": "g.edges" | "edges": [[1,2],...]},
///     "data":     {"values": [...]} | {"file": "data.txt"} |
///                 {"generator": {"type": "uniform_int", "lo": 1, "hi": 100, "seed": 0}},
///     "target":   {"k": 1} | {"p": 0.95},
///     "schedule": {"alpha0": 80, "beta0": "auto", "tau1": 1, "tau2": 0.505},
///     "noise":    {"type": "gaussian", "sigma2": 10},
///     "run":      {"iterations": 100000, "replications": 100, "seed": 1,
///                  "record_cadence": "auto", "decision_offset": 0.5},
///     "output":   {"dir": "out"}
///   }
///
/// Unknown keys are errors. Relative paths resolve against the config file's
/// directory.
struct ExperimentConfig {
  GraphSpec graph;
  std::uint64_t graph_seed = 0;
  std::vector<double> data;
  Target target;
  StepSchedule schedule;
  bool allow_unsafe_schedule = false;
  NoiseModel noise;
  std::uint64_t iterations = 0;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  RecordCadence cadence;
  double decision_offset = 0.5;
  std::filesystem::path output_dir = "output";
};

inline constexpr const char* kConfigFormat = "json";

ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runnable config with graph edges and data values inlined.
nlohmann::json to_json(const ExperimentConfig& cfg);

Graph build_graph(const ExperimentConfig& cfg);
SimConfig to_sim_config(const ExperimentConfig& cfg);

/// Whitespace-separated numbers, '#' comments, one value per agent in order.
std::vector<double> parse_data(std::istream& in);
std::vector<double> read_data_file(const std::filesystem::path& path);

} // namespace topk
