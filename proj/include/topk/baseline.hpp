#pragma once

#include "topk/graph.hpp"
#include "topk/noise.hpp"
#include "topk/quantile.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace topk {

struct ListEntry {
  double value = 0.0;
  std::size_t origin = 0;  // 0-based agent id

  bool operator==(const ListEntry&) const = default;
};

/// Up to k entries with distinct origins, ordered by value descending then
/// origin ascending.
using TopKList = std::vector<ListEntry>;

/// True if `list` is ordered, has distinct origins and at most k entries.
bool is_valid_list(std::span<const ListEntry> list, std::size_t k);

/// Union of all lists, deduplicated by origin, truncated to the best k.
TopKList merge_lists(std::span<const ListEntry> own, std::span<const TopKList> received,
                     std::size_t k);

/// Sort oracle: the k best (value desc, origin asc) entries of the dataset.
TopKList global_topk(const Dataset& d, std::size_t k);

struct BaselineCost {
  std::size_t rounds = 0;
  /// Reals sent over all directed links across all rounds (k per link per round).
  std::size_t reals_transmitted = 0;
  /// Reals per directed link per round.
  std::size_t reals_per_link_round = 0;
  /// Memory slots per agent.
  std::size_t memory_slots_per_agent = 0;
};

struct BaselineResult {
  std::size_t rounds_to_converge = 0;
  std::vector<TopKList> lists;  // final list at each agent
  BaselineCost cost;
};

/// Noiseless list gossip: every agent starts with its own (value, id) and,
/// each synchronous round, merges the lists of all neighbors. Stops once every
/// list equals the global top-k. Throws InvalidArgument on a disconnected
/// graph or a noisy channel model.
BaselineResult run_baseline(const Graph& g, const Dataset& d, std::size_t k,
                            const NoiseModel& noise = NoiseModel::noiseless());

/// Per-round cost of the quantile algorithm for comparison: one real per
/// directed link and one memory slot per agent.
BaselineCost quantile_algorithm_cost(const Graph& g, std::size_t rounds);

} // namespace topk
