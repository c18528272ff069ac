#include "topk/baseline.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <string>

namespace topk {

namespace {

bool ranks_before(const ListEntry& a, const ListEntry& b) {
  return a.value > b.value || (a.value == b.value && a.origin < b.origin);
}

} // namespace

bool is_valid_list(std::span<const ListEntry> list, std::size_t k) {
  if (list.size() > k) {
    return false;
  }
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (!ranks_before(list[i - 1], list[i])) {
      return false;
    }
  }
  std::vector<std::size_t> origins;
  for (const auto& e : list) {
    origins.push_back(e.origin);
  }
  std::sort(origins.begin(), origins.end());
  return std::adjacent_find(origins.begin(), origins.end()) == origins.end();
}

TopKList merge_lists(std::span<const ListEntry> own, std::span<const TopKList> received,
                     std::size_t k) {
  TopKList all(own.begin(), own.end());
  for (const auto& list : received) {
    all.insert(all.end(), list.begin(), list.end());
  }
  std::sort(all.begin(), all.end(), ranks_before);
  TopKList merged;
  merged.reserve(k);
  for (const auto& e : all) {
    if (merged.size() == k) {
      break;
    }
    const bool seen = std::any_of(merged.begin(), merged.end(),
                                  [&](const ListEntry& m) { return m.origin == e.origin; });
    if (!seen) {
      merged.push_back(e);
    }
  }
  return merged;
}

TopKList global_topk(const Dataset& d, std::size_t k) {
  TopKList all;
  for (std::size_t i = 0; i < d.size(); ++i) {
    all.push_back({d[i], i});
  }
  std::sort(all.begin(), all.end(), ranks_before);
  all.resize(std::min(k, all.size()));
  return all;
}

BaselineResult run_baseline(const Graph& g, const Dataset& d, std::size_t k,
                            const NoiseModel& noise) {
  if (noise.kind != NoiseKind::none && noise.sigma2 > 0.0) {
    throw InvalidArgument(
        "list gossip requires noiseless links: a perturbed value can never be discarded, "
        "so the lists would not converge");
  }
  if (k < 1 || k > d.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(d.size()) + "]");
  }
  if (g.size() != d.size()) {
    throw InvalidArgument("dataset size does not match graph size");
  }
  if (!is_connected(g)) {
    throw InvalidArgument("list gossip needs a connected graph");
  }

  const std::size_t n = g.size();
  const TopKList target = global_topk(d, k);
  BaselineResult result;
  result.lists.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.lists[i] = {{d[i], i}};
  }
  auto converged = [&] {
    return std::all_of(result.lists.begin(), result.lists.end(),
                       [&](const TopKList& l) { return l == target; });
  };

  std::size_t rounds = 0;
  std::vector<TopKList> inbox;
  // A connected graph spreads every entry within diameter <= n-1 rounds.
  while (!converged()) {
    if (rounds >= n) {
      throw NumericalError("list gossip failed to converge within n rounds");
    }
    std::vector<TopKList> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      inbox.clear();
      for (auto j : g.neighbors(i)) {
        inbox.push_back(result.lists[j]);
      }
      next[i] = merge_lists(result.lists[i], inbox, k);
    }
    result.lists = std::move(next);
    ++rounds;
  }

  result.rounds_to_converge = rounds;
  result.cost.rounds = rounds;
  result.cost.reals_per_link_round = k;
  result.cost.reals_transmitted = k * g.directed_link_count() * rounds;
  result.cost.memory_slots_per_agent = k;
  return result;
}

BaselineCost quantile_algorithm_cost(const Graph& g, std::size_t rounds) {
  return {rounds, g.directed_link_count() * rounds, 1, 1};
}

} // namespace topk
