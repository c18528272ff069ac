#pragma once

// Hand-rolled generators for the property tests.

#include "topk/graph.hpp"
#include "topk/quantile.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace topk::testing {

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, bool integer) {
  std::uniform_real_distribution<double> real(-50.0, 50.0);
  std::uniform_int_distribution<int> small(0, 12);  // narrow range forces duplicates
  std::vector<double> v(n);
  for (auto& x : v) {
    x = integer ? static_cast<double>(small(rng)) : real(rng);
  }
  return v;
}

/// Uniform p in (0,1) redrawn until n*p is not an integer.
inline double random_admissible_p(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double p = u(rng);
    if (QuantileParam::admissible(p, n)) {
      return p;
    }
  }
}

/// Connected graph: random spanning tree plus extra edges with probability q.
inline Graph random_connected_graph(std::mt19937_64& rng, std::size_t n, double q) {
  std::vector<Edge> edges;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || has[a][b]) return;
    has[a][b] = has[b][a] = 1;
    edges.emplace_back(a, b);
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    add(order[i], order[pick(rng)]);
  }
  std::bernoulli_distribution extra(q);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (extra(rng)) add(a, b);
    }
  }
  return Graph(n, std::move(edges));
}

inline const std::vector<double>& reference_values() {
  static const std::vector<double> v{45, 8, 22, 91, 15, 82, 53, 7, 44, 99};
  return v;
}

} // namespace topk::testing
