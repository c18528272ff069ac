#pragma once

#include "topk/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace topk {

using Edge = std::pair<std::size_t, std::size_t>;

/// Static undirected simple graph on nodes 0..n-1.
///
/// Neighbor lists are sorted. Directed links j->i are ranked in lexicographic
/// (sender, receiver) order; that rank is the key used for per-link noise.
class Graph {
public:
  /// Edges are unordered pairs of 0-based node ids. Self-loops, duplicates and
  /// out-of-range endpoints throw InvalidArgument.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  /// Normalized (i < j) edges in lexicographic order.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {adj_.data() + offset_[i], offset_[i + 1] - offset_[i]};
  }
  std::size_t degree(std::size_t i) const { return offset_[i + 1] - offset_[i]; }
  std::size_t max_degree() const;
  std::size_t directed_link_count() const { return adj_.size(); }

  /// Rank of the directed link sender -> receiver. They must be adjacent.
  std::size_t link_rank(std::size_t sender, std::size_t receiver) const;
  /// Ranks of the links j -> i for the neighbors j of i, in neighbor order.
  std::span<const std::size_t> incoming_ranks(std::size_t i) const {
    return {incoming_.data() + offset_[i], degree(i)};
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> adj_;
  std::vector<std::size_t> incoming_;
};

struct SpectralInfo {
  double lambda2 = 0.0;
  double lambdaN = 0.0;
  std::vector<double> spectrum;
};

/// L = D - A.
Matrix laplacian(const Graph& g);

/// Second-smallest and largest Laplacian eigenvalues (Jacobi eigensolver).
SpectralInfo spectral_extremes(const Graph& g);

bool is_connected(const Graph& g);

/// Longest shortest-path length; throws InvalidArgument on a disconnected graph.
std::size_t diameter(const Graph& g);

enum class GraphKind { ring, path, complete, erdos_renyi, explicit_edges };

struct GraphSpec {
  GraphKind kind = GraphKind::ring;
  std::size_t n = 0;
  double edge_prob = 0.5;       // erdos_renyi only
  std::vector<Edge> edges;      // explicit_edges only, 0-based
};

/// Builds the requested topology. Erdos-Renyi graphs are redrawn with seeds
/// seed, seed+1, ... until connected (at most 1000 attempts).
Graph make_graph(const GraphSpec& spec, std::uint64_t seed = 0);

GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);

/// Edge-list text: one "i j" pair per line, 1-based, '#' starts a comment.
/// Returned edges are 0-based.
std::vector<Edge> parse_edge_list(std::istream& in);
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

} // namespace topk
