#include "topk/graph.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

namespace topk {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ == 0) {
    throw InvalidArgument("graph must have at least one node");
  }
  for (auto& [a, b] : edges_) {
    if (a >= n_ || b >= n_) {
      throw InvalidArgument("edge {" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                            "} references a node outside 1.." + std::to_string(n_));
    }
    if (a == b) {
      throw InvalidArgument("self-loop at node " + std::to_string(a + 1));
    }
    if (a > b) {
      std::swap(a, b);
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InvalidArgument("duplicate edge {" + std::to_string(dup->first + 1) + "," +
                          std::to_string(dup->second + 1) + "}");
  }

  std::vector<std::vector<std::size_t>> lists(n_);
  for (const auto& [a, b] : edges_) {
    lists[a].push_back(b);
    lists[b].push_back(a);
  }
  offset_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::sort(lists[i].begin(), lists[i].end());
    offset_[i + 1] = offset_[i] + lists[i].size();
    adj_.insert(adj_.end(), lists[i].begin(), lists[i].end());
  }
  incoming_.resize(adj_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = offset_[i]; k < offset_[i + 1]; ++k) {
      incoming_[k] = link_rank(adj_[k], i);
    }
  }
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    d = std::max(d, degree(i));
  }
  return d;
}

std::size_t Graph::link_rank(std::size_t sender, std::size_t receiver) const {
  const auto nb = neighbors(sender);
  const auto it = std::lower_bound(nb.begin(), nb.end(), receiver);
  if (it == nb.end() || *it != receiver) {
    throw InvalidArgument("nodes " + std::to_string(sender + 1) + " and " +
                          std::to_string(receiver + 1) + " are not adjacent");
  }
  return offset_[sender] + static_cast<std::size_t>(it - nb.begin());
}

Matrix laplacian(const Graph& g) {
  Matrix l(g.size());
  for (const auto& [a, b] : g.edges()) {
    l(a, a) += 1.0;
    l(b, b) += 1.0;
    l(a, b) -= 1.0;
    l(b, a) -= 1.0;
  }
  return l;
}

SpectralInfo spectral_extremes(const Graph& g) {
  SpectralInfo info;
  info.spectrum = symmetric_eigenvalues(laplacian(g));
  info.lambda2 = info.spectrum.size() > 1 ? info.spectrum[1] : 0.0;
  info.lambdaN = info.spectrum.back();
  return info;
}

namespace {

std::vector<std::size_t> bfs_depths(const Graph& g, std::size_t source) {
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> depth(g.size(), unseen);
  std::queue<std::size_t> frontier;
  depth[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : g.neighbors(u)) {
      if (depth[v] == unseen) {
        depth[v] = depth[u] + 1;
        frontier.push(v);
      }
    }
  }
  return depth;
}

} // namespace

bool is_connected(const Graph& g) {
  const auto depth = bfs_depths(g, 0);
  return std::none_of(depth.begin(), depth.end(),
                      [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

std::size_t diameter(const Graph& g) {
  std::size_t diam = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (auto d : bfs_depths(g, s)) {
      if (d == static_cast<std::size_t>(-1)) {
        throw InvalidArgument("diameter of a disconnected graph is undefined");
      }
      diam = std::max(diam, d);
    }
  }
  return diam;
}

namespace {

Graph erdos_renyi(std::size_t n, double prob, std::uint64_t seed) {
  constexpr int max_attempts = 1000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < prob) {
          edges.emplace_back(i, j);
        }
      }
    }
    Graph g(n, std::move(edges));
    if (is_connected(g)) {
      return g;
    }
  }
  throw InvalidArgument("erdos_renyi(" + std::to_string(prob) + ") produced no connected graph on " +
                        std::to_string(n) + " nodes in 1000 attempts");
}

} // namespace

Graph make_graph(const GraphSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  if (n < 2) {
    throw InvalidArgument("graph needs n >= 2 nodes");
  }
  std::vector<Edge> edges;
  switch (spec.kind) {
  case GraphKind::ring:
    if (n < 3) {
      throw InvalidArgument("ring needs n >= 3 nodes");
    }
    for (std::size_t i = 0; i < n; ++i) {
      edges.emplace_back(i, (i + 1) % n);
    }
    break;
  case GraphKind::path:
    for (std::size_t i = 0; i + 1 < n; ++i) {
      edges.emplace_back(i, i + 1);
    }
    break;
  case GraphKind::complete:
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        edges.emplace_back(i, j);
      }
    }
    break;
  case GraphKind::erdos_renyi:
    if (!(spec.edge_prob > 0.0 && spec.edge_prob <= 1.0)) {
      throw InvalidArgument("edge_prob must lie in (0,1]");
    }
    return erdos_renyi(n, spec.edge_prob, seed);
  case GraphKind::explicit_edges:
    edges = spec.edges;
    break;
  }
  return Graph(n, std::move(edges));
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "ring") return GraphKind::ring;
  if (name == "path") return GraphKind::path;
  if (name == "complete") return GraphKind::complete;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  if (name == "explicit") return GraphKind::explicit_edges;
  throw InvalidArgument("unknown graph type '" + name +
                        "' (expected ring, path, complete, erdos_renyi or explicit)");
}

std::string to_string(GraphKind kind) {
  switch (kind) {
  case GraphKind::ring: return "ring";
  case GraphKind::path: return "path";
  case GraphKind::complete: return "complete";
  case GraphKind::erdos_renyi: return "erdos_renyi";
  case GraphKind::explicit_edges: return "explicit";
  }
  return "?";
}

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    if (!(fields >> a)) {
      continue;  // blank or comment-only
    }
    std::string extra;
    if (!(fields >> b) || (fields >> extra) || a < 1 || b < 1) {
      throw InvalidArgument("edge list line " + std::to_string(lineno) +
                            ": expected two positive 1-based node ids");
    }
    edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open edge list " + path.string());
  }
  return parse_edge_list(in);
}

} // namespace topk
