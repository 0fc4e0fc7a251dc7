#include "gsplit/graphs.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <string>

#include "gsplit/errors.hpp"

namespace gsplit {

namespace {

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : edges) {
    const std::size_t a = find(e.from);
    const std::size_t b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.from + 1) + "," + std::to_string(e.to + 1) + ")";
}

}  // namespace

AlgorithmicGraph AlgorithmicGraph::validate(std::size_t n, std::span<const std::pair<long, long>> one_based) {
  std::vector<Edge> edges;
  edges.reserve(one_based.size());
  for (const auto& [i, j] : one_based) {
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n)
      throw Error(ErrorCode::BadNode, "edge (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") references a node outside 1.." + std::to_string(n));
    if (i >= j)
      throw Error(ErrorCode::BadOrientation,
                  "edge (" + std::to_string(i) + "," + std::to_string(j) + ") must satisfy i < j");
    edges.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)});
  }
  return from_edges(n, std::move(edges));
}

AlgorithmicGraph AlgorithmicGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
  if (n < 2) throw Error(ErrorCode::BadSize, "an algorithmic graph needs at least 2 nodes");
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) throw Error(ErrorCode::BadNode, "edge " + edge_text(e) + " out of range");
    if (e.from >= e.to) throw Error(ErrorCode::BadOrientation, "edge " + edge_text(e) + " must satisfy i < j");
  }
  std::sort(edges.begin(), edges.end());
  if (const auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw Error(ErrorCode::DuplicateEdge, "edge " + edge_text(*dup) + " listed twice");
  if (!connected(n, edges)) throw Error(ErrorCode::Disconnected, "underlying undirected graph is disconnected");
  return AlgorithmicGraph(n, std::move(edges));
}

bool AlgorithmicGraph::has_edge(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

std::size_t AlgorithmicGraph::degree(std::size_t node) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [node](const Edge& e) { return e.from == node || e.to == node; }));
}

std::vector<std::size_t> AlgorithmicGraph::predecessors(std::size_t node) const {
  std::vector<std::size_t> out;
  for (const Edge& e : edges_)
    if (e.to == node) out.push_back(e.from);
  return out;
}

std::vector<std::pair<long, long>> AlgorithmicGraph::one_based_edges() const {
  std::vector<std::pair<long, long>> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.emplace_back(static_cast<long>(e.from + 1), static_cast<long>(e.to + 1));
  return out;
}

GraphMatrices matrices(const AlgorithmicGraph& g) {
  const std::size_t n = g.node_count();
  GraphMatrices m{Matrix(n, n), Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (const Edge& e : g.edges()) {
    m.adjacency(e.from, e.to) = 1.0;
    m.degree(e.from, e.from) += 1.0;
    m.degree(e.to, e.to) += 1.0;
  }
  const Matrix adj_t = m.adjacency.transpose();
  m.laplacian = m.degree - m.adjacency - adj_t;
  m.b = m.degree - 2.0 * adj_t;
  return m;
}

Matrix laplacian(std::size_t n, std::span<const Edge> edges) {
  Matrix lap(n, n);
  for (const Edge& e : edges) {
    lap(e.from, e.from) += 1.0;
    lap(e.to, e.to) += 1.0;
    lap(e.from, e.to) -= 1.0;
    lap(e.to, e.from) -= 1.0;
  }
  return lap;
}

Matrix incidence(std::size_t n, std::span<const Edge> edges) {
  Matrix inc(n, edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    inc(edges[k].from, k) = 1.0;
    inc(edges[k].to, k) = -1.0;
  }
  return inc;
}

Matrix laplacian_factor(const AlgorithmicGraph& g) {
  const std::size_t n = g.node_count();
  // E^T = Q R  =>  E E^T = R^T R. Any n-1 node columns of E^T are independent
  // for a connected graph, so without pivoting only the last row of R (and
  // those below it) vanish.
  const QrResult f = qr(incidence(n, g.edges()).transpose(), false);
  return f.r.transpose().columns(0, n - 1);
}

Matrix tree_incidence_factor(const AlgorithmicGraph& g) {
  if (g.edge_count() != g.node_count() - 1)
    throw Error(ErrorCode::BadSize, "incidence factor needs a tree (n-1 edges), got " +
                                        std::to_string(g.edge_count()) + " edges");
  return incidence(g.node_count(), g.edges());
}

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::sequential: return "sequential";
    case Preset::ring: return "ring";
    case Preset::parallel_up: return "parallel_up";
    case Preset::parallel_down: return "parallel_down";
    case Preset::biparallel: return "biparallel";
    case Preset::complete: return "complete";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  for (Preset p : kAllPresets)
    if (to_string(p) == name) return p;
  throw Error(ErrorCode::ConfigError, "unknown graph preset '" + std::string(name) + "'");
}

std::size_t minimum_nodes(Preset p) { return p == Preset::ring || p == Preset::biparallel ? 3 : 2; }

AlgorithmicGraph preset(Preset p, std::size_t n) {
  if (n < minimum_nodes(p))
    throw Error(ErrorCode::BadSize, std::string(to_string(p)) + " needs at least " +
                                        std::to_string(minimum_nodes(p)) + " nodes");
  const std::size_t last = n - 1;
  std::vector<Edge> edges;
  switch (p) {
    case Preset::sequential:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      break;
    case Preset::ring:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      edges.push_back({0, last});
      break;
    case Preset::parallel_up:
      for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i});
      break;
    case Preset::parallel_down:
      for (std::size_t i = 0; i < last; ++i) edges.push_back({i, last});
      break;
    case Preset::biparallel:
      for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i});
      for (std::size_t i = 1; i < last; ++i) edges.push_back({i, last});
      break;
    case Preset::complete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
      break;
  }
  return AlgorithmicGraph::from_edges(n, std::move(edges));
}

GraphPair GraphPair::make(AlgorithmicGraph g, AlgorithmicGraph gp) {
  if (g.node_count() != gp.node_count())
    throw Error(ErrorCode::NotSubgraph, "subgraph must span all " + std::to_string(g.node_count()) + " nodes");
  for (const Edge& e : gp.edges())
    if (!g.has_edge(e)) throw Error(ErrorCode::NotSubgraph, "subgraph edge " + edge_text(e) + " is not in G");
  return GraphPair(std::move(g), std::move(gp));
}

std::vector<Edge> GraphPair::removed_edges() const {
  std::vector<Edge> out;
  std::set_difference(g_.edges().begin(), g_.edges().end(), gp_.edges().begin(), gp_.edges().end(),
                      std::back_inserter(out));
  return out;
}

Matrix GraphPair::difference_laplacian() const {
  const auto removed = removed_edges();
  return laplacian(node_count(), removed);
}

}  // namespace gsplit
