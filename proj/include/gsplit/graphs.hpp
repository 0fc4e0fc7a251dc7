#pragma once

// Algorithmic graphs: directed, every edge points from a lower to a higher
// node, and the underlying undirected graph is connected. Nodes are 0-based
// here; the JSON and CLI boundary uses 1-based indices.

#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gsplit/matlin.hpp"

namespace gsplit {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  auto operator<=>(const Edge&) const = default;
};

class AlgorithmicGraph {
 public:
  /// Validates 1-based (i, j) pairs. Throws BadSize (n < 2), BadNode,
  /// BadOrientation (i >= j), DuplicateEdge or Disconnected.
  static AlgorithmicGraph validate(std::size_t n, std::span<const std::pair<long, long>> one_based);
  /// Same checks for 0-based edges.
  static AlgorithmicGraph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool has_edge(const Edge& e) const;
  std::size_t degree(std::size_t node) const;
  /// Nodes h with (h, node) an edge, ascending.
  std::vector<std::size_t> predecessors(std::size_t node) const;
  std::vector<std::pair<long, long>> one_based_edges() const;

  bool operator==(const AlgorithmicGraph&) const = default;

 private:
  AlgorithmicGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {}

  std::size_t n_ = 0;
  std::vector<Edge> edges_;  // sorted
};

struct GraphMatrices {
  Matrix adjacency;  // Adj(i, j) = 1 iff (i, j) is an edge
  Matrix degree;     // diag(d_1, ..., d_n)
  Matrix laplacian;  // Deg - Adj - Adj^T
  Matrix b;          // Deg - 2 Adj^T
};

GraphMatrices matrices(const AlgorithmicGraph& g);

/// Laplacian of an arbitrary edge set on n nodes. The set may be empty or
/// disconnected; this is how G \ G' is represented.
Matrix laplacian(std::size_t n, std::span<const Edge> edges);

/// Oriented incidence matrix, n x m: column k has +1 at the source and -1 at
/// the target of edge k. E E^T equals the Laplacian.
Matrix incidence(std::size_t n, std::span<const Edge> edges);

/// Full column rank n x (n-1) factor with Z Z^T = Lap(g), read off the
/// R factor of a QR decomposition of the transposed incidence matrix.
Matrix laplacian_factor(const AlgorithmicGraph& g);

/// For a tree the incidence matrix is itself an n x (n-1) factor; this gives
/// the sign conventions used for the sequential and parallel graphs in the
/// literature. Throws BadSize when g has more than n-1 edges.
Matrix tree_incidence_factor(const AlgorithmicGraph& g);

enum class Preset { sequential, ring, parallel_up, parallel_down, biparallel, complete };

inline constexpr Preset kAllPresets[] = {Preset::sequential,    Preset::ring,       Preset::parallel_up,
                                        Preset::parallel_down, Preset::biparallel, Preset::complete};

std::string_view to_string(Preset p);
/// Throws ConfigError for unknown names.
Preset parse_preset(std::string_view name);
std::size_t minimum_nodes(Preset p);
AlgorithmicGraph preset(Preset p, std::size_t n);

/// An algorithmic graph G together with a connected spanning subgraph G'.
class GraphPair {
 public:
  /// Throws NotSubgraph if G' has an edge outside G or the node counts differ.
  static GraphPair make(AlgorithmicGraph g, AlgorithmicGraph gp);
  static GraphPair same(const AlgorithmicGraph& g) { return make(g, g); }

  const AlgorithmicGraph& graph() const noexcept { return g_; }
  const AlgorithmicGraph& subgraph() const noexcept { return gp_; }
  std::size_t node_count() const noexcept { return g_.node_count(); }
  bool coincide() const noexcept { return g_.edges() == gp_.edges(); }

  /// Edges of G that are not in G'.
  std::vector<Edge> removed_edges() const;
  /// Lap(G \ G'); the zero matrix when G = G'.
  Matrix difference_laplacian() const;

 private:
  GraphPair(AlgorithmicGraph g, AlgorithmicGraph gp) : g_(std::move(g)), gp_(std::move(gp)) {}

  AlgorithmicGraph g_;
  AlgorithmicGraph gp_;
};

}  // namespace gsplit
