#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace oadmm {

/// Zero-based node index. Text formats use one-based ids.
using NodeId = int;

/// Undirected edge in canonical form (first < second).
struct Edge {
  NodeId first = 0;
  NodeId second = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with sorted adjacency lists.
///
/// The graph is immutable once built. Neighbor lists are sorted ascending, so a
/// neighbor's position ("slot") in a list is stable and can index per-neighbor
/// storage held by the owning node.
class Graph {
 public:
  /// Builds a graph from an edge list. Pairs are canonicalized (smaller id
  /// first) and sorted. Throws InvalidGraph on self-loops, duplicate edges or
  /// out-of-range ids.
  Graph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId m) const { return adjacency_[m]; }
  int degree(NodeId m) const { return static_cast<int>(adjacency_[m].size()); }

  bool has_edge(NodeId a, NodeId b) const;

  /// Position of `neighbor` inside neighbors(m). The pair must be an edge.
  std::size_t slot_of(NodeId m, NodeId neighbor) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

inline constexpr int kMaxConnectivityAttempts = 1000;

/// floor(density * M(M-1)/2), robust to the representation error of decimal
/// densities such as 0.05.
std::size_t edge_budget(int node_count, double density);

/// Samples a connected graph with exactly edge_budget(node_count, density)
/// edges drawn uniformly without replacement from all unordered pairs.
/// Disconnected draws are rejected and redrawn from the next sub-seed, up to
/// kMaxConnectivityAttempts times.
Graph generate_random_graph(int node_count, double density, std::uint64_t seed);

/// Average degree divided by the node count: 2|E| / M^2.
double density(const Graph& graph);

/// Fraction of all possible edges present: 2|E| / (M(M-1)).
double edge_fraction(const Graph& graph);

bool is_connected(const Graph& graph);

/// Edge-list text format: "M |E|" then one "m m'" pair per line, one-based.
void write_edge_list(std::ostream& out, const Graph& graph);
Graph read_edge_list(std::istream& in);

}  // namespace oadmm
