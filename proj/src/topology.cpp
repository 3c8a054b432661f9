#include "oadmm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <unordered_set>

#include "oadmm/error.hpp"

namespace oadmm {

Graph::Graph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)), adjacency_(node_count > 0 ? node_count : 0) {
  if (node_count < 1) {
    throw InvalidGraph("graph needs at least one node");
  }
  for (Edge& e : edges_) {
    if (e.first == e.second) {
      throw InvalidGraph("self-loop at node " + std::to_string(e.first + 1));
    }
    if (e.first < 0 || e.second < 0 || e.first >= node_count || e.second >= node_count) {
      throw InvalidGraph("edge endpoint out of range");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InvalidGraph("duplicate edge");
  }
  for (const Edge& e : edges_) {
    adjacency_[e.first].push_back(e.second);
    adjacency_[e.second].push_back(e.first);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a < 0 || a >= node_count_) return false;
  return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

std::size_t Graph::slot_of(NodeId m, NodeId neighbor) const {
  const auto& list = adjacency_[m];
  auto it = std::lower_bound(list.begin(), list.end(), neighbor);
  if (it == list.end() || *it != neighbor) {
    throw InvalidGraph("nodes " + std::to_string(m + 1) + " and " + std::to_string(neighbor + 1) +
                       " are not adjacent");
  }
  return static_cast<std::size_t>(it - list.begin());
}

std::size_t edge_budget(int node_count, double density) {
  const double pairs = 0.5 * static_cast<double>(node_count) * static_cast<double>(node_count - 1);
  return static_cast<std::size_t>(std::floor(density * pairs + 1e-9));
}

namespace {

// Floyd's sampling of `count` distinct pair indices out of `pairs`, returned
// sorted, then decoded row by row into (a, b) with a < b.
std::vector<Edge> sample_edges(int node_count, std::size_t count, std::mt19937_64& rng) {
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(node_count) * static_cast<std::uint64_t>(node_count - 1) / 2;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = pairs - count; j < pairs; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
  std::sort(indices.begin(), indices.end());

  std::vector<Edge> edges;
  edges.reserve(count);
  NodeId row = 0;
  std::uint64_t row_start = 0;
  std::uint64_t row_len = static_cast<std::uint64_t>(node_count - 1);
  for (std::uint64_t idx : indices) {
    while (idx >= row_start + row_len) {
      row_start += row_len;
      --row_len;
      ++row;
    }
    edges.push_back({row, row + 1 + static_cast<NodeId>(idx - row_start)});
  }
  return edges;
}

}  // namespace

Graph generate_random_graph(int node_count, double density, std::uint64_t seed) {
  if (node_count < 2) {
    throw InvalidArgument("random graph needs at least two nodes");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw InvalidArgument("density must lie in (0, 1]");
  }
  const std::size_t budget = edge_budget(node_count, density);
  if (budget < static_cast<std::size_t>(node_count - 1)) {
    throw InfeasibleDensity("density " + std::to_string(density) + " gives " + std::to_string(budget) +
                            " edges, fewer than the " + std::to_string(node_count - 1) +
                            " needed to connect " + std::to_string(node_count) + " nodes");
  }
  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x70706fu, static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    Graph graph(node_count, sample_edges(node_count, budget, rng));
    if (is_connected(graph)) return graph;
  }
  throw ConnectivityExhausted("no connected graph after " + std::to_string(kMaxConnectivityAttempts) +
                              " attempts");
}

double density(const Graph& graph) {
  const double m = graph.node_count();
  return 2.0 * static_cast<double>(graph.edge_count()) / (m * m);
}

double edge_fraction(const Graph& graph) {
  const double m = graph.node_count();
  if (m < 2) return 0.0;
  return 2.0 * static_cast<double>(graph.edge_count()) / (m * (m - 1.0));
}

bool is_connected(const Graph& graph) {
  const int n = graph.node_count();
  std::vector<char> seen(n, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const NodeId m = frontier.front();
    frontier.pop();
    for (NodeId next : graph.neighbors(m)) {
      if (!seen[next]) {
        seen[next] = 1;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == n;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << graph.node_count() << ' ' << graph.edge_count() << '\n';
  for (const Edge& e : graph.edges()) {
    out << e.first + 1 << ' ' << e.second + 1 << '\n';
  }
}

Graph read_edge_list(std::istream& in) {
  long long nodes = 0;
  long long count = 0;
  if (!(in >> nodes >> count) || nodes < 1 || count < 0) {
    throw ParseError("edge list: expected header 'M |E|'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    long long a = 0;
    long long b = 0;
    if (!(in >> a >> b)) {
      throw ParseError("edge list: expected " + std::to_string(count) + " pairs, got " + std::to_string(i));
    }
    if (a < 1 || b < 1 || a > nodes || b > nodes) {
      throw ParseError("edge list: node id out of range on pair " + std::to_string(i + 1));
    }
    edges.push_back({static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1)});
  }
  try {
    return Graph(static_cast<int>(nodes), std::move(edges));
  } catch (const InvalidGraph& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

}  // namespace oadmm
