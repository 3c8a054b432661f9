#pragma once

// Conversions between library types and the oracle's plain vectors.

#include <vector>

#include "oadmm/problem.hpp"
#include "oadmm/state.hpp"
#include "oadmm/topology.hpp"
#include "oracle.hpp"

namespace support {

inline oracle::Vec to_vec(const oadmm::Vector& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline oadmm::Vector to_eigen(const oracle::Vec& v) {
  oadmm::Vector r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

inline oracle::Data to_data(const oadmm::NodeData& d) {
  oracle::Data out;
  for (int n = 0; n < d.samples(); ++n) {
    oracle::Vec row;
    for (int j = 0; j < d.dimension(); ++j) row.push_back(d.features(n, j));
    out.x.push_back(row);
    out.y.push_back(d.labels(n));
  }
  return out;
}

inline oracle::Network to_network(const oadmm::Graph& graph, const oadmm::RegressionTask& task,
                                  const std::vector<oadmm::NodeState>& states) {
  oracle::Network net;
  for (oadmm::NodeId m = 0; m < graph.node_count(); ++m) {
    auto nbrs = graph.neighbors(m);
    net.adj.emplace_back(nbrs.begin(), nbrs.end());
    net.data.push_back(to_data(task.nodes[m]));
    net.theta.push_back(to_vec(states[m].theta));
    net.dual.push_back(to_vec(states[m].dual));
    net.hat.push_back(to_vec(states[m].own_state));
  }
  return net;
}

inline double max_abs_diff(const oadmm::Vector& a, const oracle::Vec& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    worst = std::max(worst, std::abs(a(static_cast<Eigen::Index>(i)) - b[i]));
  }
  return worst;
}

inline oadmm::Graph line_graph(int nodes) {
  std::vector<oadmm::Edge> edges;
  for (int m = 0; m + 1 < nodes; ++m) edges.push_back({m, m + 1});
  return oadmm::Graph(nodes, edges);
}

}  // namespace support
