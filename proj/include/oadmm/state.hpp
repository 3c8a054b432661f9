#pragma once

#include <vector>

#include "oadmm/problem.hpp"
#include "oadmm/topology.hpp"

namespace oadmm {

/// Everything node m holds between iterations.
///
/// `own_state` is the last value m actually broadcast. `neighbor_state[j]` is
/// m's copy of the last value broadcast by neighbors(m)[j]; broadcasts are
/// lossless, so after every iteration it equals that neighbor's own_state.
struct NodeState {
  Vector theta;
  Vector dual;
  Vector own_state;
  std::vector<Vector> neighbor_state;
};

/// All-zero primal, dual and broadcast state for every node.
std::vector<NodeState> initial_states(const Graph& graph, int dimension);

/// Who broadcast during one iteration, in broadcast order.
struct TransmitLog {
  int iteration = 0;
  std::vector<NodeId> transmitted;
  /// degrees[i] is the degree of transmitted[i] at broadcast time.
  std::vector<int> degrees;
};

}  // namespace oadmm
