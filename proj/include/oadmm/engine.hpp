#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "oadmm/metrics.hpp"
#include "oadmm/problem.hpp"
#include "oadmm/state.hpp"
#include "oadmm/topology.hpp"

namespace oadmm {

enum class Variant {
  kClassical,  ///< every node broadcasts every iteration, Jacobi-style
  kCensoring,  ///< simultaneous local solves, broadcast gated by c1 * rho^k
  kOadmm,      ///< ordered broadcasts with mid-iteration updates and a cutoff
  kSoadmm,     ///< ordered broadcasts, cutoff removed
};

/// CLI names: admm, censoring, oadmm, soadmm.
std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

struct AlgorithmConfig {
  Variant variant = Variant::kClassical;
  double alpha = 0.4;
  double tau = 1.0;
  double c0 = 1.0;
  double c1 = 5.0;
  double rho = 0.87;

  /// Throws InvalidArgument. soadmm needs c0 > 0 so the cutoff tau/c0 is finite.
  void validate() const;
};

struct ScheduleEntry {
  NodeId node = 0;
  /// Delay after the iteration start, tau / (c0 + innovation).
  double timer = 0.0;
  /// ||theta_tilde_m^k - theta_hat_m^{k-1}||
  double innovation = 0.0;
  bool transmits = false;
};

/// Broadcast order fixed at the start of iteration k. Entries are sorted by
/// timer ascending with node id breaking ties, so transmitting nodes form a
/// prefix.
struct IterationSchedule {
  int iteration = 0;
  double cutoff = 0.0;
  /// Innovation a node needs to transmit: c1 * rho^k for oadmm, 0 for soadmm.
  double threshold = 0.0;
  std::vector<ScheduleEntry> entries;
};

std::vector<LocalSolver> build_solvers(const Graph& graph, std::span<const NodeData> nodes, double alpha);

/// Linear term lambda - alpha * sum_j (self + neighbors[j]) shared by every
/// primal update.
Vector coupling_term(const Vector& dual, const Vector& self, std::span<const Vector> neighbors, double alpha);

/// One synchronous iteration of classical decentralized ADMM.
TransmitLog classical_iteration(std::vector<NodeState>& states, const Graph& graph,
                                std::span<const LocalSolver> solvers, double alpha, int k);

/// Primal solve at the iteration start using broadcast state only.
Vector initial_primal(const NodeState& state, const LocalSolver& solver, double alpha);

/// tau / (c0 + ||theta_tilde - own_state||). Throws DegenerateTimer if the
/// denominator is zero.
double compute_timer(const Vector& theta_tilde, const Vector& own_state, double tau, double c0);

/// oadmm: tau / (c0 + c1 rho^k); soadmm: tau / c0. Other variants have no cutoff.
double compute_cutoff(int k, const AlgorithmConfig& config);

/// c1 * rho^k
double censor_threshold(int k, double c1, double rho);

IterationSchedule schedule_iteration(std::span<const Vector> theta_tildes, std::span<const NodeState> states,
                                     const AlgorithmConfig& config, int k);

/// Re-solve just before broadcasting. `heard_this_iteration[j]` marks
/// neighbors(m)[j] as having broadcast earlier in this iteration, in which case
/// state.neighbor_state[j] already holds its fresh value; other slots still
/// hold the stale copy. theta_tilde takes the self position in both sums.
Vector mid_iteration_update(const NodeState& state, const Vector& theta_tilde,
                            std::span<const char> heard_this_iteration, const LocalSolver& solver, double alpha);

/// lambda + alpha * sum_j (own_state - neighbor_state[j])
Vector dual_update(const NodeState& state, double alpha);

/// One iteration of oadmm or soadmm. The realized schedule is written to
/// `schedule` when provided.
TransmitLog ordered_iteration(std::vector<NodeState>& states, const Graph& graph,
                              std::span<const LocalSolver> solvers, const AlgorithmConfig& config, int k,
                              IterationSchedule* schedule = nullptr);

TransmitLog censoring_iteration(std::vector<NodeState>& states, const Graph& graph,
                                std::span<const LocalSolver> solvers, const AlgorithmConfig& config, int k);

/// Dispatches on config.variant.
TransmitLog iterate(std::vector<NodeState>& states, const Graph& graph, std::span<const LocalSolver> solvers,
                    const AlgorithmConfig& config, int k, IterationSchedule* schedule = nullptr);

struct StopCriteria {
  double target_accuracy = 1e-8;
  int max_iterations = 2000;
};

/// Snapshot handed to a run observer after each iteration.
struct IterationView {
  int k = 0;
  std::span<const NodeState> states;
  const TransmitLog& log;
  /// Null for classical and censoring variants.
  const IterationSchedule* schedule = nullptr;
  const TraceRecord& record;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Iterates until accuracy <= target or max_iterations is reached. Not
/// reaching the target is reported through Trace::reached_target.
Trace run(const AlgorithmConfig& config, const Graph& graph, const RegressionTask& task, const StopCriteria& stop,
          CountMode mode = CountMode::kPerLink, const IterationObserver& observer = {});

}  // namespace oadmm
