#include "oadmm/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "oadmm/error.hpp"

namespace oadmm {

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kClassical: return "admm";
    case Variant::kCensoring: return "censoring";
    case Variant::kOadmm: return "oadmm";
    case Variant::kSoadmm: return "soadmm";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "admm" || text == "classical") return Variant::kClassical;
  if (text == "censoring") return Variant::kCensoring;
  if (text == "oadmm") return Variant::kOadmm;
  if (text == "soadmm") return Variant::kSoadmm;
  throw InvalidArgument("unknown algorithm '" + std::string(text) + "'");
}

void AlgorithmConfig::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (!(c0 >= 0.0)) throw InvalidArgument("c0 must be non-negative");
  if (!(c1 >= 0.0)) throw InvalidArgument("c1 must be non-negative");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0, 1)");
  if (variant == Variant::kSoadmm && !(c0 > 0.0)) throw InvalidArgument("soadmm needs c0 > 0");
  if (variant == Variant::kOadmm && !(c0 > 0.0 || c1 > 0.0)) {
    throw InvalidArgument("oadmm needs c0 > 0 or c1 > 0 for a finite cutoff");
  }
}

std::vector<NodeState> initial_states(const Graph& graph, int dimension) {
  std::vector<NodeState> states(graph.node_count());
  for (NodeId m = 0; m < graph.node_count(); ++m) {
    NodeState& s = states[m];
    s.theta = Vector::Zero(dimension);
    s.dual = Vector::Zero(dimension);
    s.own_state = Vector::Zero(dimension);
    s.neighbor_state.assign(graph.degree(m), Vector::Zero(dimension));
  }
  return states;
}

std::vector<LocalSolver> build_solvers(const Graph& graph, std::span<const NodeData> nodes, double alpha) {
  if (nodes.size() != static_cast<std::size_t>(graph.node_count())) {
    throw DimensionMismatch("dataset has " + std::to_string(nodes.size()) + " nodes, graph has " +
                            std::to_string(graph.node_count()));
  }
  std::vector<LocalSolver> solvers;
  solvers.reserve(nodes.size());
  for (NodeId m = 0; m < graph.node_count(); ++m) solvers.emplace_back(nodes[m], alpha, graph.degree(m));
  return solvers;
}

Vector coupling_term(const Vector& dual, const Vector& self, std::span<const Vector> neighbors, double alpha) {
  Vector sum = Vector::Zero(dual.size());
  for (const Vector& n : neighbors) sum += self + n;
  return dual - alpha * sum;
}

namespace {

// Delivers m's broadcast to every neighbor's stored copy.
void broadcast(std::vector<NodeState>& states, const Graph& graph, NodeId m, TransmitLog& log) {
  states[m].own_state = states[m].theta;
  for (NodeId n : graph.neighbors(m)) {
    states[n].neighbor_state[graph.slot_of(n, m)] = states[m].theta;
  }
  log.transmitted.push_back(m);
  log.degrees.push_back(graph.degree(m));
}

void update_duals(std::vector<NodeState>& states, double alpha) {
  for (NodeState& s : states) s.dual = dual_update(s, alpha);
}

}  // namespace

TransmitLog classical_iteration(std::vector<NodeState>& states, const Graph& graph,
                                std::span<const LocalSolver> solvers, double alpha, int k) {
  const NodeId count = graph.node_count();
  std::vector<Vector> next(count);
  for (NodeId m = 0; m < count; ++m) {
    const NodeState& s = states[m];
    next[m] = solvers[m].solve(coupling_term(s.dual, s.theta, s.neighbor_state, alpha));
  }
  TransmitLog log{k, {}, {}};
  for (NodeId m = 0; m < count; ++m) states[m].theta = std::move(next[m]);
  for (NodeId m = 0; m < count; ++m) broadcast(states, graph, m, log);
  update_duals(states, alpha);
  return log;
}

Vector initial_primal(const NodeState& state, const LocalSolver& solver, double alpha) {
  return solver.solve(coupling_term(state.dual, state.own_state, state.neighbor_state, alpha));
}

double compute_timer(const Vector& theta_tilde, const Vector& own_state, double tau, double c0) {
  const double denominator = c0 + (theta_tilde - own_state).norm();
  if (!(denominator > 0.0)) throw DegenerateTimer("timer denominator c0 + ||diff|| is zero");
  return tau / denominator;
}

double censor_threshold(int k, double c1, double rho) { return c1 * std::pow(rho, k); }

double compute_cutoff(int k, const AlgorithmConfig& config) {
  switch (config.variant) {
    case Variant::kOadmm: return config.tau / (config.c0 + censor_threshold(k, config.c1, config.rho));
    case Variant::kSoadmm: return config.tau / config.c0;
    default: return std::numeric_limits<double>::infinity();
  }
}

IterationSchedule schedule_iteration(std::span<const Vector> theta_tildes, std::span<const NodeState> states,
                                     const AlgorithmConfig& config, int k) {
  IterationSchedule schedule;
  schedule.iteration = k;
  schedule.cutoff = compute_cutoff(k, config);
  const bool gated = config.variant != Variant::kSoadmm;
  schedule.threshold = gated ? censor_threshold(k, config.c1, config.rho) : 0.0;
  schedule.entries.reserve(states.size());
  for (std::size_t m = 0; m < states.size(); ++m) {
    ScheduleEntry e;
    e.node = static_cast<NodeId>(m);
    e.innovation = (theta_tildes[m] - states[m].own_state).norm();
    // c0 = 0 with zero innovation: the timer never fires.
    e.timer = config.c0 + e.innovation > 0.0 ? compute_timer(theta_tildes[m], states[m].own_state, config.tau, config.c0)
                                             : std::numeric_limits<double>::infinity();
    e.transmits = !gated || e.innovation >= schedule.threshold;
    schedule.entries.push_back(e);
  }
  std::stable_sort(schedule.entries.begin(), schedule.entries.end(),
                   [](const ScheduleEntry& a, const ScheduleEntry& b) { return a.timer < b.timer; });
  return schedule;
}

Vector mid_iteration_update(const NodeState& state, const Vector& theta_tilde,
                            std::span<const char> heard_this_iteration, const LocalSolver& solver, double alpha) {
  const auto q = theta_tilde.size();
  Vector later = Vector::Zero(q);
  Vector earlier = Vector::Zero(q);
  for (std::size_t j = 0; j < state.neighbor_state.size(); ++j) {
    if (heard_this_iteration[j]) {
      earlier += theta_tilde + state.neighbor_state[j];
    } else {
      later += theta_tilde + state.neighbor_state[j];
    }
  }
  return solver.solve(state.dual - alpha * later - alpha * earlier);
}

Vector dual_update(const NodeState& state, double alpha) {
  Vector sum = Vector::Zero(state.dual.size());
  for (const Vector& n : state.neighbor_state) sum += state.own_state - n;
  return state.dual + alpha * sum;
}

TransmitLog ordered_iteration(std::vector<NodeState>& states, const Graph& graph,
                              std::span<const LocalSolver> solvers, const AlgorithmConfig& config, int k,
                              IterationSchedule* schedule_out) {
  if (config.variant != Variant::kOadmm && config.variant != Variant::kSoadmm) {
    throw InvalidArgument("ordered_iteration needs the oadmm or soadmm variant");
  }
  const NodeId count = graph.node_count();
  std::vector<Vector> tildes(count);
  for (NodeId m = 0; m < count; ++m) tildes[m] = initial_primal(states[m], solvers[m], config.alpha);

  IterationSchedule schedule = schedule_iteration(tildes, states, config, k);

  TransmitLog log{k, {}, {}};
  std::vector<char> has_broadcast(count, 0);
  std::vector<char> heard;
  for (const ScheduleEntry& entry : schedule.entries) {
    const NodeId m = entry.node;
    if (!entry.transmits) {
      states[m].theta = tildes[m];
      continue;
    }
    const auto nbrs = graph.neighbors(m);
    heard.resize(nbrs.size());
    for (std::size_t j = 0; j < nbrs.size(); ++j) heard[j] = has_broadcast[nbrs[j]];
    states[m].theta = mid_iteration_update(states[m], tildes[m], heard, solvers[m], config.alpha);
    broadcast(states, graph, m, log);
    has_broadcast[m] = 1;
  }
  update_duals(states, config.alpha);
  if (schedule_out) *schedule_out = std::move(schedule);
  return log;
}

TransmitLog censoring_iteration(std::vector<NodeState>& states, const Graph& graph,
                                std::span<const LocalSolver> solvers, const AlgorithmConfig& config, int k) {
  if (config.variant != Variant::kCensoring) {
    throw InvalidArgument("censoring_iteration needs the censoring variant");
  }
  const NodeId count = graph.node_count();
  for (NodeId m = 0; m < count; ++m) states[m].theta = initial_primal(states[m], solvers[m], config.alpha);

  const double threshold = censor_threshold(k, config.c1, config.rho);
  std::vector<char> sends(count, 0);
  for (NodeId m = 0; m < count; ++m) sends[m] = (states[m].theta - states[m].own_state).norm() >= threshold;

  TransmitLog log{k, {}, {}};
  for (NodeId m = 0; m < count; ++m) {
    if (sends[m]) broadcast(states, graph, m, log);
  }
  update_duals(states, config.alpha);
  return log;
}

TransmitLog iterate(std::vector<NodeState>& states, const Graph& graph, std::span<const LocalSolver> solvers,
                    const AlgorithmConfig& config, int k, IterationSchedule* schedule) {
  switch (config.variant) {
    case Variant::kClassical: return classical_iteration(states, graph, solvers, config.alpha, k);
    case Variant::kCensoring: return censoring_iteration(states, graph, solvers, config, k);
    case Variant::kOadmm:
    case Variant::kSoadmm: return ordered_iteration(states, graph, solvers, config, k, schedule);
  }
  throw InvalidArgument("unknown variant");
}

Trace run(const AlgorithmConfig& config, const Graph& graph, const RegressionTask& task, const StopCriteria& stop,
          CountMode mode, const IterationObserver& observer) {
  config.validate();
  if (stop.max_iterations < 0) throw InvalidArgument("max_iterations must be non-negative");
  const std::vector<LocalSolver> solvers = build_solvers(graph, task.nodes, config.alpha);
  std::vector<NodeState> states = initial_states(graph, task.dimension());
  const std::vector<NodeState> initial = states;
  const Vector& theta_star = task.truth.theta_star;

  Trace trace;
  trace.meta.algorithm = std::string(to_string(config.variant));
  trace.meta.nodes = graph.node_count();
  trace.meta.edges = graph.edge_count();
  trace.meta.density = density(graph);
  trace.meta.alpha = config.alpha;
  trace.meta.tau = config.tau;
  trace.meta.c0 = config.c0;
  trace.meta.c1 = config.c1;
  trace.meta.rho = config.rho;
  trace.meta.count_mode = mode;

  trace.records.push_back({0, accuracy(states, theta_star, initial), 0, 0, {}});
  trace.reached_target = trace.records.back().accuracy <= stop.target_accuracy;

  IterationSchedule schedule;
  for (int k = 1; k <= stop.max_iterations && !trace.reached_target; ++k) {
    TransmitLog log = iterate(states, graph, solvers, config, k, &schedule);
    TraceRecord record;
    record.k = k;
    record.accuracy = accuracy(states, theta_star, initial);
    record.iter_tx = count_transmissions(log, graph, mode);
    record.cum_tx = trace.records.back().cum_tx + record.iter_tx;
    record.transmitted = log.transmitted;
    trace.records.push_back(std::move(record));
    trace.reached_target = trace.records.back().accuracy <= stop.target_accuracy;
    if (observer) {
      const bool ordered = config.variant == Variant::kOadmm || config.variant == Variant::kSoadmm;
      observer(IterationView{k, states, log, ordered ? &schedule : nullptr, trace.records.back()});
    }
  }
  return trace;
}

}  // namespace oadmm
