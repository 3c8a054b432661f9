#include "oadmm/metrics.hpp"

#include <string>

#include "oadmm/error.hpp"

namespace oadmm {

std::string_view to_string(CountMode mode) {
  return mode == CountMode::kPerLink ? "per-link" : "per-broadcast";
}

CountMode parse_count_mode(std::string_view text) {
  if (text == "per-link") return CountMode::kPerLink;
  if (text == "per-broadcast") return CountMode::kPerBroadcast;
  throw InvalidArgument("unknown count mode '" + std::string(text) + "'");
}

double accuracy(std::span<const NodeState> states, const Vector& theta_star,
                std::span<const NodeState> initial_states) {
  if (states.size() != initial_states.size()) {
    throw DimensionMismatch("state and initial-state counts differ");
  }
  double error = 0.0;
  double initial_error = 0.0;
  for (std::size_t m = 0; m < states.size(); ++m) {
    error += (states[m].theta - theta_star).squaredNorm();
    initial_error += (initial_states[m].theta - theta_star).squaredNorm();
  }
  if (!(initial_error > 0.0)) {
    throw DegenerateDenominator("initial estimates already equal theta*");
  }
  return error / initial_error;
}

std::int64_t count_transmissions(const TransmitLog& log, const Graph& graph, CountMode mode) {
  if (mode == CountMode::kPerBroadcast) return static_cast<std::int64_t>(log.transmitted.size());
  std::int64_t total = 0;
  for (NodeId m : log.transmitted) total += graph.degree(m);
  return total;
}

std::optional<std::int64_t> transmissions_to_accuracy(const Trace& trace, double target) {
  for (const TraceRecord& r : trace.records) {
    if (r.accuracy <= target) return r.cum_tx;
  }
  return std::nullopt;
}

std::optional<int> iterations_to_accuracy(const Trace& trace, double target) {
  for (const TraceRecord& r : trace.records) {
    if (r.accuracy <= target) return r.k;
  }
  return std::nullopt;
}

}  // namespace oadmm
