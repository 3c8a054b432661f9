#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oadmm/state.hpp"

namespace oadmm {

/// How a broadcast is tallied: once per receiving link (the default, so an
/// all-transmit iteration costs sum_m d_m = 2|E|) or once per broadcasting node.
enum class CountMode { kPerLink, kPerBroadcast };

std::string_view to_string(CountMode mode);
CountMode parse_count_mode(std::string_view text);

struct TraceRecord {
  int k = 0;
  double accuracy = 1.0;
  std::int64_t iter_tx = 0;
  std::int64_t cum_tx = 0;
  std::vector<NodeId> transmitted;
};

struct TraceMetadata {
  std::string algorithm;
  std::uint64_t seed = 0;
  int nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  double alpha = 0.0;
  double tau = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double rho = 0.0;
  CountMode count_mode = CountMode::kPerLink;
};

/// Per-iteration history of one run. records[0] is the initial state (k = 0,
/// accuracy 1, no transmissions); records[i] describes iteration i.
struct Trace {
  TraceMetadata meta;
  std::vector<TraceRecord> records;
  bool reached_target = false;

  int iterations() const { return records.empty() ? 0 : records.back().k; }
  double final_accuracy() const { return records.empty() ? 1.0 : records.back().accuracy; }
};

/// sum_m ||theta_m - theta*||^2 / sum_m ||theta_m^0 - theta*||^2.
/// Throws DegenerateDenominator when the initial error is zero.
double accuracy(std::span<const NodeState> states, const Vector& theta_star,
                std::span<const NodeState> initial_states);

std::int64_t count_transmissions(const TransmitLog& log, const Graph& graph, CountMode mode);

/// Cumulative transmissions at the first record with accuracy <= target.
std::optional<std::int64_t> transmissions_to_accuracy(const Trace& trace, double target);
std::optional<int> iterations_to_accuracy(const Trace& trace, double target);

}  // namespace oadmm
