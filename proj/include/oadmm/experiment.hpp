#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "oadmm/engine.hpp"
#include "oadmm/metrics.hpp"
#include "oadmm/problem.hpp"
#include "oadmm/topology.hpp"

namespace oadmm {

/// Defaults reproduce the 50-node linear-regression setup.
struct ExperimentConfig {
  std::vector<Variant> algorithms{Variant::kClassical, Variant::kCensoring, Variant::kOadmm, Variant::kSoadmm};
  int nodes = 50;
  int samples_per_node = 3;
  int dim = 3;
  double density = 0.10;
  double alpha = 0.4;
  double tau = 1.0;
  double c0 = 1.0;
  double c1 = 5.0;
  double rho = 0.87;
  double target = 1e-8;
  int max_iters = 2000;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CountMode count_mode = CountMode::kPerLink;
  std::optional<std::filesystem::path> graph_file;
  std::optional<std::filesystem::path> data_file;
  std::filesystem::path out = "out";

  AlgorithmConfig algorithm(Variant variant) const;
  StopCriteria stop() const { return {target, max_iters}; }
  void validate() const;
};

/// Graph and data shared by every algorithm for one seed.
struct Instance {
  Graph graph;
  RegressionTask task;
};

/// Generates (or loads, when graph_file / data_file are set) the instance for
/// `seed`. A loaded dataset carries no theta*, so it is recovered with
/// global_optimum.
Instance make_instance(const ExperimentConfig& config, std::uint64_t seed);

struct RunResult {
  Variant variant = Variant::kClassical;
  std::uint64_t seed = 0;
  Trace trace;
  std::optional<int> iters_to_target;
  std::optional<std::int64_t> tx_to_target;
};

/// Every (algorithm, seed) pair, with all algorithms of one seed run on the
/// same instance. Results are ordered seed-major, algorithm-minor.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
  Variant variant = Variant::kClassical;
  int seeds = 0;
  int reached = 0;
  /// Medians over seeds with unreached seeds counted as +infinity; empty when
  /// the median itself is unreached.
  std::optional<double> median_iters;
  std::optional<double> median_tx;
  /// 1 - median_tx / median_tx(admm); empty if either median is missing.
  std::optional<double> savings_vs_admm;
};

std::vector<ComparisonRow> compare(std::span<const RunResult> results);

struct SweepRow {
  double density = 0.0;
  Variant variant = Variant::kClassical;
  std::uint64_t seed = 0;
  std::size_t edges = 0;
  int iterations = 0;
  std::optional<std::int64_t> tx_to_target;
};

std::vector<SweepRow> sweep_density(const ExperimentConfig& config, std::span<const double> densities);

/// Median treating nullopt as +infinity; nullopt if the median is infinite.
std::optional<double> median_of(std::vector<std::optional<double>> values);

// CSV writers. Doubles use the shortest representation that round-trips.
void write_trace_csv(std::ostream& out, const RunResult& result);
void write_summary_csv(std::ostream& out, std::span<const RunResult> results);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_compare_csv(std::ostream& out, std::span<const ComparisonRow> rows);
void print_comparison(std::ostream& out, std::span<const ComparisonRow> rows);

std::filesystem::path trace_filename(Variant variant, std::uint64_t seed);

/// Subcommand bodies. Each writes its files under config.out and a
/// human-readable summary to `log`.
std::vector<RunResult> cmd_run(const ExperimentConfig& config, std::ostream& log);
std::vector<SweepRow> cmd_sweep_density(const ExperimentConfig& config, std::span<const double> densities,
                                        std::ostream& log);
std::vector<ComparisonRow> cmd_compare(const ExperimentConfig& config, std::ostream& log);

}  // namespace oadmm
