#include "oadmm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "oadmm/error.hpp"

namespace oadmm {

namespace {

double edge_fraction_of(int nodes, std::size_t edges) {
  return 2.0 * static_cast<double>(edges) / (static_cast<double>(nodes) * (nodes - 1));
}

std::string format_double(double value, std::chars_format fmt = std::chars_format::general) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, fmt);
  return std::string(buf, end);
}

template <typename T>
std::string or_na(const std::optional<T>& value) {
  if (!value) return "NA";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*value);
  } else {
    return std::to_string(*value);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

void prepare_out_dir(const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error("cannot create output directory " + config.out.string() + ": " + ec.message());
}

RunResult run_one(const ExperimentConfig& config, const Instance& instance, Variant variant, std::uint64_t seed) {
  RunResult result;
  result.variant = variant;
  result.seed = seed;
  result.trace = run(config.algorithm(variant), instance.graph, instance.task, config.stop(), config.count_mode);
  result.trace.meta.seed = seed;
  result.iters_to_target = iterations_to_accuracy(result.trace, config.target);
  result.tx_to_target = transmissions_to_accuracy(result.trace, config.target);
  return result;
}

}  // namespace

AlgorithmConfig ExperimentConfig::algorithm(Variant variant) const {
  return AlgorithmConfig{variant, alpha, tau, c0, c1, rho};
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw InvalidArgument("no algorithms selected");
  if (seeds.empty()) throw InvalidArgument("no seeds selected");
  if (nodes < 1) throw InvalidArgument("--nodes must be >= 1");
  if (samples_per_node < 1) throw InvalidArgument("--samples-per-node must be >= 1");
  if (dim < 1) throw InvalidArgument("--dim must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("--density must lie in (0, 1]");
  if (!(target > 0.0)) throw InvalidArgument("--target must be positive");
  if (max_iters < 0) throw InvalidArgument("--max-iters must be >= 0");
  for (Variant v : algorithms) algorithm(v).validate();
}

Instance make_instance(const ExperimentConfig& config, std::uint64_t seed) {
  std::optional<std::vector<NodeData>> loaded;
  if (config.data_file) {
    std::ifstream in(*config.data_file);
    if (!in) throw Error("cannot open data file " + config.data_file->string());
    loaded = read_dataset(in);
  }
  std::optional<Graph> graph;
  if (config.graph_file) {
    std::ifstream in(*config.graph_file);
    if (!in) throw Error("cannot open graph file " + config.graph_file->string());
    graph = read_edge_list(in);
  }
  const int nodes = graph ? graph->node_count() : loaded ? static_cast<int>(loaded->size()) : config.nodes;
  if (!graph) graph = generate_random_graph(nodes, config.density, seed);

  RegressionTask task;
  if (loaded) {
    if (static_cast<int>(loaded->size()) != graph->node_count()) {
      throw InvalidArgument("data file has " + std::to_string(loaded->size()) + " nodes, graph has " +
                            std::to_string(graph->node_count()));
    }
    task.nodes = std::move(*loaded);
    task.truth.theta_star = global_optimum(task.nodes);
  } else {
    task = generate_regression(nodes, config.samples_per_node, config.dim, seed);
  }
  return Instance{std::move(*graph), std::move(task)};
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunResult> results;
  results.reserve(config.seeds.size() * config.algorithms.size());
  for (std::uint64_t seed : config.seeds) {
    const Instance instance = make_instance(config, seed);
    for (Variant v : config.algorithms) results.push_back(run_one(config, instance, v, seed));
  }
  return results;
}

std::optional<double> median_of(std::vector<std::optional<double>> values) {
  if (values.empty()) return std::nullopt;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& x : values) v.push_back(x.value_or(kInf));
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  if (std::isinf(med)) return std::nullopt;
  return med;
}

std::vector<ComparisonRow> compare(std::span<const RunResult> results) {
  std::vector<Variant> order;
  for (const RunResult& r : results) {
    if (std::find(order.begin(), order.end(), r.variant) == order.end()) order.push_back(r.variant);
  }
  std::vector<ComparisonRow> rows;
  for (Variant v : order) {
    ComparisonRow row;
    row.variant = v;
    std::vector<std::optional<double>> iters;
    std::vector<std::optional<double>> tx;
    for (const RunResult& r : results) {
      if (r.variant != v) continue;
      ++row.seeds;
      if (r.tx_to_target) ++row.reached;
      iters.push_back(r.iters_to_target ? std::optional<double>(*r.iters_to_target) : std::nullopt);
      tx.push_back(r.tx_to_target ? std::optional<double>(static_cast<double>(*r.tx_to_target)) : std::nullopt);
    }
    row.median_iters = median_of(std::move(iters));
    row.median_tx = median_of(std::move(tx));
    rows.push_back(row);
  }
  auto baseline = std::find_if(rows.begin(), rows.end(),
                               [](const ComparisonRow& r) { return r.variant == Variant::kClassical; });
  if (baseline != rows.end() && baseline->median_tx && *baseline->median_tx > 0.0) {
    const double base = *baseline->median_tx;
    for (ComparisonRow& row : rows) {
      if (row.median_tx) row.savings_vs_admm = 1.0 - *row.median_tx / base;
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_density(const ExperimentConfig& config, std::span<const double> densities) {
  if (config.graph_file) throw InvalidArgument("sweep-density generates its own graphs; drop --graph-file");
  if (densities.empty()) throw InvalidArgument("no densities given");
  std::vector<SweepRow> rows;
  for (double d : densities) {
    ExperimentConfig cell = config;
    cell.density = d;
    cell.validate();
    for (std::uint64_t seed : config.seeds) {
      const Instance instance = make_instance(cell, seed);
      for (Variant v : config.algorithms) {
        RunResult r = run_one(cell, instance, v, seed);
        rows.push_back({d, v, seed, instance.graph.edge_count(), r.trace.iterations(), r.tx_to_target});
      }
    }
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "algorithm,seed,k,accuracy,iter_tx,cum_tx\n";
  const std::string name(to_string(result.variant));
  for (const TraceRecord& r : result.trace.records) {
    if (r.k == 0) continue;
    out << name << ',' << result.seed << ',' << r.k << ',' << format_double(r.accuracy, std::chars_format::scientific)
        << ',' << r.iter_tx << ',' << r.cum_tx << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunResult> results) {
  out << "algorithm,seed,iters_to_target,tx_to_target\n";
  for (const RunResult& r : results) {
    out << to_string(r.variant) << ',' << r.seed << ',' << or_na(r.iters_to_target) << ',' << or_na(r.tx_to_target)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "density,algorithm,seed,tx_to_target\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.density) << ',' << to_string(r.variant) << ',' << r.seed << ',' << or_na(r.tx_to_target)
        << '\n';
  }
}

void write_compare_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "algorithm,seeds,reached,median_iters_to_target,median_tx_to_target,savings_vs_admm\n";
  for (const ComparisonRow& r : rows) {
    out << to_string(r.variant) << ',' << r.seeds << ',' << r.reached << ',' << or_na(r.median_iters) << ','
        << or_na(r.median_tx) << ',' << or_na(r.savings_vs_admm) << '\n';
  }
}

void print_comparison(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << std::left << std::setw(11) << "algorithm" << std::right << std::setw(9) << "reached" << std::setw(14)
      << "med. iters" << std::setw(16) << "med. tx" << std::setw(12) << "savings" << '\n';
  for (const ComparisonRow& r : rows) {
    out << std::left << std::setw(11) << to_string(r.variant) << std::right << std::setw(9)
        << (std::to_string(r.reached) + "/" + std::to_string(r.seeds)) << std::setw(14) << or_na(r.median_iters)
        << std::setw(16) << or_na(r.median_tx) << std::setw(12);
    if (r.savings_vs_admm) {
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(1) << 100.0 * *r.savings_vs_admm << '%';
      out << pct.str();
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

std::filesystem::path trace_filename(Variant variant, std::uint64_t seed) {
  return "trace_" + std::string(to_string(variant)) + "_seed" + std::to_string(seed) + ".csv";
}

std::vector<RunResult> cmd_run(const ExperimentConfig& config, std::ostream& log) {
  std::vector<RunResult> results = run_experiment(config);
  prepare_out_dir(config);
  for (const RunResult& r : results) {
    const auto path = config.out / trace_filename(r.variant, r.seed);
    std::ofstream out = open_output(path);
    write_trace_csv(out, r);
    finish(out, path);
  }
  const auto summary = config.out / "summary.csv";
  std::ofstream out = open_output(summary);
  write_summary_csv(out, results);
  finish(out, summary);

  for (const RunResult& r : results) {
    log << to_string(r.variant) << " seed " << r.seed << ": " << r.trace.iterations() << " iterations, "
        << r.trace.records.back().cum_tx << " transmissions, accuracy "
        << format_double(r.trace.final_accuracy(), std::chars_format::scientific)
        << (r.trace.reached_target ? "" : " (target not reached)") << "; " << r.trace.meta.edges
        << " edges, edge fraction " << format_double(edge_fraction_of(r.trace.meta.nodes, r.trace.meta.edges))
        << ", degree density " << format_double(r.trace.meta.density) << '\n';
  }
  log << "wrote " << results.size() << " traces and " << summary.string() << '\n';
  return results;
}

std::vector<SweepRow> cmd_sweep_density(const ExperimentConfig& config, std::span<const double> densities,
                                        std::ostream& log) {
  std::vector<SweepRow> rows = sweep_density(config, densities);
  prepare_out_dir(config);
  const auto path = config.out / "sweep.csv";
  std::ofstream out = open_output(path);
  write_sweep_csv(out, rows);
  finish(out, path);

  for (double d : densities) {
    double edges = 0.0;
    int cells = 0;
    for (const SweepRow& r : rows) {
      if (r.density == d && r.variant == config.algorithms.front()) {
        edges += static_cast<double>(r.edges);
        ++cells;
      }
    }
    const double m = config.nodes;
    log << "density " << format_double(d) << " (degree density " << format_double(2.0 * edges / cells / (m * m))
        << "):";
    for (Variant v : config.algorithms) {
      std::vector<std::optional<double>> tx;
      for (const SweepRow& r : rows) {
        if (r.density == d && r.variant == v) {
          tx.push_back(r.tx_to_target ? std::optional<double>(static_cast<double>(*r.tx_to_target)) : std::nullopt);
        }
      }
      log << "  " << to_string(v) << " median tx " << or_na(median_of(std::move(tx)));
    }
    log << '\n';
  }
  log << "wrote " << path.string() << '\n';
  return rows;
}

std::vector<ComparisonRow> cmd_compare(const ExperimentConfig& config, std::ostream& log) {
  if (config.algorithms.size() < 2) throw InvalidArgument("compare needs at least two algorithms");
  const std::vector<RunResult> results = run_experiment(config);
  std::vector<ComparisonRow> rows = compare(results);
  prepare_out_dir(config);
  const auto summary = config.out / "summary.csv";
  std::ofstream sout = open_output(summary);
  write_summary_csv(sout, results);
  finish(sout, summary);
  const auto path = config.out / "compare.csv";
  std::ofstream out = open_output(path);
  write_compare_csv(out, rows);
  finish(out, path);
  print_comparison(log, rows);
  return rows;
}

}  // namespace oadmm
