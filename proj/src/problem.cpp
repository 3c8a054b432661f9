#include "oadmm/problem.hpp"

#include <cassert>
#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/QR>

#include "oadmm/error.hpp"

namespace oadmm {

namespace {

double grid_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tick(1, 10);
  return tick(rng) / 10.0;
}

void require_dimension(const NodeData& data, const Vector& theta) {
  if (theta.size() != data.features.cols()) {
    throw DimensionMismatch("theta has " + std::to_string(theta.size()) + " entries, features have " +
                            std::to_string(data.features.cols()) + " columns");
  }
}

std::string shortest(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

RegressionTask generate_regression(int node_count, int samples_per_node, int dimension, std::uint64_t seed) {
  if (node_count < 1 || samples_per_node < 1 || dimension < 1) {
    throw InvalidArgument("regression task needs M, N_m and q all >= 1");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xda7au};
  std::mt19937_64 rng(seq);

  RegressionTask task;
  task.truth.theta_star.resize(dimension);
  for (int j = 0; j < dimension; ++j) task.truth.theta_star(j) = grid_value(rng);

  task.nodes.reserve(node_count);
  for (int m = 0; m < node_count; ++m) {
    NodeData data{Matrix(samples_per_node, dimension), Vector(samples_per_node)};
    for (int n = 0; n < samples_per_node; ++n) {
      for (int j = 0; j < dimension; ++j) data.features(n, j) = grid_value(rng);
    }
    for (int n = 0; n < samples_per_node; ++n) {
      double y = 0.0;
      for (int j = 0; j < dimension; ++j) y += data.features(n, j) * task.truth.theta_star(j);
      data.labels(n) = y;
    }
    task.nodes.push_back(std::move(data));
  }
  return task;
}

double local_loss(const NodeData& data, const Vector& theta) {
  require_dimension(data, theta);
  return 0.5 * (data.labels - data.features * theta).squaredNorm();
}

LocalSolver::LocalSolver(const NodeData& data, double alpha, int degree) : alpha_(alpha), degree_(degree) {
  if (!(alpha > 0.0)) throw InvalidArgument("step size must be positive");
  if (degree < 0) throw InvalidArgument("degree must be non-negative");
  if (data.labels.size() != data.features.rows()) {
    throw DimensionMismatch("label count differs from feature row count");
  }
  const auto q = data.features.cols();
  system_ = data.features.transpose() * data.features;
  system_.diagonal().array() += 2.0 * alpha * degree;
  xty_ = data.features.transpose() * data.labels;
  factor_.compute(system_);
  if (factor_.info() != Eigen::Success || (degree == 0 && factor_.rcond() < 1e-12)) {
    throw SingularSystem("local system of dimension " + std::to_string(q) + " is singular");
  }
}

Vector LocalSolver::solve(const Vector& linear_term) const {
  if (linear_term.size() != xty_.size()) {
    throw DimensionMismatch("linear term has " + std::to_string(linear_term.size()) + " entries, expected " +
                            std::to_string(xty_.size()));
  }
  Vector theta = factor_.solve(xty_ - linear_term);
#ifndef NDEBUG
  assert(gradient(theta, linear_term).norm() <= 1e-9 * (1.0 + linear_term.norm()));
#endif
  return theta;
}

Vector LocalSolver::gradient(const Vector& theta, const Vector& linear_term) const {
  // system_ * theta - xty = X^T (X theta - y) + 2 alpha d theta
  return system_ * theta - xty_ + linear_term;
}

Vector global_optimum(std::span<const NodeData> nodes) {
  if (nodes.empty()) throw RankDeficient("no samples");
  const auto q = nodes.front().features.cols();
  Matrix gram = Matrix::Zero(q, q);
  Vector rhs = Vector::Zero(q);
  for (const NodeData& data : nodes) {
    if (data.features.cols() != q) throw DimensionMismatch("nodes disagree on the feature dimension");
    gram.noalias() += data.features.transpose() * data.features;
    rhs.noalias() += data.features.transpose() * data.labels;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(gram);
  qr.setThreshold(1e-12);
  if (qr.rank() < q) {
    throw RankDeficient("pooled features have rank " + std::to_string(qr.rank()) + " < " + std::to_string(q));
  }
  return qr.solve(rhs);
}

void write_dataset(std::ostream& out, std::span<const NodeData> nodes) {
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const NodeData& data = nodes[m];
    out << m + 1 << ' ' << data.samples() << ' ' << data.dimension() << '\n';
    for (int n = 0; n < data.samples(); ++n) {
      for (int j = 0; j < data.dimension(); ++j) out << shortest(data.features(n, j)) << ' ';
      out << shortest(data.labels(n)) << '\n';
    }
  }
}

std::vector<NodeData> read_dataset(std::istream& in) {
  std::vector<NodeData> nodes;
  long long id = 0;
  long long samples = 0;
  long long dim = 0;
  while (in >> id) {
    if (!(in >> samples >> dim) || samples < 1 || dim < 1) {
      throw ParseError("dataset: bad header for node " + std::to_string(id));
    }
    if (id != static_cast<long long>(nodes.size()) + 1) {
      throw ParseError("dataset: expected node " + std::to_string(nodes.size() + 1) + ", found " +
                       std::to_string(id));
    }
    if (!nodes.empty() && nodes.front().dimension() != dim) {
      throw ParseError("dataset: node " + std::to_string(id) + " has a different dimension");
    }
    NodeData data{Matrix(samples, dim), Vector(samples)};
    for (long long n = 0; n < samples; ++n) {
      for (long long j = 0; j < dim; ++j) {
        if (!(in >> data.features(n, j))) throw ParseError("dataset: truncated row in node " + std::to_string(id));
      }
      if (!(in >> data.labels(n))) throw ParseError("dataset: missing label in node " + std::to_string(id));
    }
    nodes.push_back(std::move(data));
  }
  if (!in.eof()) throw ParseError("dataset: unexpected token");
  if (nodes.empty()) throw ParseError("dataset: no nodes");
  return nodes;
}

}  // namespace oadmm
