#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace oadmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One worker's samples: rows of `features` are x_n^T, `labels` holds y_n.
struct NodeData {
  Matrix features;
  Vector labels;

  int samples() const { return static_cast<int>(features.rows()); }
  int dimension() const { return static_cast<int>(features.cols()); }
};

struct GroundTruth {
  Vector theta_star;
};

/// Noiseless linear-regression instance spread over the workers.
struct RegressionTask {
  std::vector<NodeData> nodes;
  GroundTruth truth;

  int dimension() const { return static_cast<int>(truth.theta_star.size()); }
};

/// Draws theta* and every feature i.i.d. from the ten-point grid
/// {0.1, 0.2, ..., 1.0} and sets y = X theta* exactly.
RegressionTask generate_regression(int node_count, int samples_per_node, int dimension, std::uint64_t seed);

/// 1/2 * sum_n (y_n - x_n^T theta)^2
double local_loss(const NodeData& data, const Vector& theta);

/// Pre-factorized minimizer of the per-node augmented objective
///
///   L_m(theta) + <theta, b> + alpha * d_m * ||theta||^2
///
/// whose normal equations are (X^T X + 2 alpha d_m I) theta = X^T y - b. The
/// system matrix depends only on the data, alpha and the degree, so it is
/// factorized once and every iteration costs one pair of triangular solves.
class LocalSolver {
 public:
  /// Throws InvalidArgument for alpha <= 0 or a negative degree, and
  /// SingularSystem when degree == 0 and X^T X is singular.
  LocalSolver(const NodeData& data, double alpha, int degree);

  /// Minimizer for the linear term `b`. Throws DimensionMismatch.
  Vector solve(const Vector& linear_term) const;

  /// Gradient of the augmented objective at `theta`; zero at the minimizer.
  Vector gradient(const Vector& theta, const Vector& linear_term) const;

  const Matrix& system_matrix() const { return system_; }
  const Vector& xty() const { return xty_; }
  double alpha() const { return alpha_; }
  int degree() const { return degree_; }
  int dimension() const { return static_cast<int>(xty_.size()); }

 private:
  Matrix system_;
  Vector xty_;
  Eigen::LLT<Matrix> factor_;
  double alpha_;
  int degree_;
};

/// Pooled least-squares minimizer over every worker's samples, solved through
/// the normal equations. Throws RankDeficient when the stacked features do not
/// have full column rank.
Vector global_optimum(std::span<const NodeData> nodes);

/// Dataset text format, per node: "m N_m q" then N_m rows "x_1 ... x_q y".
/// Node ids are one-based and must appear in order.
void write_dataset(std::ostream& out, std::span<const NodeData> nodes);
std::vector<NodeData> read_dataset(std::istream& in);

}  // namespace oadmm
