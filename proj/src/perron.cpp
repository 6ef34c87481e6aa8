#include "gibbstest/perron.hpp"

#include <cmath>
#include <limits>

#include "gibbstest/errors.hpp"

namespace gibbstest {

namespace {

// One-sided power iteration; x is l1-normalized and positive throughout.
int iterate(const Eigen::MatrixXd& m, Eigen::VectorXd& x, double& lambda,
            double tolerance, int max_iterations) {
  lambda = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd y = m * x;
    const double norm = y.sum();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ConvergenceFailureError(
          "power iteration produced a non-positive iterate");
    }
    y /= norm;
    const double step = (y - x).lpNorm<Eigen::Infinity>();
    const double dl = std::abs(norm - lambda);
    x = y;
    lambda = norm;
    if (step <= tolerance && dl <= tolerance * std::abs(lambda)) return it;
  }
  throw ConvergenceFailureError(
      "power iteration did not converge within the iteration limit");
}

}  // namespace

PerronEigen perron_eigen_log(const Eigen::MatrixXd& log_matrix,
                             double tolerance, int max_iterations) {
  const int n = static_cast<int>(log_matrix.rows());
  if (n == 0 || log_matrix.cols() != n) {
    throw ConfigError("perron solver needs a nonempty square matrix");
  }

  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      shift = std::max(shift, log_matrix(i, j));
    }
  }
  if (!std::isfinite(shift)) {
    throw ConfigError("perron solver got an all-zero matrix");
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = log_matrix(i, j);
      m(i, j) = std::isfinite(v) ? std::exp(v - shift) : 0.0;
    }
  }

  PerronEigen out;
  out.right = Eigen::VectorXd::Constant(n, 1.0 / n);
  out.left = Eigen::VectorXd::Constant(n, 1.0 / n);
  double lambda_right = 0.0;
  double lambda_left = 0.0;
  const int it_r =
      iterate(m, out.right, lambda_right, tolerance, max_iterations);
  const int it_l = iterate(m.transpose(), out.left, lambda_left, tolerance,
                           max_iterations);
  out.iterations = std::max(it_r, it_l);

  // Two-sided Rayleigh quotient: quadratically small error in the
  // residual of either eigenvector.
  const double rayleigh =
      out.left.dot(m * out.right) / out.left.dot(out.right);
  out.log_lambda = shift + std::log(rayleigh);
  return out;
}

}  // namespace gibbstest
