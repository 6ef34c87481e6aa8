#ifndef GIBBSTEST_PERRON_HPP
#define GIBBSTEST_PERRON_HPP

#include <Eigen/Dense>

namespace gibbstest {

struct PerronEigen {
  double log_lambda = 0.0;  // log of the Perron eigenvalue
  Eigen::VectorXd right;    // strictly positive, sums to 1
  Eigen::VectorXd left;     // strictly positive, sums to 1
  int iterations = 0;
};

/// Dominant eigentriple of a primitive nonnegative matrix given entrywise
/// in log space (-inf marks a zero entry). Power iteration from the
/// uniform positive vector; the eigenvalue is polished with the two-sided
/// Rayleigh quotient. Entries are shifted by their maximum before
/// exponentiating, so arbitrarily large log weights are safe.
PerronEigen perron_eigen_log(const Eigen::MatrixXd& log_matrix,
                             double tolerance = 1e-14,
                             int max_iterations = 100000);

}  // namespace gibbstest

#endif  // GIBBSTEST_PERRON_HPP
