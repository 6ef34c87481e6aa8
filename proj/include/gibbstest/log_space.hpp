#ifndef GIBBSTEST_LOG_SPACE_HPP
#define GIBBSTEST_LOG_SPACE_HPP

#include <cmath>
#include <limits>

namespace gibbstest {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without leaving log space.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Neumaier-compensated accumulator for sums of terms with wildly
/// different magnitudes (error masses over cylinder enumerations).
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gibbstest

#endif  // GIBBSTEST_LOG_SPACE_HPP
