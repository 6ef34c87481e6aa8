#ifndef GIBBSTEST_TILT_HPP
#define GIBBSTEST_TILT_HPP

#include <memory>
#include <utility>

#include "gibbstest/gibbs.hpp"

namespace gibbstest {

/// Endpoints of the derivative range of a free-energy curve: the extreme
/// Birkhoff averages of the direction observable.
struct BirkhoffRange {
  double lower;  // min mean cycle
  double upper;  // max mean cycle
  double width() const { return upper - lower; }
};

/// One branch of the tilted-pressure family of a model pair: the curve
/// t -> P(log J_i + t (log J_i' - log J_i)), its derivatives, and the
/// information function t f' - f. Evaluation is pure in t; eigen-solutions
/// are cached (1e-15 key granularity) behind an internal lock, so copies
/// share the cache and concurrent queries are safe.
class TiltedFamily {
 public:
  TiltedFamily(const ModelPair& pair, int index, double tolerance = 1e-14,
               int max_iterations = 100000);

  const ModelPair& pair() const;
  int index() const;
  /// log J_i' - log J_i per edge of the pair's layout.
  const Eigen::VectorXd& direction() const;

  double free_energy(double t) const;
  double free_energy_derivative(double t) const;
  /// Central difference of the analytic derivative, step 1e-4.
  double free_energy_second_derivative(double t) const;
  /// F_i(t) = t f_i'(t) - f_i(t).
  double information_function(double t) const;

  BirkhoffRange birkhoff_range() const;
  /// Direction cohomologous to a constant: derivative range narrower than
  /// 1e-12. Exponent solvers refuse such pairs.
  bool degenerate() const { return birkhoff_range().width() < 1e-12; }

  /// Unique t with f'(t) = z, by bisection on an expanding bracket
  /// (f' is strictly increasing). Throws RootNotBracketed when z is not
  /// attained within the bracket cap.
  double solve_derivative_equals(double z) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

inline double free_energy(const TiltedFamily& family, double t) {
  return family.free_energy(t);
}
inline double free_energy_derivative(const TiltedFamily& family, double t) {
  return family.free_energy_derivative(t);
}
inline double free_energy_second_derivative(const TiltedFamily& family,
                                            double t) {
  return family.free_energy_second_derivative(t);
}
inline double information_function(const TiltedFamily& family, double t) {
  return family.information_function(t);
}
inline BirkhoffRange birkhoff_range(const TiltedFamily& family) {
  return family.birkhoff_range();
}

/// Legendre transform of the free energy: I(z) = t* z - f(t*) at
/// f'(t*) = z. Finite on the closure of the derivative range (endpoint
/// values are limits), +infinity outside.
class RateFunction {
 public:
  explicit RateFunction(TiltedFamily family) : family_(std::move(family)) {}

  const TiltedFamily& family() const { return family_; }
  /// Domain of finiteness (closure of the derivative range).
  BirkhoffRange domain() const { return family_.birkhoff_range(); }

  double operator()(double z) const;

 private:
  TiltedFamily family_;
};

inline double rate_function(const RateFunction& rate, double z) {
  return rate(z);
}

}  // namespace gibbstest

#endif  // GIBBSTEST_TILT_HPP
