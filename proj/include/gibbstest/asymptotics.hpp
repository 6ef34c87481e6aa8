#ifndef GIBBSTEST_ASYMPTOTICS_HPP
#define GIBBSTEST_ASYMPTOTICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbstest/hypothesis.hpp"
#include "gibbstest/tilt.hpp"

namespace gibbstest {

/// A decay rate on the log scale: a finite value <= 0, exactly 0 in the
/// no-decay regime, or -infinity. Kept as an explicit marker type so
/// outputs never smuggle infinities through sentinel floats.
class ExtendedRate {
 public:
  static ExtendedRate finite(double v) { return ExtendedRate(false, v); }
  static ExtendedRate neg_infinity() { return ExtendedRate(true, 0.0); }

  bool is_neg_infinity() const { return neg_inf_; }
  double value() const;  // throws when -infinity
  std::string str() const;

 private:
  ExtendedRate(bool neg_inf, double v) : neg_inf_(neg_inf), value_(v) {}
  bool neg_inf_;
  double value_;
};

/// Decay rate of the type-1 error of NP tests with thresholds c_n = e^{cn}
/// (family must be the i = 0 branch). Regimes: 0 at and below f'(0),
/// -infinity above the upper Birkhoff endpoint, otherwise f(t*) - t* f'(t*)
/// at f'(t*) = c. Throws DegeneratePair on range collapse.
ExtendedRate type1_exponent(const TiltedFamily& family0, double c);

/// Mirror image for type-2 errors (family must be the i = 1 branch):
/// 0 at and above -f'(0), -infinity below the negated upper endpoint,
/// otherwise f(s*) - s* f'(s*) at f'(s*) = -c.
ExtendedRate type2_exponent(const TiltedFamily& family1, double c);

struct MinimaxExponent {
  double t0 = 0.0;        // root of f_0' in (0,1)
  double exponent = 0.0;  // f_0(t0), the optimal equalized decay rate
  /// |F_0(t0) - F_1(1-t0)|; must stay below 1e-10.
  double equalization_residual = 0.0;
  /// Residual of the literal coupled system s s' f_1''(s) - t f_0''(t) at
  /// the solution; reported as a diagnostic.
  double coupled_system_residual = 0.0;
};

MinimaxExponent minimax_exponent(const ModelPair& pair);

struct BayesExponent {
  double t_pi = 0.0;
  /// Prior-independent Chernoff rate f_0(t_pi).
  double chernoff_value = 0.0;
  /// The alternative displayed rate 2 pi_0 (f_0(t_pi) - t_pi f_0'(t_pi)),
  /// reported alongside for comparison.
  double weighted_rate = 0.0;
};

/// Throws DegeneratePrior for boundary priors (risk 0 is achievable there
/// and no decay rate is defined).
BayesExponent bayes_exponent(const ModelPair& pair, double prior0,
                             double prior1);

enum class SweepKind { np_threshold, minimax, bayes };

std::string sweep_kind_name(SweepKind kind);

struct SweepParams {
  double c = 0.0;        // np_threshold: thresholds c_n = e^{c n}
  double prior0 = 0.5;   // bayes
  double prior1 = 0.5;
};

struct SweepRow {
  int n;
  double type1;
  double type2;
  double risk;  // max error for np/minimax, prior-weighted risk for bayes
};

struct SlopeFit {
  bool valid = false;      // at least two positive errors in the window
  bool all_zero = false;   // every windowed error was exactly 0
  int points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct ExponentReport {
  SweepKind kind = SweepKind::minimax;
  int n_min = 0;
  int n_max = 0;
  int burn_in = 4;
  double t_star = 0.0;
  ExtendedRate predicted_type1 = ExtendedRate::finite(0.0);
  ExtendedRate predicted_type2 = ExtendedRate::finite(0.0);
  std::vector<SweepRow> rows;
  SlopeFit fit_type1;
  SlopeFit fit_type2;
  SlopeFit fit_risk;
};

enum class ErrorColumn { type1, type2, risk };

/// Least-squares slope of log(value) against n over rows with n >= burn_in
/// and value > 0.
SlopeFit fit_log_slope(const std::vector<SweepRow>& rows, int burn_in,
                       ErrorColumn column);

/// Builds the requested test for every n in [n_min, n_max], computes exact
/// errors by enumeration, and fits least-squares slopes of log(error)
/// against n over the window n >= max(burn_in, n_min).
ExponentReport exponent_sweep(const ModelPair& pair, SweepKind kind,
                              const SweepParams& params, int n_min, int n_max,
                              std::uint64_t budget = kDefaultEnumerationBudget,
                              int burn_in = 4);

/// Fixed CSV schema: n, kind, type1, type2, risk, log_type1, log_type2,
/// log_risk, predicted_type1, predicted_type2. 17 significant digits,
/// "-inf" markers, byte-deterministic.
void write_sweep_csv(std::ostream& out, const ExponentReport& report);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format17(double x);

}  // namespace gibbstest

#endif  // GIBBSTEST_ASYMPTOTICS_HPP
