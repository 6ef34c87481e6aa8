#include "gibbstest/asymptotics.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>

#include "gibbstest/errors.hpp"

namespace gibbstest {

double ExtendedRate::value() const {
  if (neg_inf_) {
    throw ConfigError("extended rate is -infinity, not a finite value");
  }
  return value_;
}

std::string ExtendedRate::str() const {
  return neg_inf_ ? "-inf" : format17(value_);
}

std::string format17(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

namespace {

constexpr double kRangeEdgeTolerance = 1e-12;

void refuse_degenerate(const TiltedFamily& family) {
  if (family.degenerate()) {
    throw DegeneratePairError(
        "the log-Jacobian difference is cohomologous to a constant; no "
        "exponent is defined");
  }
}

}  // namespace

ExtendedRate type1_exponent(const TiltedFamily& family0, double c) {
  if (!std::isfinite(c)) throw ConfigError("threshold rate must be finite");
  refuse_degenerate(family0);
  const BirkhoffRange range = family0.birkhoff_range();
  const double at_zero = family0.free_energy_derivative(0.0);
  if (c <= at_zero) return ExtendedRate::finite(0.0);
  if (c > range.upper + kRangeEdgeTolerance) {
    return ExtendedRate::neg_infinity();
  }
  double t;
  try {
    t = family0.solve_derivative_equals(c);
  } catch (const RootNotBracketedError&) {
    t = 1024.0;  // c within tolerance of the upper endpoint: limit value
  }
  return ExtendedRate::finite(-family0.information_function(t));
}

ExtendedRate type2_exponent(const TiltedFamily& family1, double c) {
  if (!std::isfinite(c)) throw ConfigError("threshold rate must be finite");
  refuse_degenerate(family1);
  const BirkhoffRange range = family1.birkhoff_range();
  const double at_zero = family1.free_energy_derivative(0.0);
  if (c >= -at_zero) return ExtendedRate::finite(0.0);
  if (-c > range.upper + kRangeEdgeTolerance) {
    return ExtendedRate::neg_infinity();
  }
  double s;
  try {
    s = family1.solve_derivative_equals(-c);
  } catch (const RootNotBracketedError&) {
    s = 1024.0;
  }
  return ExtendedRate::finite(-family1.information_function(s));
}

MinimaxExponent minimax_exponent(const ModelPair& pair) {
  TiltedFamily family0(pair, 0);
  refuse_degenerate(family0);
  TiltedFamily family1(pair, 1);

  MinimaxExponent out;
  out.t0 = family0.solve_derivative_equals(0.0);
  out.exponent = family0.free_energy(out.t0);
  out.equalization_residual =
      std::abs(family0.information_function(out.t0) -
               family1.information_function(1.0 - out.t0));
  if (out.equalization_residual > 1e-10) {
    throw ConvergenceFailureError(
        "equalized-rate post-check failed: |F_0(t0) - F_1(1-t0)| = " +
        format17(out.equalization_residual));
  }
  // Literal coupled system, with s(t) = 1 - t and s'(t) = -1; its residual
  // is reported, not enforced (the display does not vanish at the
  // equalizer).
  const double s = 1.0 - out.t0;
  out.coupled_system_residual =
      s * (-1.0) * family1.free_energy_second_derivative(s) -
      out.t0 * family0.free_energy_second_derivative(out.t0);
  return out;
}

BayesExponent bayes_exponent(const ModelPair& pair, double prior0,
                             double prior1) {
  if (!(prior0 >= 0.0) || !(prior1 >= 0.0) ||
      std::abs(prior0 + prior1 - 1.0) > 1e-9) {
    throw ConfigError("prior must be a probability pair summing to 1");
  }
  if (prior0 == 0.0 || prior1 == 0.0) {
    throw DegeneratePriorError(
        "boundary priors admit tests with risk exactly 0; no decay rate is "
        "defined");
  }
  TiltedFamily family0(pair, 0);
  refuse_degenerate(family0);

  BayesExponent out;
  out.t_pi = family0.solve_derivative_equals(0.0);
  out.chernoff_value = family0.free_energy(out.t_pi);
  out.weighted_rate =
      2.0 * prior0 *
      (out.chernoff_value -
       out.t_pi * family0.free_energy_derivative(out.t_pi));
  return out;
}

std::string sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::np_threshold:
      return "np_threshold";
    case SweepKind::minimax:
      return "minimax";
    case SweepKind::bayes:
      return "bayes";
  }
  return "unknown";
}

namespace {

SweepRow sweep_row(const ModelPair& pair, SweepKind kind,
                   const SweepParams& params, int n, std::uint64_t budget) {
  const std::vector<RatioGroup> groups = ratio_groups(pair, n, budget);
  RandomizedCylinderTest test;
  switch (kind) {
    case SweepKind::np_threshold:
      test.n = n;
      test.log_threshold = params.c * n;
      test.chi = 1.0;
      break;
    case SweepKind::minimax:
      test = minimax_test_from_groups(groups, n);
      break;
    case SweepKind::bayes:
      test = bayes_test_from_groups(groups, n, params.prior0, params.prior1);
      break;
  }
  const RiskSummary risks = test_errors_from_groups(test, groups);
  SweepRow row;
  row.n = n;
  row.type1 = risks.type1;
  row.type2 = risks.type2;
  row.risk = kind == SweepKind::bayes
                 ? risks.bayes_risk(params.prior0, params.prior1)
                 : risks.minimax_risk();
  return row;
}

double column_value(const SweepRow& row, ErrorColumn column) {
  switch (column) {
    case ErrorColumn::type1:
      return row.type1;
    case ErrorColumn::type2:
      return row.type2;
    case ErrorColumn::risk:
      return row.risk;
  }
  return row.risk;
}

}  // namespace

SlopeFit fit_log_slope(const std::vector<SweepRow>& rows, int burn_in,
                       ErrorColumn column) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> points;
  bool saw_window = false;
  bool saw_positive = false;
  for (const SweepRow& row : rows) {
    if (row.n < burn_in) continue;
    saw_window = true;
    const double value = column_value(row, column);
    if (value > 0.0) {
      saw_positive = true;
      points.push_back({double(row.n), std::log(value)});
    }
  }
  fit.all_zero = saw_window && !saw_positive;
  fit.points = static_cast<int>(points.size());
  if (fit.points < 2) return fit;

  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / fit.points;
  const double my = sy / fit.points;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) return fit;
  fit.valid = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ExponentReport exponent_sweep(const ModelPair& pair, SweepKind kind,
                              const SweepParams& params, int n_min, int n_max,
                              std::uint64_t budget, int burn_in) {
  if (n_min < 0 || n_max < n_min) {
    throw ConfigError("sweep needs 0 <= n_min <= n_max");
  }
  check_enumeration_budget(pair.spec(), n_max, budget);

  ExponentReport report;
  report.kind = kind;
  report.n_min = n_min;
  report.n_max = n_max;
  report.burn_in = burn_in;

  TiltedFamily family0(pair, 0);
  TiltedFamily family1(pair, 1);
  switch (kind) {
    case SweepKind::np_threshold: {
      report.predicted_type1 = type1_exponent(family0, params.c);
      report.predicted_type2 = type2_exponent(family1, params.c);
      const BirkhoffRange range = family0.birkhoff_range();
      const double at_zero = family0.free_energy_derivative(0.0);
      if (params.c > at_zero && params.c <= range.upper + 1e-12) {
        try {
          report.t_star = family0.solve_derivative_equals(params.c);
        } catch (const RootNotBracketedError&) {
          report.t_star = 1024.0;
        }
      }
      break;
    }
    case SweepKind::minimax: {
      const MinimaxExponent mm = minimax_exponent(pair);
      report.t_star = mm.t0;
      report.predicted_type1 = ExtendedRate::finite(mm.exponent);
      report.predicted_type2 = ExtendedRate::finite(mm.exponent);
      break;
    }
    case SweepKind::bayes: {
      const BayesExponent bayes =
          bayes_exponent(pair, params.prior0, params.prior1);
      report.t_star = bayes.t_pi;
      report.predicted_type1 = ExtendedRate::finite(bayes.chernoff_value);
      report.predicted_type2 = ExtendedRate::finite(bayes.chernoff_value);
      break;
    }
  }

  // Each horizon is an independent pure computation.
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(n_max - n_min + 1);
  for (int n = n_min; n <= n_max; ++n) {
    futures.push_back(std::async(std::launch::async, sweep_row,
                                 std::cref(pair), kind, std::cref(params), n,
                                 budget));
  }
  for (auto& f : futures) report.rows.push_back(f.get());

  const int window_start = std::max(burn_in, n_min);
  report.fit_type1 =
      fit_log_slope(report.rows, window_start, ErrorColumn::type1);
  report.fit_type2 =
      fit_log_slope(report.rows, window_start, ErrorColumn::type2);
  report.fit_risk =
      fit_log_slope(report.rows, window_start, ErrorColumn::risk);
  return report;
}

namespace {

std::string log_or_marker(double error) {
  return error > 0.0 ? format17(std::log(error)) : "-inf";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const ExponentReport& report) {
  out << "n,kind,type1,type2,risk,log_type1,log_type2,log_risk,"
         "predicted_type1,predicted_type2\n";
  const std::string kind = sweep_kind_name(report.kind);
  for (const SweepRow& row : report.rows) {
    out << row.n << ',' << kind << ',' << format17(row.type1) << ','
        << format17(row.type2) << ',' << format17(row.risk) << ','
        << log_or_marker(row.type1) << ',' << log_or_marker(row.type2) << ','
        << log_or_marker(row.risk) << ',' << report.predicted_type1.str()
        << ',' << report.predicted_type2.str() << '\n';
  }
}

}  // namespace gibbstest
