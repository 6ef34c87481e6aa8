#ifndef GIBBSTEST_HYPOTHESIS_HPP
#define GIBBSTEST_HYPOTHESIS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbstest/gibbs.hpp"

namespace gibbstest {

/// Log-likelihood-ratio threshold test on words of length n+1: reject H0
/// above the threshold, accept below, reject with probability chi on the
/// boundary (ratios compared with absolute tolerance 1e-12 in log space).
/// alpha and beta record the exact level and power under the pair the test
/// was built for.
struct RandomizedCylinderTest {
  int n = 0;
  double log_threshold = 0.0;
  double chi = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// mu_0-mass of the boundary ratio group (0 when the threshold misses
  /// every group, in which case chi is irrelevant and reported as 1).
  double boundary_mass0 = 0.0;
};

struct RiskSummary {
  double type1 = 0.0;
  double type2 = 0.0;
  double minimax_risk() const { return type1 > type2 ? type1 : type2; }
  double bayes_risk(double prior0, double prior1) const {
    return prior0 * type1 + prior1 * type2;
  }
};

/// Words of one horizon grouped by log-likelihood ratio (descending), with
/// exact mu_0 and mu_1 masses per group. Ratios within 1e-12 of a group's
/// first member join that group.
struct RatioGroup {
  double log_ratio;
  double mass0;
  double mass1;
};

inline constexpr double kRatioTieTolerance = 1e-12;

std::vector<RatioGroup> ratio_groups(
    const ModelPair& pair, int n,
    std::uint64_t budget = kDefaultEnumerationBudget);

/// log mu_1(word) - log mu_0(word). Throws NotAdmissible.
double log_likelihood_ratio(const ModelPair& pair, const Word& word);

/// The most powerful level-alpha test on length-(n+1) words: likelihood-
/// ratio threshold with randomization chosen so the level is exactly
/// alpha.
RandomizedCylinderTest neyman_pearson(
    const ModelPair& pair, int n, double alpha,
    std::uint64_t budget = kDefaultEnumerationBudget);
RandomizedCylinderTest neyman_pearson_from_groups(
    const std::vector<RatioGroup>& groups, int n, double alpha);

/// Exact error probabilities of a test by full enumeration.
RiskSummary test_errors(const RandomizedCylinderTest& test,
                        const ModelPair& pair,
                        std::uint64_t budget = kDefaultEnumerationBudget);
RiskSummary test_errors_from_groups(const RandomizedCylinderTest& test,
                                    const std::vector<RatioGroup>& groups);

/// The Neyman-Pearson test equalizing type-1 and type-2 errors; the
/// crossing is solved exactly on the final linear segment of the
/// piecewise-linear error curves.
RandomizedCylinderTest minimax_test(
    const ModelPair& pair, int n,
    std::uint64_t budget = kDefaultEnumerationBudget);
RandomizedCylinderTest minimax_test_from_groups(
    const std::vector<RatioGroup>& groups, int n);

/// Bayes solution for the prior (prior0, prior1): threshold at
/// prior0/prior1, full rejection on the (risk-indifferent) boundary.
/// Degenerate priors yield the constant tests.
RandomizedCylinderTest bayes_test(
    const ModelPair& pair, int n, double prior0, double prior1,
    std::uint64_t budget = kDefaultEnumerationBudget);
RandomizedCylinderTest bayes_test_from_groups(
    const std::vector<RatioGroup>& groups, int n, double prior0,
    double prior1);

enum class Decision { accept_h0, reject_h0 };

/// Executes the randomized test on one observed word with an externally
/// supplied uniform draw u in [0,1).
Decision apply_test(const RandomizedCylinderTest& test, const ModelPair& pair,
                    const Word& word, double u);

/// JSON record with fields n, log_threshold, chi, alpha, beta,
/// boundary_mass0 (infinite thresholds encoded as "inf"/"-inf").
std::string test_to_json(const RandomizedCylinderTest& test);
RandomizedCylinderTest test_from_json(const std::string& text);
void save_test(const RandomizedCylinderTest& test, const std::string& path);
RandomizedCylinderTest load_test(const std::string& path);

}  // namespace gibbstest

#endif  // GIBBSTEST_HYPOTHESIS_HPP
