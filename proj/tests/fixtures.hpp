#ifndef GIBBSTEST_TESTS_FIXTURES_HPP
#define GIBBSTEST_TESTS_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "gibbstest/gibbs.hpp"
#include "gibbstest/subshift.hpp"

namespace gibbstest::testing {

inline SubshiftSpec golden_mean_shift() {
  TransitionMatrix m(2, 2);
  m << 1, 1, 1, 0;
  return validate_subshift(2, m);
}

inline Word w(std::initializer_list<int> one_based) {
  return Word::from_one_based(std::vector<int>(one_based));
}

/// Product measure with marginals (p, 1-p) on the full 2-shift.
inline GibbsModel bernoulli_model(double p) {
  FiniteRangePotential potential{full_shift(2), 1, {}};
  potential.log_values[w({1})] = std::log(p);
  potential.log_values[w({2})] = std::log(1.0 - p);
  return normalize_potential(potential);
}

/// The standard worked pair: Bernoulli(1/2,1/2) vs Bernoulli(3/4,1/4).
inline ModelPair bernoulli_pair() {
  return ModelPair(bernoulli_model(0.5), bernoulli_model(0.75));
}

/// Markov measure of the forward chain P(1->1)=a, P(1->2)=1-a, P(2->1)=1
/// on the golden-mean shift, entered as the potential log P.
inline GibbsModel golden_markov_model(double a) {
  FiniteRangePotential potential{golden_mean_shift(), 2, {}};
  potential.log_values[w({1, 1})] = std::log(a);
  potential.log_values[w({1, 2})] = std::log(1.0 - a);
  potential.log_values[w({2, 1})] = 0.0;
  return normalize_potential(potential);
}

/// Parry measure (zero potential) on the golden-mean shift.
inline GibbsModel parry_model() {
  FiniteRangePotential potential{golden_mean_shift(), 1, {}};
  potential.log_values[w({1})] = 0.0;
  potential.log_values[w({2})] = 0.0;
  return normalize_potential(potential);
}

inline ModelPair golden_pair() {
  return ModelPair(parry_model(), golden_markov_model(0.7));
}

}  // namespace gibbstest::testing

#endif  // GIBBSTEST_TESTS_FIXTURES_HPP
