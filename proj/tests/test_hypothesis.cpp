#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "fixtures.hpp"
#include "gibbstest/hypothesis.hpp"
#include "gibbstest/sampling.hpp"

using namespace gibbstest;
using namespace gibbstest::testing;

TEST_CASE("log-likelihood ratios of the Bernoulli pair") {
  const ModelPair pair = bernoulli_pair();
  CHECK(log_likelihood_ratio(pair, w({1, 1})) ==
        doctest::Approx(std::log(2.25)).epsilon(1e-13));
  CHECK(log_likelihood_ratio(pair, w({2, 2})) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-13));
  CHECK_THROWS_AS(log_likelihood_ratio(golden_pair(), w({2, 2})),
                  NotAdmissibleError);
}

TEST_CASE("identical fixtures have ratio zero") {
  const ModelPair fixture =
      ModelPair::unchecked(bernoulli_model(0.5), bernoulli_model(0.5));
  for (const Word& word : enumerate_cylinders(fixture.spec(), 3)) {
    CHECK(std::abs(log_likelihood_ratio(fixture, word)) < 1e-14);
  }
}

TEST_CASE("ratio groups of the Bernoulli pair at n = 1") {
  const auto groups = ratio_groups(bernoulli_pair(), 1);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].log_ratio == doctest::Approx(std::log(2.25)));
  CHECK(groups[0].mass0 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(groups[0].mass1 == doctest::Approx(9.0 / 16.0).epsilon(1e-14));
  CHECK(groups[1].mass0 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(groups[1].mass1 == doctest::Approx(6.0 / 16.0).epsilon(1e-14));
  CHECK(groups[2].mass0 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(groups[2].mass1 == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("Neyman-Pearson at alpha = 0.25 rejects exactly the top cylinder") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest test = neyman_pearson(pair, 1, 0.25);
  CHECK(test.log_threshold == doctest::Approx(std::log(2.25)));
  CHECK(test.chi == doctest::Approx(1.0));
  CHECK(test.alpha == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(test.beta == doctest::Approx(9.0 / 16.0).epsilon(1e-13));

  const RiskSummary risks = test_errors(test, pair);
  CHECK(risks.type1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(risks.type2 == doctest::Approx(7.0 / 16.0).epsilon(1e-13));
}

TEST_CASE("Neyman-Pearson randomizes on the boundary group at alpha = 0.3") {
  const RandomizedCylinderTest test = neyman_pearson(bernoulli_pair(), 1, 0.3);
  CHECK(test.log_threshold == doctest::Approx(std::log(0.75)));
  CHECK(test.chi == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(test.beta == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("alpha = 0 rejects nothing; alpha = 1 rejects everything") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest never = neyman_pearson(pair, 2, 0.0);
  const RiskSummary never_risks = test_errors(never, pair);
  CHECK(never_risks.type1 == 0.0);
  CHECK(never_risks.type2 == doctest::Approx(1.0).epsilon(1e-14));

  const RandomizedCylinderTest always = neyman_pearson(pair, 2, 1.0);
  const RiskSummary always_risks = test_errors(always, pair);
  CHECK(always_risks.type1 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(always_risks.type2 == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("invalid levels are rejected") {
  CHECK_THROWS_AS(neyman_pearson(bernoulli_pair(), 1, 1.5), Error);
  CHECK_THROWS_AS(neyman_pearson(bernoulli_pair(), 1, -0.1), Error);
}

TEST_CASE("level exactness on random levels and horizons") {
  SplitMix64Stream rng(13579, 1);
  for (const ModelPair& pair : {bernoulli_pair(), golden_pair()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_u64() % 8);
      const double alpha = rng.next_uniform01();
      const RandomizedCylinderTest test = neyman_pearson(pair, n, alpha);
      const RiskSummary risks = test_errors(test, pair);
      CHECK(std::abs(risks.type1 - alpha) < 1e-12);
    }
  }
}

TEST_CASE("power curve is nondecreasing, concave, pinned at the corners") {
  const ModelPair pair = golden_pair();
  const int n = 4;
  std::vector<double> betas;
  for (int i = 0; i <= 40; ++i) {
    const double alpha = i / 40.0;
    betas.push_back(neyman_pearson(pair, n, alpha).beta);
  }
  CHECK(betas.front() == doctest::Approx(0.0).scale(1.0));
  CHECK(betas.back() == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t i = 1; i < betas.size(); ++i) {
    CHECK(betas[i] >= betas[i - 1] - 1e-13);
  }
  for (std::size_t i = 1; i + 1 < betas.size(); ++i) {
    CHECK(betas[i] >= 0.5 * (betas[i - 1] + betas[i + 1]) - 1e-12);
  }
}

TEST_CASE("threshold grouping is consistent between construction and "
          "reclassification") {
  const ModelPair pair = golden_pair();
  for (int n : {2, 5, 7}) {
    const auto groups = ratio_groups(pair, n);
    for (double alpha : {0.1, 0.37, 0.62, 0.9}) {
      const RandomizedCylinderTest test =
          neyman_pearson_from_groups(groups, n, alpha);
      const RiskSummary risks = test_errors_from_groups(test, groups);
      CHECK(std::abs(risks.type1 - alpha) < 1e-12);
      CHECK(std::abs((1.0 - risks.type2) - test.beta) < 1e-12);
    }
  }
}

TEST_CASE("minimax test equalizes the two errors; n = 1 risk is 5/14") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest test = minimax_test(pair, 1);
  CHECK(test.alpha == doctest::Approx(5.0 / 14.0).epsilon(1e-14));
  CHECK(test.chi == doctest::Approx(3.0 / 14.0).epsilon(1e-12));
  const RiskSummary risks = test_errors(test, pair);
  CHECK(std::abs(risks.type1 - risks.type2) < 1e-12);
  CHECK(risks.minimax_risk() == doctest::Approx(5.0 / 14.0).epsilon(1e-14));
}

TEST_CASE("minimax equalization holds across horizons") {
  const ModelPair pair = bernoulli_pair();
  double previous_risk = 1.0;
  for (int n = 1; n <= 9; ++n) {
    const RandomizedCylinderTest test = minimax_test(pair, n);
    const RiskSummary risks = test_errors(test, pair);
    CHECK(std::abs(risks.type1 - risks.type2) < 1e-12);
    // Richer test classes cannot do worse.
    CHECK(risks.minimax_risk() <= previous_risk + 1e-12);
    previous_risk = risks.minimax_risk();
  }
}

TEST_CASE("a symmetric pair equalizes by relabeling symmetry") {
  const ModelPair pair(bernoulli_model(0.3), bernoulli_model(0.7));
  for (int n : {1, 2, 5}) {
    const RandomizedCylinderTest test = minimax_test(pair, n);
    const RiskSummary risks = test_errors(test, pair);
    CHECK(std::abs(risks.type1 - risks.type2) < 1e-12);
  }
}

TEST_CASE("minimax risk is minimal against a scan of NP tests") {
  const ModelPair pair = golden_pair();
  const int n = 5;
  const auto groups = ratio_groups(pair, n);
  const RandomizedCylinderTest best = minimax_test_from_groups(groups, n);
  const double best_risk =
      test_errors_from_groups(best, groups).minimax_risk();
  for (int i = 0; i <= 1000; ++i) {
    const double alpha = i / 1000.0;
    const RandomizedCylinderTest candidate =
        neyman_pearson_from_groups(groups, n, alpha);
    const double risk =
        test_errors_from_groups(candidate, groups).minimax_risk();
    CHECK(best_risk <= risk + 1e-12);
  }
}

TEST_CASE("Bayes test at the uniform prior on the Bernoulli pair") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest test = bayes_test(pair, 1, 0.5, 0.5);
  CHECK(test.log_threshold == doctest::Approx(0.0));
  const RiskSummary risks = test_errors(test, pair);
  CHECK(risks.bayes_risk(0.5, 0.5) ==
        doctest::Approx(11.0 / 32.0).epsilon(1e-14));
  CHECK(risks.type1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(risks.type2 == doctest::Approx(7.0 / 16.0).epsilon(1e-13));
}

TEST_CASE("degenerate priors give the constant tests") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest accept = bayes_test(pair, 2, 1.0, 0.0);
  const RiskSummary accept_risks = test_errors(accept, pair);
  CHECK(accept_risks.type1 == 0.0);
  CHECK(accept_risks.bayes_risk(1.0, 0.0) == 0.0);

  const RandomizedCylinderTest reject = bayes_test(pair, 2, 0.0, 1.0);
  const RiskSummary reject_risks = test_errors(reject, pair);
  CHECK(reject_risks.type2 == doctest::Approx(0.0).scale(1.0));
  CHECK(reject_risks.bayes_risk(0.0, 1.0) ==
        doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Bayes risk is minimal on an alpha-grid of NP tests") {
  const ModelPair pair = bernoulli_pair();
  for (const auto& [p0, p1] : std::vector<std::pair<double, double>>{
           {0.5, 0.5}, {0.3, 0.7}, {0.85, 0.15}}) {
    for (int n : {1, 4, 6}) {
      const auto groups = ratio_groups(pair, n);
      const RandomizedCylinderTest bayes =
          bayes_test_from_groups(groups, n, p0, p1);
      const double bayes_risk =
          test_errors_from_groups(bayes, groups).bayes_risk(p0, p1);
      for (int i = 0; i <= 1000; ++i) {
        const RandomizedCylinderTest candidate =
            neyman_pearson_from_groups(groups, n, i / 1000.0);
        const double risk =
            test_errors_from_groups(candidate, groups).bayes_risk(p0, p1);
        CHECK(bayes_risk <= risk + 1e-12);
      }
    }
  }
}

TEST_CASE("apply_test thresholds and randomizes") {
  const ModelPair pair = bernoulli_pair();
  const RandomizedCylinderTest test = minimax_test(pair, 1);  // chi = 3/14

  // Above the threshold: reject for any draw.
  CHECK(apply_test(test, pair, w({1, 1}), 0.999) == Decision::reject_h0);
  // Boundary group: reject only when u < chi.
  CHECK(apply_test(test, pair, w({1, 2}), 0.2) == Decision::reject_h0);
  CHECK(apply_test(test, pair, w({1, 2}), 3.0 / 14.0 + 1e-6) ==
        Decision::accept_h0);
  // Below: accept.
  CHECK(apply_test(test, pair, w({2, 2}), 0.0) == Decision::accept_h0);

  RandomizedCylinderTest no_randomization = test;
  no_randomization.chi = 0.0;
  CHECK(apply_test(no_randomization, pair, w({1, 2}), 0.0) ==
        Decision::accept_h0);

  CHECK_THROWS_AS(apply_test(test, pair, w({1, 2, 1}), 0.5),
                  LengthMismatchError);
}

TEST_CASE("test records round-trip through JSON") {
  const RandomizedCylinderTest test = minimax_test(bernoulli_pair(), 3);
  const std::string json = test_to_json(test);
  const RandomizedCylinderTest loaded = test_from_json(json);
  CHECK(loaded.n == test.n);
  CHECK(loaded.log_threshold == test.log_threshold);
  CHECK(loaded.chi == test.chi);
  CHECK(loaded.alpha == test.alpha);
  CHECK(loaded.beta == test.beta);
  CHECK(loaded.boundary_mass0 == test.boundary_mass0);

  RandomizedCylinderTest constant;
  constant.n = 2;
  constant.log_threshold = std::numeric_limits<double>::infinity();
  constant.chi = 0.0;
  const RandomizedCylinderTest reloaded =
      test_from_json(test_to_json(constant));
  CHECK(reloaded.log_threshold == std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(test_from_json("{not json"), ConfigError);
  CHECK_THROWS_AS(test_from_json("{\"n\": 1}"), ConfigError);
}

TEST_CASE("budget violations surface the limit and request") {
  CHECK_THROWS_AS(neyman_pearson(bernoulli_pair(), 40, 0.5),
                  BudgetExceededError);
  CHECK_THROWS_AS(ratio_groups(bernoulli_pair(), 30, 1 << 16),
                  BudgetExceededError);
}

TEST_CASE("deterministic NP optimality oracle on small horizons") {
  // Meet-in-the-middle exact maximization of power over every
  // deterministic cylinder test with level <= alpha.
  for (const ModelPair& pair : {bernoulli_pair(), golden_pair()}) {
    for (int n : {1, 2, 3}) {
      std::vector<std::pair<double, double>> masses;  // (m0, m1) per word
      for_each_cylinder(pair.spec(), n, kDefaultEnumerationBudget,
                        [&](const Word& word) {
                          masses.push_back(
                              {cylinder_probability(pair.h0(), word),
                               cylinder_probability(pair.h1(), word)});
                        });
      const std::size_t half = masses.size() / 2;
      std::vector<std::pair<double, double>> left, right;
      for (std::size_t mask = 0; mask < (std::size_t{1} << half); ++mask) {
        double m0 = 0, m1 = 0;
        for (std::size_t b = 0; b < half; ++b) {
          if (mask & (std::size_t{1} << b)) {
            m0 += masses[b].first;
            m1 += masses[b].second;
          }
        }
        left.push_back({m0, m1});
      }
      const std::size_t rest = masses.size() - half;
      for (std::size_t mask = 0; mask < (std::size_t{1} << rest); ++mask) {
        double m0 = 0, m1 = 0;
        for (std::size_t b = 0; b < rest; ++b) {
          if (mask & (std::size_t{1} << b)) {
            m0 += masses[half + b].first;
            m1 += masses[half + b].second;
          }
        }
        right.push_back({m0, m1});
      }
      std::sort(right.begin(), right.end());
      std::vector<double> prefix_best(right.size());
      double best = 0.0;
      for (std::size_t i = 0; i < right.size(); ++i) {
        best = std::max(best, right[i].second);
        prefix_best[i] = best;
      }

      for (double alpha : {0.05, 0.1, 0.25, 0.5}) {
        const double np_power = neyman_pearson(pair, n, alpha).beta;
        double best_deterministic = 0.0;
        for (const auto& [m0, m1] : left) {
          if (m0 > alpha + 1e-15) continue;
          // Largest right level still within alpha - m0.
          const auto it = std::upper_bound(
              right.begin(), right.end(),
              std::make_pair(alpha - m0 + 1e-15, 1e300));
          if (it == right.begin()) continue;
          const std::size_t index = (it - right.begin()) - 1;
          best_deterministic =
              std::max(best_deterministic, m1 + prefix_best[index]);
        }
        CHECK(best_deterministic <= np_power + 1e-12);
      }
    }
  }
}
