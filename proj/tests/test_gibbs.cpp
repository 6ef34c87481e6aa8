#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gibbstest/gibbs.hpp"
#include "gibbstest/log_space.hpp"
#include "gibbstest/sampling.hpp"

using namespace gibbstest;
using namespace gibbstest::testing;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Random strictly-positive potential on a random primitive subshift.
struct RandomModelSource {
  SplitMix64Stream rng{987654321, 11};

  GibbsModel next(int max_d = 3, int max_k = 2) {
    while (true) {
      const int d = 2 + static_cast<int>(rng.next_u64() % (max_d - 1));
      TransitionMatrix m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = rng.next_uniform01() < 0.75;
      }
      try {
        const SubshiftSpec spec = validate_subshift(d, m);
        const int k = 1 + static_cast<int>(rng.next_u64() % max_k);
        FiniteRangePotential potential{spec, k, {}};
        for (const Word& word : enumerate_cylinders(spec, k - 1)) {
          potential.log_values[word] = rng.next_uniform01() * 4.0 - 2.0;
        }
        return normalize_potential(potential);
      } catch (const Error&) {
        continue;
      }
    }
  }
};

}  // namespace

TEST_CASE("pressure of the zero potential is topological entropy") {
  FiniteRangePotential zero2{full_shift(2), 1,
                             {{w({1}), 0.0}, {w({2}), 0.0}}};
  CHECK(pressure(zero2) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  FiniteRangePotential golden{golden_mean_shift(), 1,
                              {{w({1}), 0.0}, {w({2}), 0.0}}};
  CHECK(pressure(golden) == doctest::Approx(std::log(kPhi)).epsilon(1e-14));
}

TEST_CASE("a normalized Jacobian has zero pressure") {
  FiniteRangePotential half{full_shift(2), 1,
                            {{w({1}), std::log(0.5)},
                             {w({2}), std::log(0.5)}}};
  CHECK(std::abs(pressure(half)) < 1e-13);
}

TEST_CASE("normalize_potential fixes the zero potential on the full shift "
          "to the uniform Jacobian") {
  FiniteRangePotential zero{full_shift(2), 1,
                            {{w({1}), 0.0}, {w({2}), 0.0}}};
  const GibbsModel model = normalize_potential(zero);
  CHECK(model.pressure_of_input() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  for (int e = 0; e < model.layout()->edge_count(); ++e) {
    CHECK(model.log_jacobian()[e] ==
          doctest::Approx(std::log(0.5)).epsilon(1e-13));
  }
  // Constant eigenfunction after the <nu, h> = 1 normalization.
  for (int c = 0; c < model.layout()->context_count(); ++c) {
    CHECK(std::exp(model.log_eigenfunction()[c]) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(model.log_context_weights()[c]) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("the Parry measure of the golden-mean shift") {
  const GibbsModel model = parry_model();
  CHECK(model.pressure_of_input() ==
        doctest::Approx(std::log(kPhi)).epsilon(1e-14));

  // J(1,1) = 1/phi, J(2,1) = 1/phi^2, J(1,2) = 1.
  const auto& layout = *model.layout();
  auto jac = [&](std::initializer_list<int> word) {
    const Word v = w(word);
    return std::exp(model.log_jacobian()[layout.edge_index(v.symbols)]);
  };
  CHECK(jac({1, 1}) == doctest::Approx(1.0 / kPhi).epsilon(1e-13));
  CHECK(jac({2, 1}) == doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-13));
  CHECK(jac({1, 2}) == doctest::Approx(1.0).epsilon(1e-13));

  // Stationary symbol weights (phi^2, 1) / (1 + phi^2).
  const double phi2 = kPhi * kPhi;
  CHECK(std::exp(model.log_context_weights()[0]) ==
        doctest::Approx(phi2 / (1 + phi2)).epsilon(1e-13));
  CHECK(std::exp(model.log_context_weights()[1]) ==
        doctest::Approx(1.0 / (1 + phi2)).epsilon(1e-13));
}

TEST_CASE("normalized input is a fixed point of normalize_potential") {
  FiniteRangePotential already{full_shift(2), 1,
                               {{w({1}), std::log(0.75)},
                                {w({2}), std::log(0.25)}}};
  const GibbsModel model = normalize_potential(already);
  CHECK(std::abs(model.pressure_of_input()) < 1e-13);
  const auto& layout = *model.layout();
  for (int e = 0; e < layout.edge_count(); ++e) {
    const Word word = layout.edge_word(e);
    const double expected =
        word.symbols[0] == 0 ? std::log(0.75) : std::log(0.25);
    CHECK(model.log_jacobian()[e] == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("normalize_potential is idempotent on its own output") {
  RandomModelSource source;
  for (int trial = 0; trial < 8; ++trial) {
    const GibbsModel model = source.next();
    FiniteRangePotential again{model.spec(), model.range(), {}};
    const auto& layout = *model.layout();
    for (int e = 0; e < layout.edge_count(); ++e) {
      again.log_values[layout.edge_word(e)] = model.log_jacobian()[e];
    }
    const GibbsModel repeat = normalize_potential(again);
    CHECK(std::abs(repeat.pressure_of_input()) < 1e-12);
    CHECK((repeat.log_jacobian() - model.log_jacobian())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("Bernoulli cylinder probabilities are products of marginals") {
  const GibbsModel model = bernoulli_model(0.75);
  CHECK(cylinder_probability(model, w({1, 1})) ==
        doctest::Approx(9.0 / 16.0).epsilon(1e-14));
  CHECK(cylinder_probability(model, w({1})) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(cylinder_probability(model, w({2, 1, 2})) ==
        doctest::Approx(0.25 * 0.75 * 0.25).epsilon(1e-14));
}

TEST_CASE("single-symbol cylinders sum to one") {
  for (const GibbsModel& model :
       {bernoulli_model(0.3), parry_model(), golden_markov_model(0.6)}) {
    double total = 0.0;
    for (int s = 1; s <= 2; ++s) total += cylinder_probability(model, w({s}));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("forbidden words have probability zero, not an error") {
  const GibbsModel model = parry_model();
  CHECK(cylinder_probability(model, w({2, 2})) == 0.0);
  CHECK(log_cylinder_probability(model, w({2, 2})) == kLogZero);
  CHECK(cylinder_probability(model, w({1, 2, 2, 1})) == 0.0);
}

TEST_CASE("cylinder measures are consistent under one-symbol extensions") {
  // Right extensions refine mu(w); left extensions refine the shifted
  // mass. Swept over every admissible word up to length 12.
  for (const GibbsModel& model :
       {bernoulli_model(0.75), golden_markov_model(0.7),
        parry_model()}) {
    const SubshiftSpec& spec = model.spec();
    for (int m = 0; m + 1 <= 12; ++m) {
      for (const Word& word : enumerate_cylinders(spec, m)) {
        const double mass = cylinder_probability(model, word);
        double right = 0.0, left = 0.0;
        for (int s = 0; s < spec.alphabet_size(); ++s) {
          Word r = word;
          r.symbols.push_back(s);
          right += cylinder_probability(model, r);
          Word l = word;
          l.symbols.insert(l.symbols.begin(), s);
          left += cylinder_probability(model, l);
        }
        CHECK(std::abs(right - mass) < 1e-12);
        CHECK(std::abs(left - mass) < 1e-12);
      }
    }
  }
}

TEST_CASE("cylinder masses are uniformly comparable to the Birkhoff "
          "product (Gibbs inequality, K = 1 / min pi)") {
  // With the product formula the ratio mu(cylinder) / exp(sum of log J
  // along the word) equals the stationary weight of the tail context, so
  // the exact uniform bounds are [min pi, max pi]; K = 1/min pi serves as
  // a two-sided Gibbs constant.
  for (const GibbsModel& model :
       {bernoulli_model(0.75), golden_markov_model(0.7)}) {
    const Eigen::VectorXd pi = model.log_context_weights().array().exp();
    const double big_k = 1.0 / pi.minCoeff();
    for (int m = 1; m + 1 <= 12; ++m) {
      for (const Word& word : enumerate_cylinders(model.spec(), m)) {
        double birkhoff = 0.0;  // sum of log J along the word's edges
        const auto& layout = *model.layout();
        for (int i = 0; i + 2 <= word.length(); ++i) {
          const int e = layout.edge_index(
              std::span<const int>(word.symbols).subspan(i, 2));
          birkhoff += model.log_jacobian()[e];
        }
        const double ratio =
            std::exp(log_cylinder_probability(model, word) - birkhoff);
        CHECK(ratio >= pi.minCoeff() - 1e-12);
        CHECK(ratio <= pi.maxCoeff() + 1e-12);
        CHECK(ratio >= 1.0 / big_k - 1e-12);
        CHECK(ratio <= big_k + 1e-12);
      }
    }
  }
}

TEST_CASE("entropy rates of the standard fixtures") {
  CHECK(entropy_rate(bernoulli_model(0.5)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));
  const double h34 = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK(entropy_rate(bernoulli_model(0.75)) ==
        doctest::Approx(h34).epsilon(1e-13));
  CHECK(entropy_rate(parry_model()) ==
        doctest::Approx(std::log(kPhi)).epsilon(1e-13));
}

TEST_CASE("Bowen's formula: entropy plus the J-integral vanishes") {
  RandomModelSource source;
  for (int trial = 0; trial < 8; ++trial) {
    const GibbsModel model = source.next();
    ObservableTable log_j;
    const auto& layout = *model.layout();
    for (int e = 0; e < layout.edge_count(); ++e) {
      log_j[layout.edge_word(e)] = model.log_jacobian()[e];
    }
    CHECK(std::abs(entropy_rate(model) + birkhoff_integral(model, log_j)) <
          1e-12);
  }
}

TEST_CASE("relative entropy rate on the Bernoulli pair") {
  const GibbsModel half = bernoulli_model(0.5);
  const GibbsModel three_quarters = bernoulli_model(0.75);
  CHECK(relative_entropy_rate(three_quarters, half) ==
        doctest::Approx(0.75 * std::log(1.5) + 0.25 * std::log(0.5))
            .epsilon(1e-12));
  CHECK(relative_entropy_rate(half, three_quarters) ==
        doctest::Approx(0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0))
            .epsilon(1e-12));
  CHECK(relative_entropy_rate(half, half) == doctest::Approx(0.0));
}

TEST_CASE("relative entropy rate is nonnegative, zero only for identical "
          "models") {
  SplitMix64Stream rng(777, 3);
  for (int trial = 0; trial < 8; ++trial) {
    FiniteRangePotential a{full_shift(2), 2, {}};
    FiniteRangePotential b{full_shift(2), 2, {}};
    for (const Word& word : enumerate_cylinders(full_shift(2), 1)) {
      a.log_values[word] = rng.next_uniform01() * 3.0 - 1.5;
      b.log_values[word] = rng.next_uniform01() * 3.0 - 1.5;
    }
    const GibbsModel p = normalize_potential(a);
    const GibbsModel q = normalize_potential(b);
    CHECK(relative_entropy_rate(p, q) >= -1e-14);
    CHECK(relative_entropy_rate(q, p) >= -1e-14);
    CHECK(std::abs(relative_entropy_rate(p, p)) < 1e-15);
  }
  CHECK_THROWS_AS(
      relative_entropy_rate(parry_model(), bernoulli_model(0.5)),
      SpecMismatchError);
}

TEST_CASE("birkhoff integrals of simple observables") {
  const GibbsModel model = bernoulli_model(0.75);
  ObservableTable constant{{w({1}), 2.5}, {w({2}), 2.5}};
  CHECK(birkhoff_integral(model, constant) ==
        doctest::Approx(2.5).epsilon(1e-14));

  ObservableTable indicator{{w({1}), 1.0}, {w({2}), 0.0}};
  CHECK(birkhoff_integral(model, indicator) ==
        doctest::Approx(0.75).epsilon(1e-13));

  // log(J_1/J_0) integrated under mu_0 equals minus the relative entropy
  // rate.
  const GibbsModel half = bernoulli_model(0.5);
  ObservableTable ratio{{w({1}), std::log(1.5)}, {w({2}), std::log(0.5)}};
  CHECK(birkhoff_integral(half, ratio) ==
        doctest::Approx(-relative_entropy_rate(half, model)).epsilon(1e-12));

  ObservableTable incomplete{{w({1}), 1.0}};
  CHECK_THROWS_AS(birkhoff_integral(model, incomplete), MissingValueError);
  // Observables of longer range trigger a recode of the model.
  ObservableTable pairwise;
  for (const Word& word : enumerate_cylinders(full_shift(2), 1)) {
    pairwise[word] = word.symbols[0] == 0 && word.symbols[1] == 0 ? 1.0 : 0.0;
  }
  CHECK(birkhoff_integral(model, pairwise) ==
        doctest::Approx(0.75 * 0.75).epsilon(1e-12));
}

TEST_CASE("model pairs unify ranges by recoding") {
  const ModelPair pair(parry_model(), golden_markov_model(0.7));
  CHECK(pair.range() == 2);
  CHECK(pair.h0().range() == 2);

  // Mixed ranges: a range-3 potential against a range-1 potential.
  FiniteRangePotential wide{full_shift(2), 3, {}};
  SplitMix64Stream rng(5, 5);
  for (const Word& word : enumerate_cylinders(full_shift(2), 2)) {
    wide.log_values[word] = rng.next_uniform01() - 0.5;
  }
  const GibbsModel wide_model = normalize_potential(wide);
  const ModelPair mixed(bernoulli_model(0.6), wide_model);
  CHECK(mixed.range() == 3);
  CHECK(mixed.h0().range() == 3);
  CHECK(mixed.h1().range() == 3);

  // Recoding preserves every cylinder mass.
  const GibbsModel& original = bernoulli_model(0.6);
  const GibbsModel recoded = original.recoded(3);
  for (int m = 0; m <= 6; ++m) {
    for (const Word& word : enumerate_cylinders(full_shift(2), m)) {
      CHECK(cylinder_probability(recoded, word) ==
            doctest::Approx(cylinder_probability(original, word))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("identical models are rejected as a degenerate pair") {
  CHECK_THROWS_AS(ModelPair(bernoulli_model(0.5), bernoulli_model(0.5)),
                  DegeneratePairError);
  CHECK_NOTHROW(ModelPair::unchecked(bernoulli_model(0.5),
                                     bernoulli_model(0.5)));
}
