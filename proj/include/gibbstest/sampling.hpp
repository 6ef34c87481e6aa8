#ifndef GIBBSTEST_SAMPLING_HPP
#define GIBBSTEST_SAMPLING_HPP

#include <cstdint>
#include <memory>
#include <string_view>

#include "gibbstest/gibbs.hpp"
#include "gibbstest/hypothesis.hpp"

namespace gibbstest {

/// SplitMix64 keyed by (seed, stream): a counter-based generator whose
/// streams never share state, so parallel sampling partitions by stream id
/// and stays bitwise reproducible across runs and worker counts. The
/// algorithm is the standard SplitMix64 finalizer; uniform doubles take
/// the top 53 bits.
class SplitMix64Stream {
 public:
  SplitMix64Stream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double next_uniform01();  // in [0, 1)

 private:
  std::uint64_t state_;
};

/// Draws words distributed exactly as the model's measure: the initial
/// context comes from the stationary context weights, successive symbols
/// from the conditional probabilities induced by J. Single-owner object;
/// create samplers with distinct stream ids for parallel work.
class OrbitSampler {
 public:
  OrbitSampler(const GibbsModel& model, std::uint64_t seed,
               std::uint64_t stream);

  /// A word of length n+1.
  Word sample(int n);

 private:
  struct Tables;
  OrbitSampler(std::shared_ptr<const Tables> tables, std::uint64_t seed,
               std::uint64_t stream);
  friend struct MonteCarloAccess;

  std::shared_ptr<const Tables> tables_;
  SplitMix64Stream rng_;
};

struct ErgodicRatioSummary {
  int trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double standard_error = 0.0;
  /// The ergodic limit the mean converges to: the integral of
  /// log J_i' - log J_i against mu_i.
  double limit = 0.0;
};

/// Samples words from mu_i and averages (1/n) log(mu_i'(word)/mu_i(word));
/// the mean tends to the derivative of the free energy at 0.
ErgodicRatioSummary ergodic_ratio_check(const ModelPair& pair, int index,
                                        int n, int trials,
                                        std::uint64_t seed);

struct MonteCarloErrors {
  long samples = 0;
  double type1 = 0.0;
  double type1_stderr = 0.0;
  double type2 = 0.0;
  double type2_stderr = 0.0;
};

/// Unbiased error estimates for a test: words sampled from each model,
/// decisions taken with independent uniform draws, binomial standard
/// errors. Deterministic for a given seed regardless of worker count.
MonteCarloErrors monte_carlo_errors(const RandomizedCylinderTest& test,
                                    const ModelPair& pair, long samples,
                                    std::uint64_t seed);

/// Decimal-digit ingestion: an optional "0." prefix followed by digits;
/// digit d becomes symbol d+1 on the full 10-symbol shift. Throws
/// InvalidCharacter (with the 0-based position) or EmptyInput.
Word ingest_digits(std::string_view text);

}  // namespace gibbstest

#endif  // GIBBSTEST_SAMPLING_HPP
