#include "gibbstest/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "gibbstest/errors.hpp"

namespace gibbstest {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SplitMix64Stream::SplitMix64Stream(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64(seed) ^
             splitmix64(stream * 0x9E3779B97F4A7C15ULL +
                        0x632BE59BD9B4E019ULL)) {}

std::uint64_t SplitMix64Stream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double SplitMix64Stream::next_uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

struct OrbitSampler::Tables {
  std::shared_ptr<const EdgeLayout> layout;
  std::vector<double> context_cdf;  // over contexts, in index order
  struct Successor {
    int symbol;
    int next_context;
    double cdf;
  };
  std::vector<std::vector<Successor>> successors;  // per context

  explicit Tables(const GibbsModel& model) : layout(model.layout()) {
    const int nc = layout->context_count();
    context_cdf.resize(nc);
    double acc = 0.0;
    for (int c = 0; c < nc; ++c) {
      acc += std::exp(model.log_context_weights()[c]);
      context_cdf[c] = acc;
    }
    context_cdf[nc - 1] = 1.0;  // guard the final bucket against rounding

    successors.resize(nc);
    // p(next symbol | context u) = J(u.b) pi(suffix) / pi(u).
    for (int e = 0; e < layout->edge_count(); ++e) {
      const auto& edge = layout->edges()[e];
      const double p =
          std::exp(model.log_jacobian()[e] +
                   model.log_context_weights()[edge.to] -
                   model.log_context_weights()[edge.from]);
      successors[edge.from].push_back({edge.last_symbol, edge.to, p});
    }
    for (auto& list : successors) {
      std::sort(list.begin(), list.end(),
                [](const Successor& a, const Successor& b) {
                  return a.symbol < b.symbol;
                });
      double cdf = 0.0;
      for (auto& s : list) {
        cdf += s.cdf;
        s.cdf = cdf;
      }
      if (!list.empty()) list.back().cdf = 1.0;
    }
  }
};

OrbitSampler::OrbitSampler(const GibbsModel& model, std::uint64_t seed,
                           std::uint64_t stream)
    : tables_(std::make_shared<const Tables>(model)), rng_(seed, stream) {}

OrbitSampler::OrbitSampler(std::shared_ptr<const Tables> tables,
                           std::uint64_t seed, std::uint64_t stream)
    : tables_(std::move(tables)), rng_(seed, stream) {}

Word OrbitSampler::sample(int n) {
  if (n < 0) throw ConfigError("orbit length n must be >= 0");
  const EdgeLayout& layout = *tables_->layout;
  const int length = n + 1;
  const int context_len = layout.context_length();

  // Initial context from the stationary weights.
  const double u0 = rng_.next_uniform01();
  const int start = static_cast<int>(
      std::lower_bound(tables_->context_cdf.begin(),
                       tables_->context_cdf.end(), u0) -
      tables_->context_cdf.begin());

  Word word;
  word.symbols.reserve(length);
  const auto& start_symbols = layout.contexts()[start].symbols;
  for (int i = 0; i < std::min(context_len, length); ++i) {
    word.symbols.push_back(start_symbols[i]);
  }

  int context = start;
  while (word.length() < length) {
    const double u = rng_.next_uniform01();
    const auto& list = tables_->successors[context];
    const Tables::Successor* chosen = &list.back();
    for (const Tables::Successor& s : list) {
      if (u < s.cdf) {
        chosen = &s;
        break;
      }
    }
    word.symbols.push_back(chosen->symbol);
    context = chosen->next_context;
  }
  return word;
}

// Internal access point for shared sampling tables.
struct MonteCarloAccess {
  static std::shared_ptr<const OrbitSampler::Tables> tables(
      const GibbsModel& model) {
    return std::make_shared<const OrbitSampler::Tables>(model);
  }
  static OrbitSampler sampler(std::shared_ptr<const OrbitSampler::Tables> t,
                              std::uint64_t seed, std::uint64_t stream) {
    return OrbitSampler(std::move(t), seed, stream);
  }
};

ErgodicRatioSummary ergodic_ratio_check(const ModelPair& pair, int index,
                                        int n, int trials,
                                        std::uint64_t seed) {
  if (index != 0 && index != 1) throw ConfigError("index must be 0 or 1");
  if (n < 1) throw ConfigError("ergodic check needs n >= 1");
  if (trials < 1) throw ConfigError("ergodic check needs trials >= 1");

  const GibbsModel& mine = pair.model(index);
  const GibbsModel& other = pair.model(1 - index);
  OrbitSampler sampler(mine, seed, 0);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Word word = sampler.sample(n);
    const double ratio = (log_cylinder_probability(other, word) -
                          log_cylinder_probability(mine, word)) /
                         n;
    sum += ratio;
    sum_sq += ratio * ratio;
  }

  ErgodicRatioSummary summary;
  summary.trials = trials;
  summary.mean = sum / trials;
  const double var =
      trials > 1 ? std::max(0.0, (sum_sq - trials * summary.mean *
                                               summary.mean) /
                                     (trials - 1))
                 : 0.0;
  summary.stddev = std::sqrt(var);
  summary.standard_error = summary.stddev / std::sqrt(double(trials));
  summary.limit = -relative_entropy_rate(mine, other);
  return summary;
}

MonteCarloErrors monte_carlo_errors(const RandomizedCylinderTest& test,
                                    const ModelPair& pair, long samples,
                                    std::uint64_t seed) {
  if (samples < 1) throw ConfigError("monte carlo needs samples >= 1");

  constexpr long kChunk = 4096;
  const auto tables0 = MonteCarloAccess::tables(pair.h0());
  const auto tables1 = MonteCarloAccess::tables(pair.h1());

  // Chunk c of model i uses streams (4c + 2i) for words and (4c + 2i + 1)
  // for the decision draws; the partition is fixed, so results do not
  // depend on how chunks are scheduled.
  auto count_rejections = [&](int model_index, long chunk) -> long {
    const long begin = chunk * kChunk;
    const long end = std::min(samples, begin + kChunk);
    auto sampler = MonteCarloAccess::sampler(
        model_index == 0 ? tables0 : tables1, seed,
        static_cast<std::uint64_t>(4 * chunk + 2 * model_index));
    SplitMix64Stream draws(
        seed, static_cast<std::uint64_t>(4 * chunk + 2 * model_index + 1));
    long rejections = 0;
    for (long i = begin; i < end; ++i) {
      const Word word = sampler.sample(test.n);
      const double u = draws.next_uniform01();
      if (apply_test(test, pair, word, u) == Decision::reject_h0) {
        ++rejections;
      }
    }
    return rejections;
  };

  const long chunks = (samples + kChunk - 1) / kChunk;
  long rejected0 = 0;
  long rejected1 = 0;
  {
    std::vector<std::future<long>> futures;
    futures.reserve(2 * chunks);
    for (long c = 0; c < chunks; ++c) {
      futures.push_back(
          std::async(std::launch::async, count_rejections, 0, c));
      futures.push_back(
          std::async(std::launch::async, count_rejections, 1, c));
    }
    for (long c = 0; c < chunks; ++c) {
      rejected0 += futures[2 * c].get();
      rejected1 += futures[2 * c + 1].get();
    }
  }

  MonteCarloErrors out;
  out.samples = samples;
  out.type1 = double(rejected0) / double(samples);
  out.type2 = double(samples - rejected1) / double(samples);
  out.type1_stderr =
      std::sqrt(out.type1 * (1.0 - out.type1) / double(samples));
  out.type2_stderr =
      std::sqrt(out.type2 * (1.0 - out.type2) / double(samples));
  return out;
}

Word ingest_digits(std::string_view text) {
  // Trim trailing line endings and spaces (files arrive line by line).
  while (!text.empty() &&
         (text.back() == '\n' || text.back() == '\r' || text.back() == ' ' ||
          text.back() == '\t')) {
    text.remove_suffix(1);
  }
  std::size_t start = 0;
  if (text.size() >= 2 && text[0] == '0' && text[1] == '.') start = 2;
  if (start >= text.size()) {
    throw EmptyInputError("no digits in input");
  }
  Word word;
  word.symbols.reserve(text.size() - start);
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw InvalidCharacterError(c, i);
    word.symbols.push_back(c - '0');  // digit d -> symbol d+1, 1-based
  }
  return word;
}

}  // namespace gibbstest
