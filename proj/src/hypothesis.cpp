#include "gibbstest/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include <json.hpp>

#include "gibbstest/errors.hpp"
#include "gibbstest/log_space.hpp"

namespace gibbstest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct WordMass {
  double log_ratio;
  double mass0;
  double mass1;
};

// Enumerates the admissible (n+1)-words with a fixed first symbol and
// records each word's exact masses under both models.
std::vector<WordMass> masses_for_prefix(const ModelPair& pair, int n,
                                        int first_symbol) {
  std::vector<WordMass> out;
  const SubshiftSpec& spec = pair.spec();
  const int d = spec.alphabet_size();
  const int length = n + 1;
  Word word;
  word.symbols.assign(length, 0);
  word.symbols[0] = first_symbol;

  auto emit = [&](const Word& w) {
    const double l0 = log_cylinder_probability(pair.h0(), w);
    const double l1 = log_cylinder_probability(pair.h1(), w);
    out.push_back(WordMass{l1 - l0, std::exp(l0), std::exp(l1)});
  };

  if (length == 1) {
    emit(word);
    return out;
  }
  int depth = 1;
  int candidate = 0;
  while (true) {
    if (candidate >= d) {
      if (depth == 1) break;
      --depth;
      candidate = word.symbols[depth] + 1;
      continue;
    }
    if (!spec.edge(word.symbols[depth - 1], candidate)) {
      ++candidate;
      continue;
    }
    word.symbols[depth] = candidate;
    if (depth == length - 1) {
      emit(word);
      ++candidate;
    } else {
      ++depth;
      candidate = 0;
    }
  }
  return out;
}

}  // namespace

std::vector<RatioGroup> ratio_groups(const ModelPair& pair, int n,
                                     std::uint64_t budget) {
  check_enumeration_budget(pair.spec(), n, budget);
  const int d = pair.spec().alphabet_size();

  std::vector<std::vector<WordMass>> parts(d);
  std::uint64_t expected = 1;
  for (int i = 0; i <= n && expected < (std::uint64_t{1} << 14); ++i) {
    expected *= static_cast<std::uint64_t>(d);
  }
  if (expected >= (std::uint64_t{1} << 14)) {
    std::vector<std::future<std::vector<WordMass>>> futures;
    futures.reserve(d);
    for (int s = 0; s < d; ++s) {
      futures.push_back(std::async(std::launch::async, masses_for_prefix,
                                   std::cref(pair), n, s));
    }
    for (int s = 0; s < d; ++s) parts[s] = futures[s].get();
  } else {
    for (int s = 0; s < d; ++s) parts[s] = masses_for_prefix(pair, n, s);
  }

  std::vector<WordMass> all;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (auto& p : parts) {
    all.insert(all.end(), p.begin(), p.end());
  }
  std::sort(all.begin(), all.end(),
            [](const WordMass& a, const WordMass& b) {
              return a.log_ratio > b.log_ratio;
            });

  // Tolerance grouping anchored at each group's first (largest) ratio.
  std::vector<RatioGroup> groups;
  CompensatedSum m0, m1;
  double anchor = 0.0;
  bool open = false;
  auto flush = [&]() {
    if (open) groups.push_back(RatioGroup{anchor, m0.value(), m1.value()});
  };
  for (const WordMass& wm : all) {
    if (!open || anchor - wm.log_ratio > kRatioTieTolerance) {
      flush();
      anchor = wm.log_ratio;
      m0 = CompensatedSum();
      m1 = CompensatedSum();
      open = true;
    }
    m0.add(wm.mass0);
    m1.add(wm.mass1);
  }
  flush();
  return groups;
}

double log_likelihood_ratio(const ModelPair& pair, const Word& word) {
  if (!is_admissible(pair.spec(), word)) {
    throw NotAdmissibleError("word " + word.str() +
                             " is not admissible for this subshift");
  }
  return log_cylinder_probability(pair.h1(), word) -
         log_cylinder_probability(pair.h0(), word);
}

RandomizedCylinderTest neyman_pearson_from_groups(
    const std::vector<RatioGroup>& groups, int n, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("significance level must lie in [0,1]");
  }
  if (groups.empty()) throw ConfigError("no admissible words at this horizon");

  CompensatedSum rejected0, rejected1;
  for (const RatioGroup& g : groups) {
    const double w_before = rejected0.value();
    if (w_before + g.mass0 >= alpha) {
      double chi = (alpha - w_before) / g.mass0;
      chi = std::clamp(chi, 0.0, 1.0);
      RandomizedCylinderTest test;
      test.n = n;
      test.log_threshold = g.log_ratio;
      test.chi = chi;
      test.alpha = w_before + chi * g.mass0;
      test.beta = rejected1.value() + chi * g.mass1;
      test.boundary_mass0 = g.mass0;
      return test;
    }
    rejected0.add(g.mass0);
    rejected1.add(g.mass1);
  }
  // alpha exceeds the total mass (alpha = 1 with rounding): reject all.
  RandomizedCylinderTest test;
  test.n = n;
  test.log_threshold = -kInf;
  test.chi = 1.0;
  test.alpha = rejected0.value();
  test.beta = rejected1.value();
  test.boundary_mass0 = 0.0;
  return test;
}

RandomizedCylinderTest neyman_pearson(const ModelPair& pair, int n,
                                      double alpha, std::uint64_t budget) {
  return neyman_pearson_from_groups(ratio_groups(pair, n, budget), n, alpha);
}

RiskSummary test_errors_from_groups(const RandomizedCylinderTest& test,
                                    const std::vector<RatioGroup>& groups) {
  CompensatedSum reject0, reject1, boundary0, boundary1;
  for (const RatioGroup& g : groups) {
    if (g.log_ratio > test.log_threshold + kRatioTieTolerance) {
      reject0.add(g.mass0);
      reject1.add(g.mass1);
    } else if (std::abs(g.log_ratio - test.log_threshold) <=
               kRatioTieTolerance) {
      boundary0.add(g.mass0);
      boundary1.add(g.mass1);
    }
  }
  RiskSummary risks;
  risks.type1 = reject0.value() + test.chi * boundary0.value();
  const double beta = reject1.value() + test.chi * boundary1.value();
  risks.type2 = 1.0 - beta;
  risks.type1 = std::clamp(risks.type1, 0.0, 1.0);
  risks.type2 = std::clamp(risks.type2, 0.0, 1.0);
  return risks;
}

RiskSummary test_errors(const RandomizedCylinderTest& test,
                        const ModelPair& pair, std::uint64_t budget) {
  return test_errors_from_groups(test, ratio_groups(pair, test.n, budget));
}

RandomizedCylinderTest minimax_test_from_groups(
    const std::vector<RatioGroup>& groups, int n) {
  if (groups.empty()) throw ConfigError("no admissible words at this horizon");

  // type1(alpha) = alpha and type2(alpha) = 1 - beta(alpha) are piecewise
  // linear; the equalizer is solved exactly on the segment where
  // g(alpha) = alpha - 1 + beta(alpha) changes sign.
  CompensatedSum w_sum, b_sum;
  for (const RatioGroup& g : groups) {
    const double w_before = w_sum.value();
    const double b_before = b_sum.value();
    w_sum.add(g.mass0);
    b_sum.add(g.mass1);
    const double g_after = w_sum.value() - 1.0 + b_sum.value();
    if (g_after >= 0.0) {
      const double slope = g.mass1 / g.mass0;
      double alpha = (1.0 - b_before + w_before * slope) / (1.0 + slope);
      alpha = std::clamp(alpha, w_before, w_before + g.mass0);
      double chi = (alpha - w_before) / g.mass0;
      chi = std::clamp(chi, 0.0, 1.0);
      RandomizedCylinderTest test;
      test.n = n;
      test.log_threshold = g.log_ratio;
      test.chi = chi;
      test.alpha = alpha;
      test.beta = b_before + chi * g.mass1;
      test.boundary_mass0 = g.mass0;
      return test;
    }
  }
  // Unreachable for probability masses summing to 1; reject everything.
  RandomizedCylinderTest test;
  test.n = n;
  test.log_threshold = -kInf;
  test.chi = 1.0;
  test.alpha = w_sum.value();
  test.beta = b_sum.value();
  test.boundary_mass0 = 0.0;
  return test;
}

RandomizedCylinderTest minimax_test(const ModelPair& pair, int n,
                                    std::uint64_t budget) {
  return minimax_test_from_groups(ratio_groups(pair, n, budget), n);
}

RandomizedCylinderTest bayes_test_from_groups(
    const std::vector<RatioGroup>& groups, int n, double prior0,
    double prior1) {
  if (!(prior0 >= 0.0) || !(prior1 >= 0.0) ||
      std::abs(prior0 + prior1 - 1.0) > 1e-9) {
    throw ConfigError("prior must be a probability pair summing to 1");
  }
  RandomizedCylinderTest test;
  test.n = n;
  if (prior1 == 0.0) {
    test.log_threshold = kInf;  // never reject
    test.chi = 0.0;
  } else if (prior0 == 0.0) {
    test.log_threshold = -kInf;  // always reject
    test.chi = 1.0;
  } else {
    test.log_threshold = std::log(prior0) - std::log(prior1);
    test.chi = 1.0;  // boundary words are risk-indifferent
  }
  const RiskSummary risks = test_errors_from_groups(test, groups);
  test.alpha = risks.type1;
  test.beta = 1.0 - risks.type2;
  for (const RatioGroup& g : groups) {
    if (std::abs(g.log_ratio - test.log_threshold) <= kRatioTieTolerance) {
      test.boundary_mass0 += g.mass0;
    }
  }
  return test;
}

RandomizedCylinderTest bayes_test(const ModelPair& pair, int n, double prior0,
                                  double prior1, std::uint64_t budget) {
  return bayes_test_from_groups(ratio_groups(pair, n, budget), n, prior0,
                                prior1);
}

Decision apply_test(const RandomizedCylinderTest& test, const ModelPair& pair,
                    const Word& word, double u) {
  if (word.length() != test.n + 1) {
    throw LengthMismatchError("test expects words of length " +
                              std::to_string(test.n + 1) + ", got " +
                              std::to_string(word.length()));
  }
  const double ratio = log_likelihood_ratio(pair, word);
  if (ratio > test.log_threshold + kRatioTieTolerance) {
    return Decision::reject_h0;
  }
  if (std::abs(ratio - test.log_threshold) <= kRatioTieTolerance &&
      u < test.chi) {
    return Decision::reject_h0;
  }
  return Decision::accept_h0;
}

namespace {

nlohmann::json number_or_marker(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

double parse_number_or_marker(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(std::string("test record field '") + field +
                    "' is not a number");
}

}  // namespace

std::string test_to_json(const RandomizedCylinderTest& test) {
  nlohmann::json j;
  j["n"] = test.n;
  j["log_threshold"] = number_or_marker(test.log_threshold);
  j["chi"] = test.chi;
  j["alpha"] = test.alpha;
  j["beta"] = test.beta;
  j["boundary_mass0"] = test.boundary_mass0;
  return j.dump(2) + "\n";
}

RandomizedCylinderTest test_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse test record: ") + e.what());
  }
  RandomizedCylinderTest test;
  try {
    test.n = j.at("n").get<int>();
    test.log_threshold = parse_number_or_marker(j.at("log_threshold"),
                                                "log_threshold");
    test.chi = j.at("chi").get<double>();
    test.alpha = j.at("alpha").get<double>();
    test.beta = j.at("beta").get<double>();
    test.boundary_mass0 = j.value("boundary_mass0", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed test record: ") + e.what());
  }
  if (test.n < 0 || test.chi < 0.0 || test.chi > 1.0) {
    throw ConfigError("test record fields out of range");
  }
  return test;
}

void save_test(const RandomizedCylinderTest& test, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write test record to " + path);
  out << test_to_json(test);
}

RandomizedCylinderTest load_test(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read test record from " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return test_from_json(text);
}

}  // namespace gibbstest
