#include "gibbstest/subshift.hpp"

#include <limits>
#include <sstream>

namespace gibbstest {

Word Word::from_one_based(const std::vector<int>& s) {
  Word w;
  w.symbols.reserve(s.size());
  for (int x : s) w.symbols.push_back(x - 1);
  return w;
}

std::vector<int> Word::to_one_based() const {
  std::vector<int> out;
  out.reserve(symbols.size());
  for (int x : symbols) out.push_back(x + 1);
  return out;
}

std::string Word::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i > 0) os << '-';
    os << symbols[i] + 1;
  }
  return os.str();
}

Word parse_word(const std::string& text, int alphabet_size) {
  if (text.empty()) throw EmptyInputError("empty word");
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find('-', pos);
    if (next == std::string::npos) next = text.size();
    const std::string token = text.substr(pos, next - pos);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("word token '" + token + "' is not an integer");
    }
    if (value < 1 || value > alphabet_size) {
      throw ConfigError("symbol " + std::to_string(value) +
                        " outside alphabet {1.." +
                        std::to_string(alphabet_size) + "}");
    }
    w.symbols.push_back(value - 1);
    pos = next + 1;
  }
  return w;
}

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const int n = static_cast<int>(a.rows());
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (!a(i, k)) continue;
      for (int j = 0; j < n; ++j) {
        if (b(k, j)) out(i, j) = true;
      }
    }
  }
  return out;
}

}  // namespace

SubshiftSpec validate_subshift(int d, const TransitionMatrix& transitions) {
  if (d < 2) throw ConfigError("alphabet size must be at least 2");
  if (transitions.rows() != d || transitions.cols() != d) {
    throw ConfigError("transition matrix must be " + std::to_string(d) + "x" +
                      std::to_string(d));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (transitions(i, j) != 0 && transitions(i, j) != 1) {
        throw ConfigError("transition entries must be 0 or 1");
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    if (transitions.row(i).sum() == 0) {
      throw EmptyRowOrColumnError("symbol " + std::to_string(i + 1) +
                                  " has no admissible successor");
    }
    if (transitions.col(i).sum() == 0) {
      throw EmptyRowOrColumnError("symbol " + std::to_string(i + 1) +
                                  " has no admissible predecessor");
    }
  }

  // Wielandt: a primitive d x d matrix has M^p > 0 for some
  // p <= (d-1)^2 + 1.
  const int wielandt = (d - 1) * (d - 1) + 1;
  BoolMatrix power = transitions.cast<bool>();
  const BoolMatrix base = power;
  int exponent = -1;
  for (int p = 1; p <= wielandt; ++p) {
    if (power.all()) {
      exponent = p;
      break;
    }
    power = bool_product(power, base);
  }
  if (exponent < 0) {
    throw NotPrimitiveError(
        "transition matrix is not primitive (subshift not topologically "
        "mixing)");
  }
  return SubshiftSpec(d, transitions, exponent);
}

SubshiftSpec full_shift(int d) {
  return validate_subshift(d, TransitionMatrix::Ones(d, d));
}

bool is_admissible(const SubshiftSpec& spec, const Word& word) {
  if (word.symbols.empty()) return false;
  for (int s : word.symbols) {
    if (s < 0 || s >= spec.alphabet_size()) return false;
  }
  for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
    if (!spec.edge(word.symbols[i], word.symbols[i + 1])) return false;
  }
  return true;
}

std::uint64_t count_words(const SubshiftSpec& spec, int length) {
  if (length < 1) throw ConfigError("word length must be >= 1");
  const int d = spec.alphabet_size();
  std::vector<std::uint64_t> counts(d, 1);
  for (int step = 1; step < length; ++step) {
    std::vector<std::uint64_t> next(d, 0);
    for (int a = 0; a < d; ++a) {
      if (counts[a] == 0) continue;
      for (int b = 0; b < d; ++b) {
        if (!spec.edge(a, b)) continue;
        const std::uint64_t sum = next[b] + counts[a];
        if (sum < next[b]) throw ConfigError("word count overflows uint64");
        next[b] = sum;
      }
    }
    counts.swap(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) {
    const std::uint64_t sum = total + c;
    if (sum < total) throw ConfigError("word count overflows uint64");
    total = sum;
  }
  return total;
}

void check_enumeration_budget(const SubshiftSpec& spec, int n,
                              std::uint64_t budget) {
  if (n < 0) throw ConfigError("horizon n must be >= 0");
  const std::uint64_t d = static_cast<std::uint64_t>(spec.alphabet_size());
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t size = 1;
  for (int i = 0; i <= n; ++i) {
    size = (size > cap / d) ? cap : size * d;
  }
  if (size > budget) throw BudgetExceededError(size, budget);
}

void for_each_cylinder(const SubshiftSpec& spec, int n, std::uint64_t budget,
                       const std::function<void(const Word&)>& visit) {
  check_enumeration_budget(spec, n, budget);
  const int d = spec.alphabet_size();
  const int length = n + 1;
  Word word;
  word.symbols.assign(length, 0);

  // Iterative lexicographic DFS over admissible extensions.
  int depth = 0;
  int candidate = 0;
  while (true) {
    if (candidate >= d) {
      if (depth == 0) break;
      --depth;
      candidate = word.symbols[depth] + 1;
      continue;
    }
    if (depth > 0 && !spec.edge(word.symbols[depth - 1], candidate)) {
      ++candidate;
      continue;
    }
    word.symbols[depth] = candidate;
    if (depth == length - 1) {
      visit(word);
      ++candidate;
    } else {
      ++depth;
      candidate = 0;
    }
  }
}

std::vector<Word> enumerate_cylinders(const SubshiftSpec& spec, int n,
                                      std::uint64_t budget) {
  std::vector<Word> out;
  for_each_cylinder(spec, n, budget, [&](const Word& w) { out.push_back(w); });
  return out;
}

}  // namespace gibbstest
