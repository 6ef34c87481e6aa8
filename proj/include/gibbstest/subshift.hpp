#ifndef GIBBSTEST_SUBSHIFT_HPP
#define GIBBSTEST_SUBSHIFT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gibbstest/errors.hpp"

namespace gibbstest {

using TransitionMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1}
                                                           << 24;

/// A finite word over the alphabet {1,...,d}. Symbols are stored 0-based;
/// every external surface (config keys, CLI arguments, printed words) is
/// 1-based.
struct Word {
  std::vector<int> symbols;

  Word() = default;
  explicit Word(std::vector<int> s) : symbols(std::move(s)) {}

  static Word from_one_based(const std::vector<int>& s);
  std::vector<int> to_one_based() const;

  int length() const { return static_cast<int>(symbols.size()); }

  /// Hyphen-separated 1-based rendering, e.g. "1-2-1".
  std::string str() const;

  bool operator==(const Word& other) const = default;
  bool operator<(const Word& other) const { return symbols < other.symbols; }
};

/// Parses a hyphen-separated 1-based word such as "1-2-1".
Word parse_word(const std::string& text, int alphabet_size);

/// A topologically mixing subshift of finite type: alphabet {1,...,d} and a
/// primitive 0/1 transition matrix (entry (i,j) = 1 means j may follow i).
class SubshiftSpec {
 public:
  int alphabet_size() const { return d_; }
  const TransitionMatrix& transitions() const { return transitions_; }
  int primitivity_exponent() const { return primitivity_exponent_; }

  /// True when symbol b (0-based) may follow symbol a.
  bool edge(int a, int b) const { return transitions_(a, b) != 0; }

  bool operator==(const SubshiftSpec& other) const {
    return d_ == other.d_ && transitions_ == other.transitions_;
  }

  friend SubshiftSpec validate_subshift(int d,
                                        const TransitionMatrix& transitions);

 private:
  SubshiftSpec(int d, TransitionMatrix m, int exponent)
      : d_(d), transitions_(std::move(m)), primitivity_exponent_(exponent) {}

  int d_;
  TransitionMatrix transitions_;
  int primitivity_exponent_;
};

/// Checks that the matrix is d x d with 0/1 entries, has no empty row or
/// column, and is primitive; records the primitivity exponent.
SubshiftSpec validate_subshift(int d, const TransitionMatrix& transitions);

/// Convenience: the full shift on d symbols.
SubshiftSpec full_shift(int d);

bool is_admissible(const SubshiftSpec& spec, const Word& word);

/// Number of admissible words of the given length (= sum of entries of
/// M^(length-1)). Throws on overflow.
std::uint64_t count_words(const SubshiftSpec& spec, int length);

/// Throws BudgetExceeded unless d^(n+1) fits within the budget.
void check_enumeration_budget(const SubshiftSpec& spec, int n,
                              std::uint64_t budget);

/// Visits every admissible word of length n+1 exactly once, in
/// lexicographic order.
void for_each_cylinder(const SubshiftSpec& spec, int n, std::uint64_t budget,
                       const std::function<void(const Word&)>& visit);

/// Materialized variant of for_each_cylinder.
std::vector<Word> enumerate_cylinders(
    const SubshiftSpec& spec, int n,
    std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace gibbstest

#endif  // GIBBSTEST_SUBSHIFT_HPP
