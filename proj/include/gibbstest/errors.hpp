#ifndef GIBBSTEST_ERRORS_HPP
#define GIBBSTEST_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gibbstest {

/// Exit-code category carried by every library error.
/// 1 = validation, 2 = enumeration budget, 3 = numerical failure.
enum class ErrorCategory : int { validation = 1, budget = 2, numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct NotPrimitiveError : Error {
  explicit NotPrimitiveError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct EmptyRowOrColumnError : Error {
  explicit EmptyRowOrColumnError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct BudgetExceededError : Error {
  BudgetExceededError(std::uint64_t requested, std::uint64_t limit)
      : Error(ErrorCategory::budget,
              "enumeration budget exceeded: requested " +
                  std::to_string(requested) + " words, limit " +
                  std::to_string(limit)),
        requested(requested),
        limit(limit) {}
  std::uint64_t requested;
  std::uint64_t limit;
};

struct MissingValueError : Error {
  explicit MissingValueError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct NotStronglyConnectedError : Error {
  explicit NotStronglyConnectedError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct ConvergenceFailureError : Error {
  explicit ConvergenceFailureError(const std::string& what)
      : Error(ErrorCategory::numeric, what) {}
};

struct SpecMismatchError : Error {
  explicit SpecMismatchError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct NotAdmissibleError : Error {
  explicit NotAdmissibleError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct RootNotBracketedError : Error {
  explicit RootNotBracketedError(const std::string& what)
      : Error(ErrorCategory::numeric, what) {}
};

struct DegeneratePairError : Error {
  explicit DegeneratePairError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct DegeneratePriorError : Error {
  explicit DegeneratePriorError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct LengthMismatchError : Error {
  explicit LengthMismatchError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct InvalidCharacterError : Error {
  InvalidCharacterError(char c, std::size_t position)
      : Error(ErrorCategory::validation,
              std::string("invalid character '") + c + "' at position " +
                  std::to_string(position)),
        position(position) {}
  std::size_t position;
};

struct EmptyInputError : Error {
  explicit EmptyInputError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

}  // namespace gibbstest

#endif  // GIBBSTEST_ERRORS_HPP
