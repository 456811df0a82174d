#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svx {

// Absolute tolerance used for analytic decisions (zero tests, verdicts).
inline constexpr double kDefaultTol = 1e-9;

// Support cutoff: entries below this count as structural zeros when
// building bipartite support graphs.
inline constexpr double kSupportTol = 1e-12;

// Default cap on enumerable items (strings, subsets, subset pairs).
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HullError : public std::runtime_error {
 public:
  explicit HullError(const std::string& msg, std::string history = "")
      : std::runtime_error(msg), history_(std::move(history)) {}
  const std::string& history() const { return history_; }

 private:
  std::string history_;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// a^n with overflow detection against a budget; throws BudgetError when the
// result would exceed `budget`.
inline std::uint64_t checked_pow(std::uint64_t base, int exp,
                                 std::uint64_t budget) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > budget / base) {
      throw BudgetError("enumeration budget exceeded: " +
                        std::to_string(base) + "^" + std::to_string(exp) +
                        " > " + std::to_string(budget));
    }
    r *= base;
  }
  if (r > budget) {
    throw BudgetError("enumeration budget exceeded: " + std::to_string(r) +
                      " > " + std::to_string(budget));
  }
  return r;
}

// a^n without a budget cap (caller guarantees fit).
inline std::uint64_t upow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace svx
