#pragma once

// Exact rational evaluation of both sides of Kac's identity
//   E max_{0<=l<=k} S_l = sum_{l=1}^k E(S_l)_+ / l
// for random walks with finitely supported rational steps.

#include <cstdint>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace optstop {

using Rational = boost::multiprecision::cpp_rational;

struct WalkStep {
  Rational value;
  Rational probability;
};

/// Step law of the walk. Probabilities must be positive and sum to exactly 1.
class WalkDistribution {
 public:
  explicit WalkDistribution(std::vector<WalkStep> steps);

  /// +1 or -1 with probability 1/2 each.
  static WalkDistribution fair_coin();
  /// +2 with probability 1/3, -1 with probability 2/3.
  static WalkDistribution skewed_two_point();
  /// "fair" or "skew".
  static WalkDistribution preset(std::string_view name);

  const std::vector<WalkStep>& steps() const noexcept { return steps_; }

 private:
  std::vector<WalkStep> steps_;
};

/// About four million paths, a few seconds of exact rational arithmetic.
inline constexpr std::uint64_t kKacPathBudget = std::uint64_t{1} << 22;

/// Throws BudgetExceeded when |support|^k exceeds kKacPathBudget.
void check_kac_budget(const WalkDistribution& dist, int k);

struct KacSides {
  Rational lhs;  // E max_{0<=l<=k} S_l, by enumerating every path
  Rational rhs;  // sum_l E(S_l)_+ / l, by convolving the step law
};

/// Throws BudgetExceeded when |support|^k exceeds kKacPathBudget.
KacSides kac_both_sides_exact(const WalkDistribution& dist, int k);

/// "p/q", or "p" for integers.
std::string to_string(const Rational& r);

}  // namespace optstop
