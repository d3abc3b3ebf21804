#include "optstop/kac.hpp"

#include <map>
#include <stdexcept>
#include <string>

#include "optstop/errors.hpp"

namespace optstop {

WalkDistribution::WalkDistribution(std::vector<WalkStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("walk distribution needs a non-empty support");
  Rational total = 0;
  for (const auto& s : steps_) {
    if (s.probability <= 0) throw std::invalid_argument("step probabilities must be positive");
    total += s.probability;
  }
  if (total != 1) throw std::invalid_argument("step probabilities must sum to exactly 1");
}

WalkDistribution WalkDistribution::fair_coin() {
  return WalkDistribution({{Rational(1), Rational(1, 2)}, {Rational(-1), Rational(1, 2)}});
}

WalkDistribution WalkDistribution::skewed_two_point() {
  return WalkDistribution({{Rational(2), Rational(1, 3)}, {Rational(-1), Rational(2, 3)}});
}

WalkDistribution WalkDistribution::preset(std::string_view name) {
  if (name == "fair") return fair_coin();
  if (name == "skew") return skewed_two_point();
  throw std::invalid_argument("unknown walk preset '" + std::string(name) +
                              "' (expected fair or skew)");
}

namespace {

}  // namespace

void check_kac_budget(const WalkDistribution& dist, int k) {
  const std::uint64_t support = dist.steps().size();
  std::uint64_t paths = 1;
  for (int i = 0; i < k; ++i) {
    if (paths > kKacPathBudget / support) {
      throw BudgetExceeded("path enumeration exceeds the budget of " +
                           std::to_string(kKacPathBudget) + " paths");
    }
    paths *= support;
  }
}

namespace {

// Adds sum over continuations of P(path) * max(path) to `acc`.
void enumerate_paths(const std::vector<WalkStep>& steps, int remaining, const Rational& sum,
                     const Rational& running_max, const Rational& prob, Rational& acc) {
  if (remaining == 0) {
    acc += prob * running_max;
    return;
  }
  for (const auto& s : steps) {
    const Rational next = sum + s.value;
    enumerate_paths(steps, remaining - 1, next, next > running_max ? next : running_max,
                    prob * s.probability, acc);
  }
}

}  // namespace

KacSides kac_both_sides_exact(const WalkDistribution& dist, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto& steps = dist.steps();
  check_kac_budget(dist, k);

  KacSides out;
  enumerate_paths(steps, k, Rational(0), Rational(0), Rational(1), out.lhs);

  // Law of S_l by repeated convolution.
  std::map<Rational, Rational> law{{Rational(0), Rational(1)}};
  for (int l = 1; l <= k; ++l) {
    std::map<Rational, Rational> next;
    for (const auto& [value, prob] : law) {
      for (const auto& s : steps) next[value + s.value] += prob * s.probability;
    }
    law = std::move(next);
    Rational positive_part = 0;
    for (const auto& [value, prob] : law) {
      if (value > 0) positive_part += value * prob;
    }
    out.rhs += positive_part / l;
  }
  return out;
}

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace optstop
