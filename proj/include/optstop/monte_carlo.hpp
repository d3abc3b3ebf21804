#pragma once

// Monte Carlo estimation under the null: the inflated level alpha_{n,k},
// E(S_l)_+ for the score random walk, and both sides of the von Bahr-Esseen
// bound for degenerate U-statistics.
//
// Replications are split into fixed-size chunks by index. Workers claim
// chunks in any order, but each chunk's accumulator depends only on its
// replication indices and chunks are merged in index order, so results are
// bit-identical for any worker count.

#include <cstdint>
#include <vector>

#include "optstop/sequential_test.hpp"

namespace optstop {

struct RngSpec {
  std::uint64_t master_seed = 0;
};

inline constexpr std::uint64_t kReplicationChunk = 8192;

struct WilsonInterval {
  double lower;
  double upper;

  double center() const noexcept { return 0.5 * (lower + upper); }
  double half_width() const noexcept { return 0.5 * (upper - lower); }
};

/// Wilson score interval for a binomial proportion; z defaults to the 97.5%
/// normal quantile (a 95% interval).
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

/// True when `target` lies within `multiples` half-widths of the 95% Wilson
/// interval's center.
bool within_wilson_half_widths(std::uint64_t successes, std::uint64_t trials, double target,
                               double multiples);

struct InflationEstimate {
  double alpha = 0.0;
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::uint64_t reps = 0;
  std::uint64_t rejections = 0;  // paths rejecting at some m in n..n+k
  double alpha_hat_nk = 0.0;
  double alpha_hat_n = 0.0;
  double rho_hat = 0.0;  // alpha_hat_nk / alpha - 1
  double se = 0.0;       // standard error of alpha_hat_nk
  WilsonInterval ci95{0.0, 0.0};
  /// Entry j counts paths whose first rejection happened at m = n + j.
  std::vector<std::uint64_t> first_rejection_histogram;

  double rho_se() const noexcept { return se / alpha; }
  /// alpha_hat for a smaller budget, read off the same paths.
  double alpha_hat_for_budget(std::int64_t budget) const;
};

/// Estimates alpha_{n,k} by running every replication along one sample path
/// through m = n..n+k and recording the first rejecting m.
InflationEstimate simulate_alpha_nk(const TestConfig& config, std::uint64_t reps, RngSpec rng,
                                    unsigned workers = 1);

struct EslEstimate {
  std::uint64_t reps = 0;
  // Index l - 1 holds the value for l = 1..l_max.
  std::vector<double> mean;  // E(S_l)_+
  std::vector<double> se;
  std::vector<double> max_mean;  // E max_{0<=j<=l} S_j
  std::vector<double> max_se;
  /// Per-path max_{j<=l} S_j - sum_{j<=l} (S_j)_+ / j; zero in expectation.
  std::vector<double> kac_gap_mean;
  std::vector<double> kac_gap_se;
};

/// Estimates E(S_l)_+ for l = 1..l_max from null scores of the family, all
/// l sharing the same paths.
EslEstimate estimate_esl_plus(TestFamily family, int ell_max, std::uint64_t reps, RngSpec rng,
                              unsigned workers = 1);

enum class VbeKernel {
  ProductNormal,              // f(x, y) = x y, x ~ N(0,1)
  ProductCenteredExponential  // f(x, y) = x y, x ~ Exp(1) - 1
};

struct VbeCheck {
  std::uint64_t reps = 0;
  double lhs = 0.0;  // E |M_n|^p
  double lhs_se = 0.0;
  double rhs = 0.0;  // 4 sum_{i<j} E |f(X_i, X_j)|^p
  double rhs_se = 0.0;
  double margin = 0.0;  // rhs - lhs, from per-path differences
  double margin_se = 0.0;

  bool holds() const noexcept { return margin > 0.0; }
  double margin_in_se() const noexcept { return margin_se > 0.0 ? margin / margin_se : 0.0; }
};

VbeCheck vbe_bound_check(VbeKernel kernel, int n, double p, std::uint64_t reps, RngSpec rng,
                         unsigned workers = 1);

}  // namespace optstop
