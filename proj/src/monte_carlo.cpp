#include "optstop/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace optstop {
namespace {

void require_reps(std::uint64_t reps) {
  if (reps == 0) throw std::invalid_argument("reps must be at least 1");
}

// Mean and standard error of the mean from a sum and a sum of squares.
struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(double sum, double sum_sq, std::uint64_t count) {
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  if (count < 2) return {mean, 0.0};
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes > trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {center - half, center + half};
}

bool within_wilson_half_widths(std::uint64_t successes, std::uint64_t trials, double target,
                               double multiples) {
  const WilsonInterval ci = wilson_interval(successes, trials);
  return std::fabs(target - ci.center()) <= multiples * ci.half_width();
}

double InflationEstimate::alpha_hat_for_budget(std::int64_t budget) const {
  if (budget < 0 || budget > k) throw std::out_of_range("budget outside 0..k");
  std::uint64_t count = 0;
  for (std::int64_t j = 0; j <= budget; ++j) {
    count += first_rejection_histogram[static_cast<std::size_t>(j)];
  }
  return static_cast<double>(count) / static_cast<double>(reps);
}

InflationEstimate simulate_alpha_nk(const TestConfig& config, std::uint64_t reps, RngSpec rng,
                                    unsigned workers) {
  require_reps(reps);
  const SequentialTest test(config);
  const Standardizer standardizer = Standardizer::for_family(config.family, config.null_params);
  const auto bins = static_cast<std::size_t>(config.k + 1);

  auto chunks = detail::run_chunked(
      reps, workers, kReplicationChunk, std::vector<std::uint64_t>(bins, 0),
      [&](std::vector<std::uint64_t>& first, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          Xoshiro256pp gen(derive_stream_seed(rng.master_seed, r));
          NullSampler sampler(config.family, config.null_params);
          SequentialState state;
          for (std::int64_t i = 1; i < config.n; ++i) state.push(sampler(gen), standardizer);
          for (std::size_t j = 0; j < bins; ++j) {
            state.push(sampler(gen), standardizer);
            if (test.rejects(state)) {
              ++first[j];
              break;
            }
          }
        }
      });

  InflationEstimate est;
  est.alpha = config.alpha.value();
  est.n = config.n;
  est.k = config.k;
  est.reps = reps;
  est.first_rejection_histogram.assign(bins, 0);
  for (const auto& chunk : chunks) {
    for (std::size_t j = 0; j < bins; ++j) est.first_rejection_histogram[j] += chunk[j];
  }
  for (auto c : est.first_rejection_histogram) est.rejections += c;

  const double total = static_cast<double>(reps);
  est.alpha_hat_nk = static_cast<double>(est.rejections) / total;
  est.alpha_hat_n = static_cast<double>(est.first_rejection_histogram[0]) / total;
  est.rho_hat = est.alpha_hat_nk / est.alpha - 1.0;
  est.se = std::sqrt(est.alpha_hat_nk * (1.0 - est.alpha_hat_nk) / total);
  est.ci95 = wilson_interval(est.rejections, reps);
  return est;
}

namespace {

struct EslAccumulator {
  std::vector<double> pos, pos_sq, max, max_sq, gap, gap_sq;

  explicit EslAccumulator(std::size_t l)
      : pos(l, 0.0), pos_sq(l, 0.0), max(l, 0.0), max_sq(l, 0.0), gap(l, 0.0), gap_sq(l, 0.0) {}
};

}  // namespace

EslEstimate estimate_esl_plus(TestFamily family, int ell_max, std::uint64_t reps, RngSpec rng,
                              unsigned workers) {
  require_reps(reps);
  if (ell_max < 1) throw std::invalid_argument("ell_max must be at least 1");
  const auto l = static_cast<std::size_t>(ell_max);
  const NullParameters params{};
  const Standardizer standardizer = Standardizer::for_family(family, params);

  auto chunks = detail::run_chunked(
      reps, workers, kReplicationChunk, EslAccumulator(l),
      [&](EslAccumulator& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          Xoshiro256pp gen(derive_stream_seed(rng.master_seed, r));
          NullSampler sampler(family, params);
          double s = 0.0;
          double running_max = 0.0;  // includes S_0 = 0
          double kac_sum = 0.0;
          for (std::size_t i = 0; i < l; ++i) {
            s += standardizer(sampler(gen));
            const double pos = s > 0.0 ? s : 0.0;
            running_max = std::max(running_max, s);
            kac_sum += pos / static_cast<double>(i + 1);
            const double gap = running_max - kac_sum;
            acc.pos[i] += pos;
            acc.pos_sq[i] += pos * pos;
            acc.max[i] += running_max;
            acc.max_sq[i] += running_max * running_max;
            acc.gap[i] += gap;
            acc.gap_sq[i] += gap * gap;
          }
        }
      });

  EslAccumulator total(l);
  for (const auto& c : chunks) {
    for (std::size_t i = 0; i < l; ++i) {
      total.pos[i] += c.pos[i];
      total.pos_sq[i] += c.pos_sq[i];
      total.max[i] += c.max[i];
      total.max_sq[i] += c.max_sq[i];
      total.gap[i] += c.gap[i];
      total.gap_sq[i] += c.gap_sq[i];
    }
  }

  EslEstimate est;
  est.reps = reps;
  for (std::size_t i = 0; i < l; ++i) {
    const auto p = mean_se(total.pos[i], total.pos_sq[i], reps);
    const auto m = mean_se(total.max[i], total.max_sq[i], reps);
    const auto g = mean_se(total.gap[i], total.gap_sq[i], reps);
    est.mean.push_back(p.mean);
    est.se.push_back(p.se);
    est.max_mean.push_back(m.mean);
    est.max_se.push_back(m.se);
    est.kac_gap_mean.push_back(g.mean);
    est.kac_gap_se.push_back(g.se);
  }
  return est;
}

VbeCheck vbe_bound_check(VbeKernel kernel, int n, double p, std::uint64_t reps, RngSpec rng,
                         unsigned workers) {
  require_reps(reps);
  if (n < 2) throw std::invalid_argument("vbe check needs n >= 2");
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("vbe check needs 1 <= p <= 2");
  const TestFamily family = kernel == VbeKernel::ProductNormal ? TestFamily::GaussKnownVariance
                                                              : TestFamily::ExponentialMean;
  const Standardizer standardizer = Standardizer::for_family(family, NullParameters{});

  struct Acc {
    double lhs = 0, lhs_sq = 0, rhs = 0, rhs_sq = 0, diff = 0, diff_sq = 0;
  };
  auto chunks = detail::run_chunked(
      reps, workers, kReplicationChunk, Acc{},
      [&](Acc& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          Xoshiro256pp gen(derive_stream_seed(rng.master_seed, r));
          NullSampler sampler(family);
          // M_n = sum_j x_j * (x_1 + ... + x_{j-1}); likewise for |x|^p.
          double prefix = 0.0, prefix_abs = 0.0, m = 0.0, pairs = 0.0;
          for (int j = 0; j < n; ++j) {
            const double x = standardizer(sampler(gen));
            const double ax = std::pow(std::fabs(x), p);
            m += x * prefix;
            pairs += ax * prefix_abs;
            prefix += x;
            prefix_abs += ax;
          }
          const double lhs = std::pow(std::fabs(m), p);
          const double rhs = 4.0 * pairs;
          acc.lhs += lhs;
          acc.lhs_sq += lhs * lhs;
          acc.rhs += rhs;
          acc.rhs_sq += rhs * rhs;
          acc.diff += rhs - lhs;
          acc.diff_sq += (rhs - lhs) * (rhs - lhs);
        }
      });

  Acc total;
  for (const auto& c : chunks) {
    total.lhs += c.lhs;
    total.lhs_sq += c.lhs_sq;
    total.rhs += c.rhs;
    total.rhs_sq += c.rhs_sq;
    total.diff += c.diff;
    total.diff_sq += c.diff_sq;
  }
  const auto l = mean_se(total.lhs, total.lhs_sq, reps);
  const auto rr = mean_se(total.rhs, total.rhs_sq, reps);
  const auto d = mean_se(total.diff, total.diff_sq, reps);
  return VbeCheck{reps, l.mean, l.se, rr.mean, rr.se, d.mean, d.se};
}

}  // namespace optstop
