// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Simulation criteria use all hardware threads; results do
// not depend on the thread count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "optstop/asymptotics.hpp"
#include "optstop/cli/commands.hpp"
#include "optstop/kac.hpp"
#include "optstop/monte_carlo.hpp"
#include "optstop/special_fn.hpp"

using namespace optstop;

namespace {

constexpr std::uint64_t kSeed = 20261016;
const Probability kFive(0.05);

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %2d  %s: %s [%.2f s of %.0f s]%s\n", pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs, budget_seconds, in_time ? "" : " over time budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

int main() {
  std::printf("acceptance run, %u worker thread(s), master seed %llu\n", workers(),
              static_cast<unsigned long long>(kSeed));

  criterion(1, "h table", 1.0, [] {
    const auto r = cli::cmd_h_table(cli::default_h_table_alphas());
    const double want[] = {0.82, 0.93, 1.06, 1.15, 1.34, 1.42};
    bool ok = r.table.rows().size() == 6;
    std::string got;
    for (std::size_t i = 0; ok && i < 6; ++i) {
      const double h = std::get<double>(r.table.rows()[i][2]);
      ok = ok && h == want[i];
      got += fmt(i ? " %.2f" : "%.2f", h);
    }
    return Outcome{ok, "rounded h = {" + got + "}"};
  });

  criterion(2, "sqrt(n) rho_{n,1} -> h(alpha) by quadrature", 5.0, [] {
    const double h = special::h_alpha(kFive).value();
    std::string got;
    double prev_gap = INFINITY, last = 0.0;
    bool converging = true;
    for (std::int64_t n : {100LL, 10'000LL, 1'000'000LL, 100'000'000LL}) {
      const double scaled = gauss_k1_scaled_excess(n, kFive, 1e-13).value / kFive.value();
      const double gap = std::fabs(scaled - h);
      converging = converging && gap < prev_gap;
      prev_gap = gap;
      last = scaled;
      got += fmt(" %.7f", scaled);
    }
    const bool ok = converging && std::fabs(last / 0.8229 - 1.0) <= 1e-3;
    return Outcome{ok, "n=1e2,1e4,1e6,1e8:" + got + fmt("; h(0.05) = %.7f", h)};
  });

  criterion(3, "quadrature vs simulation at n=100, k=1", 120.0, [] {
    const double exact = exact_gauss_k1(100, kFive, 1e-14).value;
    const auto est = simulate_alpha_nk({TestFamily::GaussKnownVariance, kFive, 100, 1}, 10'000'000,
                                       {kSeed}, workers());
    const double z = (est.alpha_hat_nk - exact) / est.se;
    return Outcome{std::fabs(z) <= 3.0, fmt("alpha_hat = %.6f", est.alpha_hat_nk) +
                                            fmt(", quadrature = %.6f", exact) +
                                            fmt(", se = %.2e", est.se) + fmt(", z = %+.2f", z)};
  });

  criterion(4, "sqrt(k/n) regime at n=1e4, k=100", 600.0, [] {
    const double target = predict_rho_sqrt(10'000, 100, kFive).rho;
    const auto est = simulate_alpha_nk({TestFamily::GaussKnownVariance, kFive, 10'000, 100}, 1'000'000,
                                       {kSeed}, workers());
    const double rel = est.rho_hat / target - 1.0;
    return Outcome{std::fabs(rel) <= 0.10, fmt("rho_hat = %.4f", est.rho_hat) +
                                               fmt(" (se %.4f)", est.rho_se()) +
                                               fmt(", 2h(0.05)sqrt(k/n) = %.4f", target) +
                                               fmt(", relative gap %+.1f%%", 100.0 * rel)};
  });

  criterion(5, "k=2 multiplier", 1.0, [] {
    const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, 2);
    const auto b = predict_rho_sum(100, 2, kFive, esl, EslSource::ClosedFormGauss);
    const double multiplier = b.rho * 10.0 / b.h.value();
    const bool ok = std::round(multiplier * 1e5) == 170711.0 && std::round(multiplier * 100.0) == 171.0;
    return Outcome{ok, fmt("sum_{l<=2} l^{-1/2} = %.5f", multiplier) +
                           fmt(" -> %.0f/sqrt(n) per cent", std::round(multiplier * 100.0))};
  });

  criterion(6, "(a) exponential E(S_l)_+ by simulation, l=1..20", 300.0, [] {
    const auto est = estimate_esl_plus(TestFamily::ExponentialMean, 20, 1'000'000, {kSeed}, workers());
    double worst = 0.0;
    int worst_l = 0;
    for (int l = 1; l <= 20; ++l) {
      const auto i = static_cast<std::size_t>(l - 1);
      const double z = std::fabs(est.mean[i] - esl_plus_closed_form(TestFamily::ExponentialMean, l)) /
                       est.se[i];
      if (z > worst) {
        worst = z;
        worst_l = l;
      }
    }
    return Outcome{worst <= 3.0, fmt("largest |z| = %.2f", worst) + fmt(" at l = %.0f", worst_l)};
  });

  criterion(6, "(b) exponential k=1 factor", 1.0, [] {
    const auto esl = esl_plus_closed_form_table(TestFamily::ExponentialMean, 1);
    const auto b = predict_rho_sum(100, 1, kFive, esl, EslSource::ClosedFormExponential);
    const double factor = b.rho * 10.0 / b.h.value();
    const bool ok = std::round(factor * 1e4) == 9221.0 && std::round(factor * 100.0) == 92.0 &&
                    std::fabs(factor - special::kSqrt2Pi / std::exp(1.0)) < 1e-14;
    return Outcome{ok, fmt("sqrt(2 pi)/e = %.4f", factor)};
  });

  criterion(6, "(c) exponential rho at n=400, k=3 vs sum predictor", 600.0, [] {
    const auto esl = esl_plus_closed_form_table(TestFamily::ExponentialMean, 3);
    const double pred = predict_rho_sum(400, 3, kFive, esl, EslSource::ClosedFormExponential).rho;
    const auto est = simulate_alpha_nk({TestFamily::ExponentialMean, kFive, 400, 3}, 10'000'000,
                                       {kSeed}, workers());
    const double rel = est.rho_hat / pred - 1.0;
    return Outcome{std::fabs(rel) <= 0.15, fmt("rho_hat = %.4f", est.rho_hat) +
                                               fmt(" (se %.4f)", est.rho_se()) +
                                               fmt(", predicted %.4f", pred) +
                                               fmt(", relative gap %+.1f%%", 100.0 * rel)};
  });

  criterion(7, "t-test rho at n=200, k=1 vs Gauss predictor", 600.0, [] {
    const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, 1);
    const double pred = predict_rho_sum(200, 1, kFive, esl, EslSource::ClosedFormGauss).rho;
    const auto est = simulate_alpha_nk({TestFamily::StudentT, kFive, 200, 1}, 10'000'000, {kSeed},
                                       workers());
    const double z = (est.rho_hat - pred) / est.rho_se();
    return Outcome{std::fabs(z) <= 3.0, fmt("rho_hat = %.5f", est.rho_hat) +
                                            fmt(" (se %.5f)", est.rho_se()) +
                                            fmt(", predicted %.5f", pred) + fmt(", z = %+.2f", z)};
  });

  criterion(8, "Kac identity in exact rationals", 60.0, [] {
    bool ok = true;
    for (int k = 1; k <= 16; ++k) {
      const auto s = kac_both_sides_exact(WalkDistribution::fair_coin(), k);
      ok = ok && s.lhs == s.rhs;
    }
    for (int k = 1; k <= 10; ++k) {
      const auto s = kac_both_sides_exact(WalkDistribution::skewed_two_point(), k);
      ok = ok && s.lhs == s.rhs;
    }
    const auto s16 = kac_both_sides_exact(WalkDistribution::fair_coin(), 16);
    return Outcome{ok, "fair k=1..16, skew k=1..10 all equal; fair k=16: " + to_string(s16.lhs)};
  });

  criterion(9, "(a) alpha_hat monotone in k on shared paths", 300.0, [] {
    bool ok = true;
    for (auto family : {TestFamily::GaussKnownVariance, TestFamily::ExponentialMean, TestFamily::StudentT}) {
      const auto full = simulate_alpha_nk({family, kFive, 50, 10}, 100'000, {kSeed}, workers());
      double prev = -1.0;
      for (std::int64_t k = 0; k <= 10; ++k) {
        const auto run = simulate_alpha_nk({family, kFive, 50, k}, 100'000, {kSeed}, workers());
        ok = ok && run.alpha_hat_nk == full.alpha_hat_for_budget(k) && run.alpha_hat_nk >= prev;
        prev = run.alpha_hat_nk;
      }
    }
    return Outcome{ok, "k = 0..10, three families, prefix counts identical and nondecreasing"};
  });

  criterion(9, "(b) level at k=0, three families, m in {10, 50, 200}", 600.0, [] {
    bool ok = true;
    std::string got;
    for (auto family : {TestFamily::GaussKnownVariance, TestFamily::ExponentialMean, TestFamily::StudentT}) {
      for (std::int64_t m : {10, 50, 200}) {
        const auto est = simulate_alpha_nk({family, kFive, m, 0}, 1'000'000, {kSeed}, workers());
        const auto ci = wilson_interval(est.rejections, est.reps);
        const double units = std::fabs(0.05 - ci.center()) / ci.half_width();
        ok = ok && units <= 3.0;
        got += std::string(" ") + std::string(family_name(family)) + fmt("/%.0f", double(m)) +
               fmt(":%.2f", units);
      }
    }
    return Outcome{ok, "|alpha - center| in half-widths:" + got};
  });

  criterion(9, "(c) quantile roundtrips", 60.0, [] {
    double normal = 0.0, gamma = 0.0, t = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double p = std::exp(std::log(1e-10) + (std::log(0.5) - std::log(1e-10)) * i / 400.0);
      for (double q : {p, 1.0 - p}) {
        if (!(q > 0.0 && q < 1.0)) continue;
        normal = std::max(normal, std::fabs(special::std_normal_cdf(special::std_normal_quantile(Probability(q))) - q));
        for (double a : {1.0, 30.0, 1e4, 1e6}) {
          gamma = std::max(gamma, std::fabs(special::regularized_gamma_p(a, special::gamma_quantile(a, Probability(q))) - q));
        }
        for (int nu : {1, 9, 199, 9999}) {
          t = std::max(t, std::fabs(special::student_t_cdf(nu, special::student_t_quantile(nu, Probability(q))) - q));
        }
      }
    }
    const bool ok = normal <= 1e-13 && gamma <= 1e-10 && t <= 1e-10;
    return Outcome{ok, fmt("max error normal %.1e", normal) + fmt(", gamma %.1e", gamma) +
                           fmt(", t %.1e", t)};
  });

  criterion(9, "(d) von Bahr-Esseen bound margins", 600.0, [] {
    double worst = INFINITY;
    std::string where;
    for (auto kernel : {VbeKernel::ProductNormal, VbeKernel::ProductCenteredExponential}) {
      for (int n : {5, 10, 50}) {
        for (double p : {1.0, 1.5, 2.0}) {
          const auto c = vbe_bound_check(kernel, n, p, 200'000, {kSeed}, workers());
          if (c.margin_in_se() < worst) {
            worst = c.margin_in_se();
            where = std::string(kernel == VbeKernel::ProductNormal ? "normal" : "exponential") +
                    fmt(" n=%.0f", n) + fmt(" p=%.1f", p);
          }
        }
      }
    }
    return Outcome{worst > 5.0, fmt("smallest margin %.1f SE", worst) + " (" + where + ")"};
  });

  criterion(10, "simulate output identical for 1 and 8 workers", 120.0, [] {
    const auto one = cli::cmd_simulate({TestFamily::GaussKnownVariance, 100, 1, 0.05, 1'000'000, kSeed, 1});
    const auto eight = cli::cmd_simulate({TestFamily::GaussKnownVariance, 100, 1, 0.05, 1'000'000, kSeed, 8});
    const bool ok = one.table.render(cli::TableFormat::Csv) == eight.table.render(cli::TableFormat::Csv) &&
                    one.table.render(cli::TableFormat::Json) == eight.table.render(cli::TableFormat::Json);
    return Outcome{ok, ok ? "CSV and JSON renderings byte-identical" : "renderings differ"};
  });

  std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
