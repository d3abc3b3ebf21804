#pragma once

// Closed-form and quadrature predictions of the relative level inflation
// rho_{n,k} = alpha_{n,k} / alpha - 1.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "optstop/quadrature.hpp"
#include "optstop/sequential_test.hpp"
#include "optstop/special_fn.hpp"

namespace optstop {

enum class PredictionMode { SumFormula, SqrtLimit };
enum class EslSource { ClosedFormGauss, ClosedFormExponential, MonteCarlo };

std::string_view mode_name(PredictionMode mode) noexcept;
std::string_view esl_source_name(EslSource source) noexcept;

/// Closed-form source of E(S_l)_+ for a family: Gauss scores for the Gauss
/// and t families, exponential scores for the exponential family.
EslSource closed_form_source(TestFamily family) noexcept;

struct PredictionBreakdown {
  double rho = 0.0;
  HValue h{1.0};
  /// terms[l - 1] = E(S_l)_+ / l; empty in SqrtLimit mode.
  std::vector<double> terms;
  PredictionMode mode = PredictionMode::SumFormula;
  EslSource esl_source = EslSource::ClosedFormGauss;
  /// Set when k/n > 0.1, outside the k/n -> 0 regime of the square-root law.
  bool outside_validity = false;

  double percent() const noexcept { return 100.0 * rho; }
  double implied_alpha_nk(Probability alpha) const noexcept { return alpha.value() * (1.0 + rho); }
};

/// E(S_l)_+ for the family's null score walk: sqrt(l / 2 pi) for normal
/// scores, (l/e)^l / (l-1)! for centered unit exponentials (log space).
double esl_plus_closed_form(TestFamily family, std::int64_t ell);
std::vector<double> esl_plus_closed_form_table(TestFamily family, std::int64_t ell_max);

/// rho ~ (h(alpha) / sqrt n) sqrt(2 pi) sum_{l=1}^k E(S_l)_+ / l, with the
/// E(S_l)_+ supplied by the caller (closed form or Monte Carlo).
PredictionBreakdown predict_rho_sum(std::int64_t n, std::int64_t k, Probability alpha,
                                    std::span<const double> esl,
                                    EslSource source = EslSource::MonteCarlo);

/// rho ~ 2 h(alpha) sqrt(k / n).
PredictionBreakdown predict_rho_sqrt(std::int64_t n, std::int64_t k, Probability alpha);

/// sqrt(n) (alpha_{n,1} - alpha) for the Gauss test, by Gauss-Legendre
/// quadrature of
///   int_0^inf (1 - Phi(c + u)) phi(z - u / sqrt n) du,
/// c = (sqrt(n+1) - sqrt n) z, z = Phi^{-1}(1 - alpha), over u in [0, 45].
QuadratureResult gauss_k1_scaled_excess(std::int64_t n, Probability alpha, double tol);

/// alpha_{n,1} for the Gauss test; value >= alpha.
QuadratureResult exact_gauss_k1(std::int64_t n, Probability alpha, double tol);

struct EslBoundRow {
  std::int64_t ell;
  double esl;    // E(S_l)_+
  double bound;  // sqrt(l / 2) E(S_1)_+
};

/// Pairs E(S_l)_+ with the lower bound sqrt(l/2) E(S_1)_+ for l = 1..l_max.
std::vector<EslBoundRow> esl_lower_bound_check(TestFamily family, std::int64_t ell_max);

}  // namespace optstop
