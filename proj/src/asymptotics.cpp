#include "optstop/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace optstop {

std::string_view mode_name(PredictionMode mode) noexcept {
  return mode == PredictionMode::SumFormula ? "sum" : "sqrt";
}

std::string_view esl_source_name(EslSource source) noexcept {
  switch (source) {
    case EslSource::ClosedFormGauss:
      return "closed_form_gauss";
    case EslSource::ClosedFormExponential:
      return "closed_form_exponential";
    case EslSource::MonteCarlo:
      return "monte_carlo";
  }
  return "?";
}

EslSource closed_form_source(TestFamily family) noexcept {
  return family == TestFamily::ExponentialMean ? EslSource::ClosedFormExponential
                                               : EslSource::ClosedFormGauss;
}

double esl_plus_closed_form(TestFamily family, std::int64_t ell) {
  if (ell < 1) throw std::invalid_argument("ell must be at least 1");
  const double l = static_cast<double>(ell);
  if (family == TestFamily::ExponentialMean) {
    // (l/e)^l / (l-1)! = exp(l ln l - l - ln Gamma(l)); Stirling's formula
    // turns the exponent into (1/2) ln(l / 2 pi) - remainder(l).
    return std::exp(0.5 * std::log(l / (2.0 * special::kPi)) - special::stirling_remainder(l));
  }
  return std::sqrt(l / (2.0 * special::kPi));
}

std::vector<double> esl_plus_closed_form_table(TestFamily family, std::int64_t ell_max) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(ell_max, 0)));
  for (std::int64_t l = 1; l <= ell_max; ++l) out.push_back(esl_plus_closed_form(family, l));
  return out;
}

PredictionBreakdown predict_rho_sum(std::int64_t n, std::int64_t k, Probability alpha,
                                    std::span<const double> esl, EslSource source) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (esl.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("need E(S_l)_+ for every l up to k");
  }
  PredictionBreakdown out;
  out.h = special::h_alpha(alpha);
  out.mode = PredictionMode::SumFormula;
  out.esl_source = source;
  out.terms.reserve(static_cast<std::size_t>(k));
  double total = 0.0;
  for (std::int64_t l = 1; l <= k; ++l) {
    const double e = esl[static_cast<std::size_t>(l - 1)];
    if (!(e > 0.0)) {
      throw std::invalid_argument("E(S_l)_+ must be positive (l = " + std::to_string(l) + ")");
    }
    const double term = e / static_cast<double>(l);
    out.terms.push_back(term);
    total += term;
  }
  out.rho = out.h.value() / std::sqrt(static_cast<double>(n)) * special::kSqrt2Pi * total;
  out.outside_validity = static_cast<double>(k) > 0.1 * static_cast<double>(n);
  return out;
}

PredictionBreakdown predict_rho_sqrt(std::int64_t n, std::int64_t k, Probability alpha) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  PredictionBreakdown out;
  out.h = special::h_alpha(alpha);
  out.mode = PredictionMode::SqrtLimit;
  out.rho = 2.0 * out.h.value() * std::sqrt(static_cast<double>(k) / static_cast<double>(n));
  out.outside_validity = static_cast<double>(k) > 0.1 * static_cast<double>(n);
  return out;
}

QuadratureResult gauss_k1_scaled_excess(std::int64_t n, Probability alpha, double tol) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double z = special::std_normal_upper_quantile(alpha);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double shift = z / (std::sqrt(static_cast<double>(n) + 1.0) + root_n);
  auto integrand = [=](double u) {
    return special::std_normal_ccdf(shift + u) * special::std_normal_pdf(z - u / root_n);
  };
  constexpr double kUpper = 45.0;
  return integrate_refining(integrand, 0.0, kUpper, 45, tol);
}

QuadratureResult exact_gauss_k1(std::int64_t n, Probability alpha, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const double root_n = std::sqrt(static_cast<double>(n));
  const QuadratureResult scaled = gauss_k1_scaled_excess(n, alpha, tol * root_n);
  return {alpha.value() + scaled.value / root_n, scaled.abs_error / root_n, scaled.panels};
}

std::vector<EslBoundRow> esl_lower_bound_check(TestFamily family, std::int64_t ell_max) {
  std::vector<EslBoundRow> rows;
  const double first = esl_plus_closed_form(family, 1);
  for (std::int64_t l = 1; l <= ell_max; ++l) {
    rows.push_back({l, esl_plus_closed_form(family, l),
                    std::sqrt(static_cast<double>(l) / 2.0) * first});
  }
  return rows;
}

}  // namespace optstop
