#include "optstop/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optstop/errors.hpp"

namespace optstop {

Probability::Probability(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::domain_error("probability must lie in (0,1), got " +
                            std::to_string(value));
  }
}

HValue::HValue(double value) : value_(value) {
  if (!(value > 0.0)) {
    throw std::domain_error("h(alpha) must be positive");
  }
}

namespace special {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kEulerGamma = 0.57721566490153286061;

// (-1)^k zeta(k) / k for k = 2..30: Taylor coefficients of ln Gamma(1 + x).
constexpr std::array<double, 29> kLogGammaTaylor = {
    0.82246703342411321824,  -0.40068563438653142847, 0.27058080842778454788,
    -0.20738555102867398527, 0.16955717699740818995,  -0.14404989676884611812,
    0.12550966952474304242,  -0.11133426586956469049, 0.10009945751278180853,
    -0.090954017145829042233, 0.083353840546109004025, -0.076932516411352191473,
    0.071432946295361336059, -0.066668705882420468033, 0.062500955141213040742,
    -0.058823978658684582339, 0.055555767627403611102, -0.052631679379616660734,
    0.05000004769810169364,  -0.047619070330142227991, 0.045454556293204669442,
    -0.043478266053040259361, 0.041666669150341210469, -0.040000001192140140586,
    0.038461539034675185706, -0.037037037312989325549, 0.035714285847333358028,
    -0.034482758684919300811, 0.033333333364377581081,
};

// Above this point Stirling's series is accurate to machine precision.
constexpr double kStirlingCutoff = 15.0;

double stirling_series(double a) {
  const double r = 1.0 / a;
  const double r2 = r * r;
  return r *
         (1.0 / 12.0 -
          r2 * (1.0 / 360.0 -
                r2 * (1.0 / 1260.0 -
                      r2 * (1.0 / 1680.0 -
                            r2 * (1.0 / 1188.0 -
                                  r2 * (691.0 / 360360.0 - r2 / 156.0))))));
}

double log_gamma_one_plus(double x) {
  // ln Gamma(1 + x) for |x| <= 0.2.
  double sum = 0.0;
  double power = x;
  for (double c : kLogGammaTaylor) {
    power *= x;
    sum += c * power;
  }
  return -kEulerGamma * x + sum;
}

// x ln(x/m) + m - x, stable when x is close to m.
double deviance_term(double x, double m) {
  if (std::fabs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

// x^a e^{-x} / Gamma(a)
double gamma_prefactor(double a, double x) {
  return std::sqrt(a / (2.0 * kPi)) *
         std::exp(-deviance_term(a, x) - stirling_remainder(a));
}

int iteration_budget(double a) {
  return 1000 + static_cast<int>(50.0 * std::sqrt(a));
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  const int budget = iteration_budget(a);
  for (int i = 0; i < budget; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * gamma_prefactor(a, x);
    }
  }
  throw NumericalFailure("incomplete gamma series did not converge");
}

double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  const int budget = iteration_budget(a);
  for (int i = 1; i <= budget; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return h * gamma_prefactor(a, x);
    }
  }
  throw NumericalFailure("incomplete gamma continued fraction did not converge");
}

void check_gamma_domain(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("incomplete gamma: shape must be positive");
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("incomplete gamma: x must be nonnegative");
  }
}

double log_beta(double a, double b) {
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= kStirlingCutoff) {
    const double corr =
        stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr +
           (p - 0.5) * std::log(p / (p + q)) + q * std::log1p(-p / (p + q));
  }
  if (q >= kStirlingCutoff) {
    const double corr = stirling_remainder(q) - stirling_remainder(p + q);
    return log_gamma(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  const int budget = iteration_budget(std::max(a, b));
  for (int m = 1; m <= budget; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalFailure("incomplete beta continued fraction did not converge");
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double beta_inc(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log(y) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_fraction(b, a, y) / b;
}

// P(T > |x|) for T ~ t_nu.
double student_t_upper_tail_abs(int nu, double x) {
  const double t2 = x * x;
  const double denom = nu + t2;
  return 0.5 * beta_inc(0.5 * nu, 0.5, nu / denom, t2 / denom);
}

// Quantile for p <= 1/2 (result <= 0).
double normal_lower_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  // Two Halley steps against the erfc-based cdf.
  for (int i = 0; i < 2; ++i) {
    const double density = std_normal_pdf(x);
    if (density == 0.0) break;
    const double u = (std_normal_cdf(x) - p) / density;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace

double std_normal_pdf(double x) noexcept {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) noexcept {
  const double value = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  return value > 0.0 ? value : std::numeric_limits<double>::denorm_min();
}

double std_normal_ccdf(double x) noexcept { return std_normal_cdf(-x); }

double std_normal_quantile(Probability p) {
  const double v = p.value();
  if (v <= 0.5) return normal_lower_quantile(v);
  return -normal_lower_quantile(1.0 - v);  // exact complement for v >= 1/2
}

double std_normal_upper_quantile(Probability alpha) {
  const double v = alpha.value();
  if (v <= 0.5) return -normal_lower_quantile(v);
  return normal_lower_quantile(1.0 - v);
}

double mills_ratio(double x) noexcept {
  if (x <= 5.0) {
    return std_normal_ccdf(x) / std_normal_pdf(x);
  }
  // Laplace continued fraction 1/(x+ 1/(x+ 2/(x+ 3/(x+ ...)))), evaluated
  // backwards; 120 levels are ample for x > 5.
  double tail = 0.0;
  for (int k = 120; k >= 1; --k) {
    tail = k / (x + tail);
  }
  return 1.0 / (x + tail);
}

HValue h_alpha(Probability alpha) {
  const double z = std_normal_upper_quantile(alpha);
  return HValue(std_normal_pdf(z) / (alpha.value() * kSqrt2Pi));
}

double log_gamma(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("log_gamma: argument must be positive and finite");
  }
  if (a == 1.0 || a == 2.0) return 0.0;
  if (std::fabs(a - 1.0) <= 0.2) return log_gamma_one_plus(a - 1.0);
  if (std::fabs(a - 2.0) <= 0.2) {
    return log_gamma_one_plus(a - 2.0) + std::log1p(a - 2.0);
  }
  if (a >= kStirlingCutoff) {
    return (a - 0.5) * std::log(a) - a + kLnSqrt2Pi + stirling_series(a);
  }
  // Shift into the Stirling range: Gamma(a) = Gamma(a + s) / (a (a+1) ... ).
  double product = 1.0;
  double shifted = a;
  while (shifted < kStirlingCutoff) {
    product *= shifted;
    shifted += 1.0;
  }
  return (shifted - 0.5) * std::log(shifted) - shifted + kLnSqrt2Pi +
         stirling_series(shifted) - std::log(product);
}

double stirling_remainder(double a) {
  if (!(a > 0.0)) {
    throw std::domain_error("stirling_remainder: argument must be positive");
  }
  if (a >= kStirlingCutoff) return stirling_series(a);
  return log_gamma(a) - (a - 0.5) * std::log(a) + a - kLnSqrt2Pi;
}

double regularized_gamma_p(double a, double x) {
  check_gamma_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

namespace {

// Solves P(a, x) = target (lower == true) or Q(a, x) = target.
double gamma_inverse(double a, double target, bool lower) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("gamma quantile: shape must be positive");
  }
  const double p_lower = lower ? target : 1.0 - target;

  // Wilson-Hilferty starting point.
  const double z = lower ? std_normal_quantile(Probability(target))
                         : std_normal_upper_quantile(Probability(target));
  const double c = 1.0 / (9.0 * a);
  double x = a * std::pow(1.0 - c + z * std::sqrt(c), 3);
  if (!(x > 0.0) || a < 1.0) {
    // Small-x behaviour P(a, x) ~ x^a / Gamma(a + 1).
    const double small = std::exp((std::log(p_lower) + log_gamma(a + 1.0)) / a);
    if (!(x > 0.0) || small < x) x = small;
  }

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    // f increases with x in both formulations.
    const double f = lower ? regularized_gamma_p(a, x) - target
                           : target - regularized_gamma_q(a, x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = gamma_prefactor(a, x) / x;
    double next = density > 0.0 ? x - f / density : x;
    if (!(next > lo && next < hi)) {
      next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) <= 4.0 * kEps * x) return next;
    x = next;
  }
  throw NumericalFailure("gamma quantile iteration did not converge");
}

}  // namespace

double gamma_quantile(double a, Probability p) {
  if (p.value() <= 0.5) return gamma_inverse(a, p.value(), true);
  return gamma_inverse(a, 1.0 - p.value(), false);
}

double gamma_upper_quantile(double a, Probability alpha) {
  if (alpha.value() <= 0.5) return gamma_inverse(a, alpha.value(), false);
  return gamma_inverse(a, 1.0 - alpha.value(), true);
}

double regularized_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete beta: parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("incomplete beta: x must lie in [0,1]");
  }
  return beta_inc(a, b, x, 1.0 - x);
}

double student_t_pdf(int nu, double x) {
  if (nu < 1) throw std::domain_error("student t: degrees of freedom must be >= 1");
  return std::exp(-log_beta(0.5 * nu, 0.5) - 0.5 * std::log(static_cast<double>(nu)) -
                  0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_cdf(int nu, double x) {
  if (nu < 1) throw std::domain_error("student t: degrees of freedom must be >= 1");
  if (std::isnan(x)) throw std::domain_error("student t: x is NaN");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double tail = student_t_upper_tail_abs(nu, x);
  return x > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(int nu, Probability p) {
  if (nu < 1) throw std::domain_error("student t: degrees of freedom must be >= 1");
  const double v = p.value();
  if (v == 0.5) return 0.0;
  const double target = v < 0.5 ? v : 1.0 - v;

  // Lower-tail root of P(T <= t) = target on t < 0, bracketed by [lo, hi].
  auto lower_cdf = [nu](double t) { return student_t_upper_tail_abs(nu, t); };
  const double z = normal_lower_quantile(target);
  double t = z + (z * z * z + z) / (4.0 * nu);
  double hi = 0.0;
  double lo = std::min(t, -1.0);
  while (lower_cdf(lo) > target) {
    hi = lo;
    lo *= 2.0;
    if (!std::isfinite(lo)) throw NumericalFailure("student t quantile: bracket failed");
  }
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

  for (int iter = 0; iter < 300; ++iter) {
    const double f = lower_cdf(t) - target;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - f / student_t_pdf(nu, t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::fabs(next - t) <= 4.0 * kEps * std::fabs(t);
    t = next;
    if (done) break;
  }
  return v < 0.5 ? t : -t;
}

}  // namespace special
}  // namespace optstop
