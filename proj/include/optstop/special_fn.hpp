#pragma once

// Special functions needed by the level-inflation computations: the standard
// normal distribution, the h(alpha) constant, log-gamma, the regularized
// incomplete gamma function and its inverse, and Student's t distribution.
//
// Every function here is pure and may be called concurrently.

namespace optstop {

/// A probability strictly inside (0, 1). Construction outside that interval
/// throws std::domain_error.
class Probability {
 public:
  explicit Probability(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// The inflation constant h(alpha) = phi(z) / (alpha * sqrt(2 pi)) with
/// z the upper alpha-quantile of N(0,1). Always strictly positive.
class HValue {
 public:
  explicit HValue(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

namespace special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLnSqrt2Pi = 0.91893853320467274178;

double std_normal_pdf(double x) noexcept;

/// Phi(x). The lower tail is floored at the smallest subnormal so that the
/// result stays strictly positive for every finite x.
double std_normal_cdf(double x) noexcept;

/// 1 - Phi(x), computed without cancellation.
double std_normal_ccdf(double x) noexcept;

double std_normal_quantile(Probability p);

/// Phi^{-1}(1 - alpha), evaluated from alpha directly so small alphas keep
/// full relative accuracy.
double std_normal_upper_quantile(Probability alpha);

/// (1 - Phi(x)) / phi(x).
double mills_ratio(double x) noexcept;

HValue h_alpha(Probability alpha);

/// ln Gamma(a) for a > 0; throws std::domain_error otherwise.
double log_gamma(double a);

/// ln Gamma(a) - (a - 1/2) ln a + a - ln sqrt(2 pi), the remainder of
/// Stirling's formula. Small and positive for a > 0.
double stirling_remainder(double a);

/// P(a, x) = gamma(a, x) / Gamma(a).
double regularized_gamma_p(double a, double x);

/// Q(a, x) = 1 - P(a, x), computed directly in the upper tail.
double regularized_gamma_q(double a, double x);

/// x with P(a, x) = p.
double gamma_quantile(double a, Probability p);

/// x with Q(a, x) = alpha.
double gamma_upper_quantile(double a, Probability alpha);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

double student_t_pdf(int nu, double x);
double student_t_cdf(int nu, double x);
double student_t_quantile(int nu, Probability p);

}  // namespace special
}  // namespace optstop
