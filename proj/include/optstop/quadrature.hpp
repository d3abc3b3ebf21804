#pragma once

#include <array>
#include <functional>

namespace optstop {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // difference between the last two refinement levels
  int panels = 0;
};

/// 64-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre64 {
  std::array<double, 64> nodes;
  std::array<double, 64> weights;

  static const GaussLegendre64& instance();
};

/// Composite 64-point Gauss-Legendre rule over `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels);

/// Starts with `initial_panels` equal panels on [a, b] and doubles the panel
/// count until two successive levels differ by at most `tol`. Throws
/// NumericalFailure when `max_panels` is exceeded first.
QuadratureResult integrate_refining(const std::function<double(double)>& f, double a, double b,
                                    int initial_panels, double tol, int max_panels = 1 << 16);

}  // namespace optstop
