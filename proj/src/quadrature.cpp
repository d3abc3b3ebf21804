#include "optstop/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optstop/errors.hpp"

namespace optstop {

const GaussLegendre64& GaussLegendre64::instance() {
  static const GaussLegendre64 rule = [] {
    GaussLegendre64 r{};
    constexpr int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      // Recompute the derivative at the converged node.
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.nodes[i] = -x;
      r.nodes[n - 1 - i] = x;
      r.weights[i] = w;
      r.weights[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("integrate_panels: need at least one panel");
  const auto& rule = GaussLegendre64::instance();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += half * panel;
  }
  return total;
}

QuadratureResult integrate_refining(const std::function<double(double)>& f, double a, double b,
                                    int initial_panels, double tol, int max_panels) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  int panels = initial_panels;
  double previous = integrate_panels(f, a, b, panels);
  while (2 * panels <= max_panels) {
    panels *= 2;
    const double current = integrate_panels(f, a, b, panels);
    const double err = std::fabs(current - previous);
    if (err <= tol) return {current, err, panels};
    previous = current;
  }
  throw NumericalFailure("quadrature did not reach the requested tolerance within " +
                         std::to_string(max_panels) + " panels");
}

}  // namespace optstop
