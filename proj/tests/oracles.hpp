// Test-only reference computations: brute-force quadrature rules, finite
// differences and polyline lengths. Nothing here touches the adaptive
// integrator or the chart solvers it is used to check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ccgeo/geodesics.hpp"

namespace oracles {

// Composite midpoint rule with n panels.
inline double midpoint(const std::function<double(double)>& fn, double a,
                       double b, long n) {
  const double h = (b - a) / n;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) sum += fn(a + (i + 0.5) * h);
  return sum * h;
}

// Midpoint rule for integrands fn_reg(t)/sqrt(b - t): graded mesh via the
// exact substitution t = b - u^2, so each panel sees a bounded integrand.
inline double midpoint_sqrt_singular(const std::function<double(double)>& fn_reg,
                                     double a, double b, long n) {
  const double w = std::sqrt(b - a);
  const double h = w / n;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double u = (i + 0.5) * h;
    sum += 2.0 * fn_reg(b - u * u);
  }
  return sum * h;
}

// Central finite difference.
inline double central_fd(const std::function<double(double)>& fn, double x,
                         double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

// Riemann metric length of a polyline in dx^2 + dy^2/f^2 + dz^2/g^2 with the
// profiles frozen at segment midpoints.
inline double polyline_metric_length(const ccgeo::SampledCurve& curve,
                                     const ccgeo::Metric& m) {
  double len = 0.0;
  for (size_t i = 0; i + 1 < curve.samples.size(); ++i) {
    const auto& p0 = curve.samples[i].p;
    const auto& p1 = curve.samples[i + 1].p;
    const double xm = 0.5 * (std::fabs(p0.x) + std::fabs(p1.x));
    const double fv = m.f.value(xm);
    const double gv = m.g.value(xm);
    const double dx = p1.x - p0.x;
    const double dy = p1.y - p0.y;
    const double dz = p1.z - p0.z;
    double s = dx * dx;
    if (dy != 0.0) s += dy * dy / (fv * fv);
    if (dz != 0.0) s += dz * dz / (gv * gv);
    len += std::sqrt(s);
  }
  return len;
}

}  // namespace oracles
