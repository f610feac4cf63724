#pragma once

#include <functional>
#include <optional>

#include "ccgeo/geodesics.hpp"

// Shared internals of the geodesic chart. Not installed.
namespace ccgeo::detail {

// Evaluations stay below x* by this relative margin.
inline constexpr double kTurningGuard = 1e-12;

// Switch integrands to the u = sqrt(x* - t) substitution beyond this fraction
// of the turning point.
inline constexpr double kNearTurningFraction = 0.999;

// integral over [a,b] of weight(t) / D(t)^(p/2), p in {1,3}. When a turning
// point is supplied and b is close to it, substitutes t = x* - u^2 so the
// integrand stays bounded (p=1) or mildly graded (p=3).
QuadResult integrate_weighted(const std::function<double(double)>& weight,
                              const GeodesicParams& params, const Metric& m,
                              double a, double b,
                              const std::optional<double>& xstar, int denom_power,
                              const QuadConfig& cfg);

// Throws std::domain_error when x_end violates the chart (negative, beyond
// the profile domain, or at/after the turning point).
void check_chart_abscissa(double x_end, const Metric& m,
                          const std::optional<double>& xstar, const char* what);

}  // namespace ccgeo::detail
