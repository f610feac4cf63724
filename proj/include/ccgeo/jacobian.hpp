#pragma once

#include "ccgeo/geodesics.hpp"

namespace ccgeo {

/// The three cumulative integrals against D^{-3/2}:
///   A = int f^2, B = int g^2, C = int f^2 g^2 over [0, x].
/// Always nonnegative, with C^2 <= A*B (Cauchy-Schwarz).
struct AbcIntegrals {
  double A = 0;
  double B = 0;
  double C = 0;
};

/// Partials of (x, y, z) with respect to (r, lambda, mu); row i is the
/// coordinate, column j the chart parameter, in those orders.
struct JacobianMatrix {
  double m[3][3] = {};
  double det() const;
};

AbcIntegrals abc_integrals(const GeodesicParams& params, const Metric& m,
                           double x, const QuadConfig& cfg = {});

/// The nine closed-form entries:
///   dx/dr = sqrt(D)        dx/dl = -l sqrt(D) A        dx/dm = -m sqrt(D) B
///   dy/dr = l f^2          dy/dl = (1 - l^2 f^2)A - m^2 C
///                          dy/dm = -l m f^2 B + l m C
///   dz/dr = m g^2          dz/dl = -l m g^2 A + l m C
///                          dz/dm = (1 - m^2 g^2)B - l^2 C
/// with f, g evaluated at x.
JacobianMatrix jacobian_partials(const GeodesicParams& params, const Metric& m,
                                 double x, const QuadConfig& cfg = {});

/// Closed-form determinant sqrt(D) * (A B - lambda^2 A C - mu^2 B C).
double jacobian_det(const GeodesicParams& params, const Metric& m, double x,
                    const QuadConfig& cfg = {});

/// Inverts the monotone arc length r(x) = int_0^x D^{-1/2}; tolerance 1e-12
/// in x. Throws std::domain_error when r lies beyond the chart.
double x_of_r(const GeodesicParams& params, const Metric& m, double r,
              const QuadConfig& cfg = {});

/// Central finite differences of the forward map (r, lambda, mu) -> (x, y, z)
/// built from x_of_r and the chart integrals, evaluated at the point with
/// abscissa x. Validation oracle for the closed-form partials; it never reads
/// them. Steps are 1e-5 relative.
JacobianMatrix jacobian_fd(const GeodesicParams& params, const Metric& m,
                           double x, const QuadConfig& cfg = {});

}  // namespace ccgeo
