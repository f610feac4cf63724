#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ccgeo/profiles.hpp"
#include "ccgeo/quadrature.hpp"

namespace ccgeo {

/// Diagonal metric dt^2 = dx^2 + dy^2/f(x)^2 + dz^2/g(x)^2 on the slab
/// 0 <= x <= domain_max, extended evenly to x < 0.
struct Metric {
  Profile f;
  Profile g;
  double domain_max() const { return std::min(f.domain_max(), g.domain_max()); }
};

struct Point3 {
  double x = 0, y = 0, z = 0;
};

struct Point2 {
  double x = 0, y = 0;
};

/// Conserved momenta identifying one geodesic through the origin. lambda and
/// mu are stored signed (magnitude times the y / z branch sign); sign_x
/// mirrors the curve into x < 0. The canonical positive-octant geodesic has
/// all signs +1.
struct GeodesicParams {
  double lambda = 0.0;
  double mu = 0.0;
  int sign_x = 1;
  int sign_y = 1;
  int sign_z = 1;

  static GeodesicParams from_magnitudes(double lambda_mag, double mu_mag,
                                        int sx, int sy, int sz);
};

/// One point of a geodesic: signed ambient coordinates plus the arc length r
/// from the origin along the curve.
struct GeodesicPoint {
  GeodesicParams params;
  double x = 0;
  double r = 0;
  double y = 0;
  double z = 0;
};

struct CurveSample {
  double t = 0;
  Point3 p;
};

/// Polyline samples of a curve, parameter strictly increasing.
struct SampledCurve {
  std::vector<CurveSample> samples;
};

/// Target cannot be reached by any pre-turning-point geodesic from the origin.
struct UnreachableTargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iteration or quadrature failed to meet its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShootResult {
  GeodesicParams params;
  double r = 0;
  int iterations = 0;
};

/// D(x) = 1 - lambda^2 f(x)^2 - mu^2 g(x)^2, the square-root denominator of
/// the geodesic integrands.
double denominator(const GeodesicParams& params, const Metric& m, double x);

/// Smallest x* in (0, x_max] with D(x*) = 0, or nullopt when D stays positive
/// (always the case for lambda = mu = 0). D is nonincreasing for monotone
/// profiles, so a sign check at x_max settles existence.
std::optional<double> turning_point(const GeodesicParams& params, const Metric& m,
                                    double x_max);

/// (r, y, z) at abscissa x_end via the three chart quadratures. Requires
/// 0 <= x_end strictly below the turning point; near the turning point the
/// integrands switch to the square-root substitution automatically.
GeodesicPoint geodesic_map(const GeodesicParams& params, const Metric& m,
                           double x_end, const QuadConfig& cfg = {});

/// n samples of the geodesic up to abscissa x_end, parameterized by arc
/// length and graded toward the turning point when one exists.
SampledCurve geodesic_curve(const GeodesicParams& params, const Metric& m,
                            double x_end, int n, const QuadConfig& cfg = {});

/// Inverts the chart: finds momenta (lambda, mu) whose geodesic passes
/// through the target, and returns the arc length r as the subunit distance.
/// Damped Newton on the (y, z) residual with a finite-difference Jacobian,
/// falling back to coordinate-wise bracketed solves (y is monotone in lambda
/// at fixed mu, and z in mu at fixed lambda). The absolute (y, z) residual is
/// driven below residual_tol; the arc length inherits an extra factor of the
/// momenta from that residual.
ShootResult shoot(const Point3& target, const Metric& m, const QuadConfig& cfg = {},
                  double residual_tol = 1e-8);

/// Subunit distance from the origin (arc length of the shot geodesic).
double distance(const Point3& target, const Metric& m, const QuadConfig& cfg = {},
                double residual_tol = 1e-8);

/// Planar specialization: distance in the two-dimensional metric
/// dx^2 + dy^2/f(x)^2 (the mu = 0 chart with a single profile).
double distance_2d(const Profile& f, double x, double y, const QuadConfig& cfg = {},
                   double residual_tol = 1e-8);

/// True iff every consecutive-difference velocity of the polyline satisfies
/// dx^2 + dy^2/f^2 + dz^2/g^2 <= (1+tol) dt^2, profiles evaluated at the
/// segment's left endpoint. Motion in a direction whose profile vanishes
/// fails the test.
bool is_subunit(const SampledCurve& curve, const Metric& m, double tol);

}  // namespace ccgeo
