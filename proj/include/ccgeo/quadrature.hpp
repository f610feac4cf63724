#pragma once

#include <functional>

namespace ccgeo {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 40;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long n_evals = 0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (G7,K15) estimate of the integral of fn over [a,b].
/// Requires a <= b and a valid config. If the tolerance cannot be met within
/// max_depth bisections the best estimate is returned with converged = false.
QuadResult integrate(const std::function<double(double)>& fn, double a,
                     double b, const QuadConfig& cfg = {});

/// Integral of fn_regular(t)/sqrt(b - t) over [a,b], where fn_regular is
/// bounded near b. The substitution t = b - u^2 removes the singularity.
QuadResult integrate_singular_sqrt(const std::function<double(double)>& fn_regular,
                                   double a, double b, const QuadConfig& cfg = {});

/// Root of fn on a bracketing interval [lo,hi] with fn(lo)*fn(hi) <= 0.
/// Brent's method: bisection with secant / inverse-quadratic acceleration.
/// Throws std::invalid_argument when the endpoints do not bracket a root.
double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 double x_tol = 1e-12);

}  // namespace ccgeo
