#include "ccgeo/geodesics.hpp"

#include <cmath>
#include <string>

#include "chart_internal.hpp"

namespace ccgeo {

namespace detail {

void check_chart_abscissa(double x_end, const Metric& m,
                          const std::optional<double>& xstar, const char* what) {
  if (!(x_end >= 0.0))
    throw std::domain_error(std::string(what) + ": abscissa must be >= 0");
  if (x_end > m.domain_max())
    throw std::domain_error(std::string(what) + ": abscissa beyond profile domain");
  if (xstar && x_end > *xstar * (1.0 - kTurningGuard))
    throw std::domain_error(std::string(what) +
                            ": abscissa at or beyond the turning point x* = " +
                            std::to_string(*xstar));
}

QuadResult integrate_weighted(const std::function<double(double)>& weight,
                              const GeodesicParams& params, const Metric& m,
                              double a, double b,
                              const std::optional<double>& xstar, int denom_power,
                              const QuadConfig& cfg) {
  const bool transform = xstar && b > kNearTurningFraction * (*xstar);
  if (!transform) {
    auto fn = [&](double t) {
      const double dt = denominator(params, m, t);
      const double root = std::sqrt(dt);
      const double den = denom_power == 1 ? root : dt * root;
      return weight(t) / den;
    };
    return integrate(fn, a, b, cfg);
  }
  const double xs = *xstar;
  auto fn = [&](double u) {
    const double t = xs - u * u;
    const double dt = denominator(params, m, t);
    const double root = std::sqrt(dt);
    const double den = denom_power == 1 ? root : dt * root;
    return 2.0 * u * weight(t) / den;
  };
  return integrate(fn, std::sqrt(xs - b), std::sqrt(xs - a), cfg);
}

}  // namespace detail

namespace {

double sq(double v) { return v * v; }

// Components of the chart map at fixed momenta; r is only computed on demand.
struct ChartEval {
  double y = 0;
  double z = 0;
};

ChartEval eval_yz(const GeodesicParams& params, const Metric& m, double x_end,
                  const std::optional<double>& xstar, const QuadConfig& cfg) {
  ChartEval out;
  if (x_end == 0.0) return out;
  if (params.lambda != 0.0) {
    auto wy = [&](double t) {
      const double ft = m.f.value(t);
      return params.lambda * ft * ft;
    };
    const QuadResult qy =
        detail::integrate_weighted(wy, params, m, 0.0, x_end, xstar, 1, cfg);
    if (!qy.converged)
      throw ConvergenceError("geodesic quadrature did not meet tolerance (y)");
    out.y = qy.value;
  }
  if (params.mu != 0.0) {
    auto wz = [&](double t) {
      const double gt = m.g.value(t);
      return params.mu * gt * gt;
    };
    const QuadResult qz =
        detail::integrate_weighted(wz, params, m, 0.0, x_end, xstar, 1, cfg);
    if (!qz.converged)
      throw ConvergenceError("geodesic quadrature did not meet tolerance (z)");
    out.z = qz.value;
  }
  return out;
}

double eval_r(const GeodesicParams& params, const Metric& m, double x_end,
              const std::optional<double>& xstar, const QuadConfig& cfg) {
  if (x_end == 0.0) return 0.0;
  auto one = [](double) { return 1.0; };
  const QuadResult qr =
      detail::integrate_weighted(one, params, m, 0.0, x_end, xstar, 1, cfg);
  if (!qr.converged)
    throw ConvergenceError("geodesic quadrature did not meet tolerance (r)");
  return qr.value;
}

}  // namespace

GeodesicParams GeodesicParams::from_magnitudes(double lambda_mag, double mu_mag,
                                               int sx, int sy, int sz) {
  if (lambda_mag < 0.0 || mu_mag < 0.0)
    throw std::invalid_argument("GeodesicParams: magnitudes must be >= 0");
  auto sign_ok = [](int s) { return s == 1 || s == -1; };
  if (!sign_ok(sx) || !sign_ok(sy) || !sign_ok(sz))
    throw std::invalid_argument("GeodesicParams: signs must be +1 or -1");
  GeodesicParams p;
  p.lambda = sy * lambda_mag;
  p.mu = sz * mu_mag;
  p.sign_x = sx;
  p.sign_y = sy;
  p.sign_z = sz;
  return p;
}

double denominator(const GeodesicParams& params, const Metric& m, double x) {
  const double lf = params.lambda * m.f.value(x);
  const double mg = params.mu * m.g.value(x);
  return 1.0 - lf * lf - mg * mg;
}

std::optional<double> turning_point(const GeodesicParams& params, const Metric& m,
                                    double x_max) {
  if (params.lambda == 0.0 && params.mu == 0.0) return std::nullopt;
  if (!(x_max > 0.0) || x_max > m.domain_max())
    throw std::domain_error("turning_point: x_max outside (0, domain_max]");
  auto dfun = [&](double x) { return denominator(params, m, x); };
  if (dfun(x_max) > 0.0) return std::nullopt;
  return find_root(dfun, 0.0, x_max, 1e-14);
}

GeodesicPoint geodesic_map(const GeodesicParams& params, const Metric& m,
                           double x_end, const QuadConfig& cfg) {
  const auto xstar =
      (params.lambda == 0.0 && params.mu == 0.0)
          ? std::nullopt
          : turning_point(params, m, m.domain_max());
  detail::check_chart_abscissa(x_end, m, xstar, "geodesic_map");

  GeodesicPoint out;
  out.params = params;
  out.x = params.sign_x < 0 ? -x_end : x_end;
  out.r = eval_r(params, m, x_end, xstar, cfg);
  const ChartEval yz = eval_yz(params, m, x_end, xstar, cfg);
  out.y = yz.y;
  out.z = yz.z;
  return out;
}

SampledCurve geodesic_curve(const GeodesicParams& params, const Metric& m,
                            double x_end, int n, const QuadConfig& cfg) {
  if (n < 2) throw std::invalid_argument("geodesic_curve: need n >= 2");
  if (!(x_end > 0.0))
    throw std::invalid_argument("geodesic_curve: need x_end > 0");
  const auto xstar = turning_point(params, m, m.domain_max());
  detail::check_chart_abscissa(x_end, m, xstar, "geodesic_curve");

  // Abscissae graded toward the turning point: uniform in v = sqrt(x* - x).
  std::vector<double> xs(n);
  if (xstar) {
    const double v0 = std::sqrt(*xstar);
    const double v1 = std::sqrt(*xstar - x_end);
    for (int i = 0; i < n; ++i) {
      const double v = v0 + (v1 - v0) * i / (n - 1);
      xs[i] = *xstar - v * v;
    }
  } else {
    for (int i = 0; i < n; ++i) xs[i] = x_end * i / (n - 1);
  }
  xs.front() = 0.0;
  xs.back() = x_end;

  auto wy = [&](double t) {
    const double ft = m.f.value(t);
    return params.lambda * ft * ft;
  };
  auto wz = [&](double t) {
    const double gt = m.g.value(t);
    return params.mu * gt * gt;
  };
  auto one = [](double) { return 1.0; };

  SampledCurve curve;
  curve.samples.reserve(n);
  double r = 0.0, y = 0.0, z = 0.0;
  curve.samples.push_back({0.0, Point3{0.0, 0.0, 0.0}});
  for (int i = 1; i < n; ++i) {
    const double a = xs[i - 1], b = xs[i];
    r += detail::integrate_weighted(one, params, m, a, b, xstar, 1, cfg).value;
    if (params.lambda != 0.0)
      y += detail::integrate_weighted(wy, params, m, a, b, xstar, 1, cfg).value;
    if (params.mu != 0.0)
      z += detail::integrate_weighted(wz, params, m, a, b, xstar, 1, cfg).value;
    Point3 p;
    p.x = params.sign_x < 0 ? -xs[i] : xs[i];
    p.y = y;
    p.z = z;
    curve.samples.push_back({r, p});
  }
  return curve;
}

namespace {

// Chart inversion state for one target abscissa.
struct Shooter {
  const Metric& m;
  double x_t;
  QuadConfig cfg;
  double fx, gx;
  // Momenta are kept strictly inside the feasible ellipse
  // (lambda fx)^2 + (mu gx)^2 < s_max so the turning point stays beyond x_t.
  static constexpr double kSMax = 1.0 - 1e-8;
  mutable long n_evals = 0;

  Shooter(const Metric& metric, double x_target, const QuadConfig& quad_cfg)
      : m(metric), x_t(x_target), cfg(quad_cfg),
        fx(metric.f.value(x_target)), gx(metric.g.value(x_target)) {}

  double lambda_cap(double mu) const {
    if (fx == 0.0) return 0.0;
    const double rem = kSMax - sq(mu * gx);
    return rem <= 0.0 ? 0.0 : std::sqrt(rem) / fx;
  }
  double mu_cap(double lambda) const {
    if (gx == 0.0) return 0.0;
    const double rem = kSMax - sq(lambda * fx);
    return rem <= 0.0 ? 0.0 : std::sqrt(rem) / gx;
  }

  bool feasible(double lambda, double mu) const {
    return lambda >= 0.0 && mu >= 0.0 && sq(lambda * fx) + sq(mu * gx) < kSMax;
  }

  void clamp(double& lambda, double& mu) const {
    if (!std::isfinite(lambda)) lambda = lambda_cap(0.0) * 0.5;
    if (!std::isfinite(mu)) mu = mu_cap(0.0) * 0.5;
    lambda = std::max(lambda, 0.0);
    mu = std::max(mu, 0.0);
    const double s = sq(lambda * fx) + sq(mu * gx);
    if (s >= kSMax) {
      const double k = std::sqrt(kSMax * (1.0 - 1e-12) / s);
      lambda *= k;
      mu *= k;
    }
  }

  ChartEval yz(double lambda, double mu) const {
    GeodesicParams p;
    p.lambda = lambda;
    p.mu = mu;
    const auto xstar = turning_point(p, m, m.domain_max());
    ++n_evals;
    return eval_yz(p, m, x_t, xstar, cfg);
  }

  double arc_length(double lambda, double mu) const {
    GeodesicParams p;
    p.lambda = lambda;
    p.mu = mu;
    const auto xstar = turning_point(p, m, m.domain_max());
    return eval_r(p, m, x_t, xstar, cfg);
  }
};

// Solves q(v) = 0 for increasing q on [lo, hi] with q(lo) <= 0 <= q(hi),
// stopping on |q| <= q_tol. Secant steps safeguarded by bisection.
double solve_increasing(const std::function<double(double)>& q, double lo,
                        double hi, double q_lo, double q_hi, double q_tol) {
  if (q_lo >= -q_tol) return lo;
  if (q_hi <= q_tol) return hi;
  double v_best = lo, q_best = q_lo;
  for (int iter = 0; iter < 120; ++iter) {
    double v;
    if (iter % 2 == 0 && q_hi > q_lo) {
      v = lo - q_lo * (hi - lo) / (q_hi - q_lo);
      const double span = hi - lo;
      v = std::min(std::max(v, lo + 0.01 * span), hi - 0.01 * span);
    } else {
      v = 0.5 * (lo + hi);
    }
    const double qv = q(v);
    if (std::fabs(qv) < std::fabs(q_best)) {
      v_best = v;
      q_best = qv;
    }
    if (std::fabs(qv) <= q_tol) return v;
    if (qv < 0.0) {
      lo = v;
      q_lo = qv;
    } else {
      hi = v;
      q_hi = qv;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(hi))) break;
  }
  return v_best;
}

}  // namespace

ShootResult shoot(const Point3& target, const Metric& m, const QuadConfig& cfg,
                  double residual_tol) {
  if (!(residual_tol > 0.0))
    throw std::invalid_argument("shoot: residual_tol must be > 0");
  const double tol = residual_tol;
  const int sx = target.x < 0.0 ? -1 : 1;
  const int sy = target.y < 0.0 ? -1 : 1;
  const int sz = target.z < 0.0 ? -1 : 1;
  const double x_t = std::fabs(target.x);
  const double y_t = std::fabs(target.y);
  const double z_t = std::fabs(target.z);

  if (x_t == 0.0) {
    if (y_t <= tol && z_t <= tol) {
      ShootResult res;
      res.params = GeodesicParams::from_magnitudes(0.0, 0.0, sx, sy, sz);
      return res;
    }
    throw std::domain_error("shoot: target abscissa must be nonzero");
  }
  if (x_t > m.domain_max())
    throw std::domain_error("shoot: target abscissa beyond profile domain");

  Shooter sh(m, x_t, cfg);
  if (sh.fx == 0.0 && y_t > tol)
    throw UnreachableTargetError("shoot: profile f vanishes at the target abscissa");
  if (sh.gx == 0.0 && z_t > tol)
    throw UnreachableTargetError("shoot: profile g vanishes at the target abscissa");

  const bool want_y = y_t > tol && sh.fx > 0.0;
  const bool want_z = z_t > tol && sh.gx > 0.0;

  double lambda = 0.0, mu = 0.0;
  int iterations = 0;

  auto solve_lambda_at = [&](double mu_fixed) -> std::optional<double> {
    const double cap = sh.lambda_cap(mu_fixed);
    if (cap <= 0.0) return std::nullopt;
    auto q = [&](double l) { return sh.yz(l, mu_fixed).y - y_t; };
    const double q_hi = q(cap);
    if (q_hi < -0.5 * tol) return std::nullopt;
    return solve_increasing(q, 0.0, cap, -y_t, q_hi, 0.25 * tol);
  };
  auto solve_mu_at = [&](double lambda_fixed) -> std::optional<double> {
    const double cap = sh.mu_cap(lambda_fixed);
    if (cap <= 0.0) return std::nullopt;
    auto q = [&](double mm) { return sh.yz(lambda_fixed, mm).z - z_t; };
    const double q_hi = q(cap);
    if (q_hi < -0.5 * tol) return std::nullopt;
    return solve_increasing(q, 0.0, cap, -z_t, q_hi, 0.25 * tol);
  };

  if (!want_y && !want_z) {
    // straight geodesic along the x-axis
  } else if (want_y && !want_z) {
    auto l = solve_lambda_at(0.0);
    if (!l) throw UnreachableTargetError("shoot: y beyond the chart at this abscissa");
    lambda = *l;
  } else if (!want_y && want_z) {
    auto mm = solve_mu_at(0.0);
    if (!mm) throw UnreachableTargetError("shoot: z beyond the chart at this abscissa");
    mu = *mm;
  } else {
    // 2-D inversion: damped Newton with a forward-difference Jacobian, then a
    // coordinate-wise bracketed fallback riding the monotonicity of y in
    // lambda and z in mu.
    lambda = y_t / (x_t * sh.fx * sh.fx);
    mu = z_t / (x_t * sh.gx * sh.gx);
    {
      // pull the seed well inside the feasible ellipse
      if (!std::isfinite(lambda)) lambda = sh.lambda_cap(0.0) * 0.5;
      if (!std::isfinite(mu)) mu = sh.mu_cap(0.0) * 0.5;
      const double s = sq(lambda * sh.fx) + sq(mu * sh.gx);
      if (s > 0.81) {
        const double k = std::sqrt(0.81 / s);
        lambda *= k;
        mu *= k;
      }
    }

    ChartEval cur = sh.yz(lambda, mu);
    double res_y = cur.y - y_t, res_z = cur.z - z_t;
    double res_norm = std::max(std::fabs(res_y), std::fabs(res_z));
    bool converged = res_norm <= tol;
    bool newton_ok = lambda > 0.0 && mu > 0.0;

    for (int it = 0; it < 30 && !converged && newton_ok; ++it) {
      ++iterations;
      const double hl = 1e-6 * lambda;
      const double hm = 1e-6 * mu;
      const double sl = sh.feasible(lambda + hl, mu) ? 1.0 : -1.0;
      const double sm = sh.feasible(lambda, mu + hm) ? 1.0 : -1.0;
      const ChartEval el = sh.yz(lambda + sl * hl, mu);
      const ChartEval em = sh.yz(lambda, mu + sm * hm);
      const double jyl = (el.y - cur.y) / (sl * hl);
      const double jzl = (el.z - cur.z) / (sl * hl);
      const double jym = (em.y - cur.y) / (sm * hm);
      const double jzm = (em.z - cur.z) / (sm * hm);
      const double det = jyl * jzm - jym * jzl;
      if (det == 0.0 || !std::isfinite(det)) {
        newton_ok = false;
        break;
      }
      const double dl = (-res_y * jzm + res_z * jym) / det;
      const double dm = (-res_z * jyl + res_y * jzl) / det;

      bool accepted = false;
      for (double alpha = 1.0; alpha >= 1.0 / 4096.0; alpha *= 0.5) {
        double cl = lambda + alpha * dl;
        double cm = mu + alpha * dm;
        sh.clamp(cl, cm);
        if (cl <= 0.0 || cm <= 0.0) continue;
        const ChartEval ce = sh.yz(cl, cm);
        const double cn =
            std::max(std::fabs(ce.y - y_t), std::fabs(ce.z - z_t));
        if (cn < res_norm * (1.0 - 1e-4 * alpha)) {
          lambda = cl;
          mu = cm;
          cur = ce;
          res_y = ce.y - y_t;
          res_z = ce.z - z_t;
          res_norm = cn;
          accepted = true;
          break;
        }
      }
      if (!accepted) newton_ok = false;
      converged = res_norm <= tol;
    }

    if (!converged) {
      for (int sweep = 0; sweep < 80 && !converged; ++sweep) {
        ++iterations;
        auto l = solve_lambda_at(mu);
        while (!l && mu > 1e-300) {
          mu *= 0.5;
          l = solve_lambda_at(mu);
        }
        if (!l)
          throw UnreachableTargetError("shoot: y beyond the chart at this abscissa");
        lambda = *l;
        auto mm = solve_mu_at(lambda);
        while (!mm && lambda > 1e-300) {
          lambda *= 0.5;
          mm = solve_mu_at(lambda);
        }
        if (!mm)
          throw UnreachableTargetError("shoot: z beyond the chart at this abscissa");
        mu = *mm;
        const ChartEval ce = sh.yz(lambda, mu);
        converged = std::max(std::fabs(ce.y - y_t), std::fabs(ce.z - z_t)) <= tol;
      }
      if (!converged)
        throw ConvergenceError(
            "shoot: residual not driven below tolerance (target may be outside "
            "the chart)");
    }
  }

  ShootResult res;
  res.params = GeodesicParams::from_magnitudes(lambda, mu, sx, sy, sz);
  res.r = sh.arc_length(lambda, mu);
  res.iterations = iterations;
  return res;
}

double distance(const Point3& target, const Metric& m, const QuadConfig& cfg,
                double residual_tol) {
  return shoot(target, m, cfg, residual_tol).r;
}

double distance_2d(const Profile& f, double x, double y, const QuadConfig& cfg,
                   double residual_tol) {
  const Metric planar{f, f};
  Point3 target;
  target.x = x;
  target.y = y;
  target.z = 0.0;
  return shoot(target, planar, cfg, residual_tol).r;
}

bool is_subunit(const SampledCurve& curve, const Metric& m, double tol) {
  if (curve.samples.size() < 2)
    throw std::invalid_argument("is_subunit: need at least 2 samples");
  for (size_t i = 0; i + 1 < curve.samples.size(); ++i) {
    const CurveSample& s0 = curve.samples[i];
    const CurveSample& s1 = curve.samples[i + 1];
    const double dt = s1.t - s0.t;
    if (!(dt > 0.0))
      throw std::invalid_argument("is_subunit: curve parameter must strictly increase");
    const double dx = s1.p.x - s0.p.x;
    const double dy = s1.p.y - s0.p.y;
    const double dz = s1.p.z - s0.p.z;
    const double xl = std::fabs(s0.p.x);  // even extension for x < 0
    const double fl = m.f.value(xl);
    const double gl = m.g.value(xl);
    double lhs = dx * dx;
    if (dy != 0.0) {
      if (fl == 0.0) return false;
      lhs += sq(dy / fl);
    }
    if (dz != 0.0) {
      if (gl == 0.0) return false;
      lhs += sq(dz / gl);
    }
    if (lhs > (1.0 + tol) * dt * dt) return false;
  }
  return true;
}

}  // namespace ccgeo
