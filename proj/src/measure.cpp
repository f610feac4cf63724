#include "ccgeo/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chart_internal.hpp"

namespace ccgeo {

namespace {

double sq(double v) { return v * v; }

void check_radius(const Metric& m, double R, const char* what) {
  if (!(R > 0.0)) throw std::domain_error(std::string(what) + ": R must be > 0");
  if (R > m.domain_max())
    throw std::domain_error(std::string(what) + ": R beyond profile domain");
}

}  // namespace

double upper_bound(const Metric& m, double R) {
  check_radius(m, R, "upper_bound");
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  if (!(fR > 0.0) || !(gR > 0.0))
    throw std::domain_error("upper_bound: profiles must be positive at R");
  const double df = m.f.log_deriv_mag(R);
  const double dg = m.g.log_deriv_mag(R);
  return fR * gR * std::min(1.0 / (df * df * dg), 1.0 / (df * dg * dg));
}

double lower_bound(const Metric& m, double R) {
  check_radius(m, R, "lower_bound");
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  if (!(fR > 0.0) || !(gR > 0.0))
    throw std::domain_error("lower_bound: profiles must be positive at R");
  const double worst = std::max(m.f.log_deriv_mag(R), m.g.log_deriv_mag(R));
  return fR * gR / (worst * worst * worst);
}

double lower_bound_exact_integral(const Metric& m, double R, const QuadConfig& cfg) {
  if (R == 0.0) return 0.0;
  check_radius(m, R, "lower_bound_exact_integral");
  auto fn = [&](double x) {
    return 0.5 * sq(R - x) * m.f.value(x) * m.g.value(x);
  };
  const QuadResult q = integrate(fn, 0.0, R, cfg);
  if (!q.converged)
    throw ConvergenceError("lower_bound_exact_integral: quadrature tolerance not met");
  return q.value;
}

SampledCurve staircase_curve(const StaircaseParams& sp, const Metric& m, int n) {
  if (!(sp.R > 0.0)) throw std::invalid_argument("staircase_curve: R must be > 0");
  if (!(0.0 <= sp.a && sp.a <= sp.b && sp.b <= sp.R))
    throw std::invalid_argument("staircase_curve: need 0 <= a <= b <= R");

  const double fa = m.f.value(sp.a);
  const double ga = m.g.value(sp.a);
  auto phi = [&](double t) -> Point3 {
    Point3 p;
    if (t <= sp.a) {
      p.x = t;
    } else if (t <= sp.b) {
      p.x = sp.a;
      p.y = (t - sp.a) * fa;
    } else {
      p.x = sp.a;
      p.y = (sp.b - sp.a) * fa;
      p.z = (t - sp.b) * ga;
    }
    return p;
  };

  // Segment-proportional sample allocation with the corners t = a, b exact,
  // so velocity estimates never straddle a corner.
  struct Seg {
    double t0, t1;
  };
  std::vector<Seg> segs;
  if (sp.a > 0.0) segs.push_back({0.0, sp.a});
  if (sp.b > sp.a) segs.push_back({sp.a, sp.b});
  if (sp.R > sp.b) segs.push_back({sp.b, sp.R});
  if (segs.empty()) throw std::invalid_argument("staircase_curve: empty curve");
  const int min_n = static_cast<int>(segs.size()) + 1;
  if (n < min_n)
    throw std::invalid_argument("staircase_curve: n too small to carry the corners");

  std::vector<int> counts(segs.size(), 1);
  int used = static_cast<int>(segs.size());
  for (size_t i = 0; i < segs.size(); ++i) {
    const int extra =
        static_cast<int>(std::floor((n - 1) * (segs[i].t1 - segs[i].t0) / sp.R)) - 1;
    if (extra > 0) {
      counts[i] += extra;
      used += extra;
    }
  }
  size_t widest = 0;
  for (size_t i = 1; i < segs.size(); ++i)
    if (segs[i].t1 - segs[i].t0 > segs[widest].t1 - segs[widest].t0) widest = i;
  counts[widest] += (n - 1) - used;

  SampledCurve curve;
  curve.samples.reserve(n);
  curve.samples.push_back({0.0, phi(0.0)});
  for (size_t i = 0; i < segs.size(); ++i) {
    for (int k = 1; k <= counts[i]; ++k) {
      // segment ends land exactly on the corners
      const double t = k == counts[i]
                           ? segs[i].t1
                           : segs[i].t0 + (segs[i].t1 - segs[i].t0) * k / counts[i];
      curve.samples.push_back({t, phi(t)});
    }
  }
  return curve;
}

double staircase_reach(const Metric& m, double x0, double y0, double R) {
  if (!(R > 0.0)) throw std::domain_error("staircase_reach: R must be > 0");
  if (!(x0 >= 0.0 && x0 <= R))
    throw std::domain_error("staircase_reach: x0 outside [0, R]");
  if (!(y0 >= 0.0)) throw std::domain_error("staircase_reach: y0 must be >= 0");
  const double fa = m.f.value(x0);
  const double ga = m.g.value(x0);
  const double budget = (R - x0) * fa;
  if (y0 > budget * (1.0 + 1e-12))
    throw std::domain_error("staircase_reach: y0 exceeds (R - x0) f(x0)");
  if (fa == 0.0) return (R - x0) * ga;  // y0 == 0 here, no y-leg
  return std::max(0.0, (R - x0 - y0 / fa) * ga);
}

namespace {

// --- pushforward machinery -------------------------------------------------

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& xs,
                    std::vector<double>& ws) {
  xs.assign(n, 0.0);
  ws.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = -p0 / dp;
      x += dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    xs[i] = a + 0.5 * (b - a) * (1.0 - x);
    xs[n - 1 - i] = a + 0.5 * (b - a) * (1.0 + x);
    ws[i] = ws[n - 1 - i] = 0.5 * (b - a) * w;
  }
}

struct MeshEval {
  double qa, qb, qc, qr;  // f^2/D^{3/2}, g^2/D^{3/2}, f^2 g^2/D^{3/2}, 1/sqrt(D)
};

// Contribution of one geodesic family member to the pushforward integral:
// W(lam, mu) = int |A B - lam^2 A C - mu^2 B C| dx over x in (0, x_hi), with
// the integral cut where the cumulative arc length reaches R. A, B, C, r are
// accumulated along the same mesh (Simpson), graded toward the turning point.
double chart_weight(const Metric& m, double lam, double mu, double R,
                    std::optional<double> xstar, int n_mesh) {
  GeodesicParams p;
  p.lambda = lam;
  p.mu = mu;

  double x_hi = std::min(R, m.domain_max());
  if (xstar) x_hi = std::min(x_hi, *xstar * (1.0 - detail::kTurningGuard));
  if (!(x_hi > 0.0)) return 0.0;

  const bool graded = xstar.has_value();
  std::vector<double> xs(n_mesh + 1);
  double v_hi = 0.0, v_lo = 0.0;
  if (graded) {
    v_hi = 0.5 * std::log(*xstar);          // u = sqrt(x* - x), x = 0
    v_lo = 0.5 * std::log(*xstar - x_hi);   // x = x_hi
    for (int k = 0; k <= n_mesh; ++k) {
      const double v = v_hi + (v_lo - v_hi) * k / n_mesh;
      xs[k] = *xstar - std::exp(2.0 * v);
    }
  } else {
    for (int k = 0; k <= n_mesh; ++k) xs[k] = x_hi * k / n_mesh;
  }
  xs.front() = 0.0;
  xs.back() = x_hi;

  auto eval = [&](double x) -> MeshEval {
    const double fv = m.f.value(x);
    const double gv = m.g.value(x);
    const double d = 1.0 - sq(lam * fv) - sq(mu * gv);
    const double root = std::sqrt(d);
    const double d32 = d * root;
    MeshEval e;
    e.qa = fv * fv / d32;
    e.qb = gv * gv / d32;
    e.qc = fv * fv * gv * gv / d32;
    e.qr = 1.0 / root;
    return e;
  };
  // Simpson weight of a point in the mesh variable (v when graded, x else).
  auto scale = [&](double x) { return graded ? 2.0 * (*xstar - x) : 1.0; };

  double A = 0.0, B = 0.0, C = 0.0, r = 0.0, W = 0.0;
  double br_prev = 0.0;  // bracket at x = 0 vanishes with A, B, C
  MeshEval e_prev = eval(xs[0]);
  double s_prev = scale(xs[0]);
  for (int k = 0; k < n_mesh; ++k) {
    const double xa = xs[k], xb = xs[k + 1];
    double h, xm;
    if (graded) {
      const double va = 0.5 * std::log(*xstar - xa);
      const double vb = 0.5 * std::log(*xstar - xb);
      h = va - vb;
      xm = *xstar - std::exp(va + vb);  // midpoint in v
    } else {
      h = xb - xa;
      xm = 0.5 * (xa + xb);
    }
    const MeshEval e_mid = eval(xm);
    const MeshEval e_next = eval(xb);
    const double s_mid = scale(xm);
    const double s_next = scale(xb);

    const double c0 = h / 6.0;
    const double dA = c0 * (e_prev.qa * s_prev + 4.0 * e_mid.qa * s_mid + e_next.qa * s_next);
    const double dB = c0 * (e_prev.qb * s_prev + 4.0 * e_mid.qb * s_mid + e_next.qb * s_next);
    const double dC = c0 * (e_prev.qc * s_prev + 4.0 * e_mid.qc * s_mid + e_next.qc * s_next);
    const double dr = c0 * (e_prev.qr * s_prev + 4.0 * e_mid.qr * s_mid + e_next.qr * s_next);
    A += dA;
    B += dB;
    C += dC;

    const double br =
        std::fabs(A * B - lam * lam * A * C - mu * mu * B * C);
    // trapezoid in the mesh variable on |bracket| * scale
    const double dW = 0.5 * h * (br_prev * s_prev + br * s_next);
    if (r + dr >= R) {
      const double theta = dr > 0.0 ? (R - r) / dr : 0.0;
      W += theta * dW;
      return W;
    }
    r += dr;
    W += dW;
    br_prev = br;
    e_prev = e_next;
    s_prev = s_next;
  }
  return W;
}

// Endpoint (y, z) of the positive-octant geodesic at arc length min(R, r*),
// by one cumulative Simpson march over the same graded mesh chart_weight uses.
std::pair<double, double> chart_endpoint_yz(const Metric& m, double lam, double mu,
                                            double R, std::optional<double> xstar,
                                            int n_mesh) {
  double x_hi = std::min(R, m.domain_max());
  if (xstar) x_hi = std::min(x_hi, *xstar * (1.0 - detail::kTurningGuard));
  if (!(x_hi > 0.0)) return {0.0, 0.0};

  const bool graded = xstar.has_value();
  auto node = [&](int k) {
    if (!graded) return x_hi * k / n_mesh;
    const double v_hi = 0.5 * std::log(*xstar);
    const double v_lo = 0.5 * std::log(*xstar - x_hi);
    const double v = v_hi + (v_lo - v_hi) * k / n_mesh;
    return *xstar - std::exp(2.0 * v);
  };
  auto rate = [&](double x) {
    const double fv = m.f.value(x);
    const double gv = m.g.value(x);
    const double d = 1.0 - sq(lam * fv) - sq(mu * gv);
    const double root = std::sqrt(d);
    return std::array<double, 3>{1.0 / root, lam * fv * fv / root,
                                 mu * gv * gv / root};
  };
  auto scale = [&](double x) { return graded ? 2.0 * (*xstar - x) : 1.0; };

  double r = 0.0, y = 0.0, z = 0.0;
  double xa = 0.0;
  auto ea = rate(xa);
  double sa = scale(xa);
  for (int k = 1; k <= n_mesh; ++k) {
    const double xb = k == n_mesh ? x_hi : node(k);
    double h, xm;
    if (graded) {
      const double va = 0.5 * std::log(*xstar - xa);
      const double vb = 0.5 * std::log(*xstar - xb);
      h = va - vb;
      xm = *xstar - std::exp(va + vb);
    } else {
      h = xb - xa;
      xm = 0.5 * (xa + xb);
    }
    const auto em = rate(xm);
    const auto eb = rate(xb);
    const double sm = scale(xm), sb = scale(xb);
    const double c0 = h / 6.0;
    const double dr = c0 * (ea[0] * sa + 4.0 * em[0] * sm + eb[0] * sb);
    const double dy = c0 * (ea[1] * sa + 4.0 * em[1] * sm + eb[1] * sb);
    const double dz = c0 * (ea[2] * sa + 4.0 * em[2] * sm + eb[2] * sb);
    if (r + dr >= R) {
      const double theta = dr > 0.0 ? (R - r) / dr : 0.0;
      return {y + theta * dy, z + theta * dz};
    }
    r += dr;
    y += dy;
    z += dz;
    xa = xb;
    ea = eb;
    sa = sb;
  }
  return {y, z};
}

double tail_cutoff_abscissa(const Metric& m, double R) {
  const double target = 1e-10 * m.f.value(R) * m.g.value(R);
  auto h = [&](double x) { return m.f.value(x) * m.g.value(x) - target; };
  double lo = R;
  for (int i = 0; i < 120 && h(lo) > 0.0; ++i) lo *= 0.5;
  if (h(lo) > 0.0) return lo;  // profiles barely decay; integrate from there
  return find_root(h, lo, R, 1e-12 * R);
}

double pushforward_octant(const Metric& m, double R, int n_s, int n_alpha,
                          int n_tau, int n_mesh) {
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  const double half_pi = 0.5 * std::numbers::pi;

  std::vector<double> sx, sw, ax, aw;
  gauss_legendre(n_s, 0.0, 1.0, sx, sw);
  gauss_legendre(n_alpha, 0.0, half_pi, ax, aw);

  // Region I: momenta whose turning point lies at or beyond R, i.e. the
  // quarter-ellipse (lam fR)^2 + (mu gR)^2 <= 1; full r-range (0, R).
  double acc = 0.0;
  for (int i = 0; i < n_s; ++i) {
    for (int j = 0; j < n_alpha; ++j) {
      const double lam = sx[i] * std::cos(ax[j]) / fR;
      const double mu = sx[i] * std::sin(ax[j]) / gR;
      GeodesicParams p;
      p.lambda = lam;
      p.mu = mu;
      const auto xstar = turning_point(p, m, m.domain_max());
      const double w = chart_weight(m, lam, mu, R, xstar, n_mesh);
      acc += sw[i] * aw[j] * w * (sx[i] / (fR * gR));
    }
  }

  // Region II: turning point x~ in [xmin, R); coordinates (x~, alpha) with
  // lam = cos(a)/f(x~), mu = sin(a)/g(x~). The tail below xmin is dropped
  // (relative cutoff 1e-10 on f g).
  const double xmin = tail_cutoff_abscissa(m, R);
  if (xmin < R) {
    std::vector<double> tx, tw;
    gauss_legendre(n_tau, 0.0, 1.0, tx, tw);
    const double L = std::log(R / xmin);
    for (int i = 0; i < n_tau; ++i) {
      const double xt = xmin * std::exp(tx[i] * L);
      const double fxt = m.f.value(xt);
      const double gxt = m.g.value(xt);
      if (!(fxt > 0.0) || !(gxt > 0.0)) continue;
      const double fpx = m.f.deriv(xt);
      const double gpx = m.g.deriv(xt);
      for (int j = 0; j < n_alpha; ++j) {
        const double ca = std::cos(ax[j]);
        const double sa = std::sin(ax[j]);
        const double lam = ca / fxt;
        const double mu = sa / gxt;
        const double jac =
            ca * ca * fpx / (fxt * fxt * gxt) + sa * sa * gpx / (fxt * gxt * gxt);
        const double w = chart_weight(m, lam, mu, R, xt, n_mesh);
        acc += tw[i] * aw[j] * w * jac * (xt * L);
      }
    }
  }
  return acc;
}

VolumeEstimate pushforward_volume(const Metric& m, double R) {
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  if (!(fR > 0.0) || !(gR > 0.0)) return {0.0, 0.0};  // y/z extent underflows

  const double full = 8.0 * pushforward_octant(m, R, 32, 24, 32, 800);
  const double half = 8.0 * pushforward_octant(m, R, 16, 12, 16, 400);
  VolumeEstimate out;
  out.volume = full;
  out.err = std::fabs(full - half);
  return out;
}

// Tight bounding box of the chart ball: scans endpoint coordinates over both
// momentum regions. Coordinates are monotone along each geodesic, so the
// extremes sit at arc length min(R, r*).
std::pair<double, double> chart_extent(const Metric& m, double R) {
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  const int n_nodes = 14, n_mesh = 300;
  const double half_pi = 0.5 * std::numbers::pi;
  double ymax = 0.0, zmax = 0.0;
  auto visit = [&](double lam, double mu, std::optional<double> xstar) {
    const auto [y, z] = chart_endpoint_yz(m, lam, mu, R, xstar, n_mesh);
    ymax = std::max(ymax, y);
    zmax = std::max(zmax, z);
  };
  for (int i = 1; i <= n_nodes; ++i) {
    const double s = (i - 0.25) / n_nodes;
    for (int j = 0; j <= n_nodes; ++j) {
      const double alpha = half_pi * j / n_nodes;
      const double lam = s * std::cos(alpha) / fR;
      const double mu = s * std::sin(alpha) / gR;
      GeodesicParams p;
      p.lambda = lam;
      p.mu = mu;
      visit(lam, mu, turning_point(p, m, m.domain_max()));
    }
  }
  const double xmin = tail_cutoff_abscissa(m, R);
  if (xmin < R) {
    const double L = std::log(R / xmin);
    for (int i = 0; i <= n_nodes; ++i) {
      const double xt = xmin * std::exp(L * i / n_nodes);
      const double fxt = m.f.value(xt);
      const double gxt = m.g.value(xt);
      if (!(fxt > 0.0) || !(gxt > 0.0)) continue;
      for (int j = 0; j <= n_nodes; ++j) {
        const double alpha = half_pi * j / n_nodes;
        visit(std::cos(alpha) / fxt, std::sin(alpha) / gxt, xt);
      }
    }
  }
  return {ymax, zmax};
}

VolumeEstimate grid_volume(const Metric& m, double R, int n, const QuadConfig& cfg) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("ball_volume: grid_n must be even and >= 2");
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  if (!(fR > 0.0) || !(gR > 0.0)) return {0.0, 0.0};

  // Bounding box |x| <= R, |y| <= ymax, |z| <= zmax around the chart ball;
  // one octant by symmetry.
  const auto [ybox, zbox] = chart_extent(m, R);
  if (!(ybox > 0.0) || !(zbox > 0.0)) return {0.0, 0.0};
  const int nh = n / 2;
  const double hx = R / nh;
  const double hy = 1.02 * ybox / nh;
  const double hz = 1.02 * zbox / nh;
  std::vector<unsigned char> inside(static_cast<size_t>(nh) * nh * nh, 0);
  auto idx = [nh](int i, int j, int k) {
    return (static_cast<size_t>(i) * nh + j) * nh + k;
  };

  long count = 0;
  for (int i = 0; i < nh; ++i) {
    for (int j = 0; j < nh; ++j) {
      for (int k = 0; k < nh; ++k) {
        Point3 center;
        center.x = (i + 0.5) * hx;
        center.y = (j + 0.5) * hy;
        center.z = (k + 0.5) * hz;
        bool in = false;
        try {
          in = distance(center, m, cfg) < R;
        } catch (const UnreachableTargetError&) {
        } catch (const ConvergenceError&) {
        }
        inside[idx(i, j, k)] = in ? 1 : 0;
        if (in) ++count;
      }
    }
  }

  long boundary = 0;
  for (int i = 0; i < nh; ++i) {
    for (int j = 0; j < nh; ++j) {
      for (int k = 0; k < nh; ++k) {
        const unsigned char c = inside[idx(i, j, k)];
        // +x/+y/+z box faces count as outside; the mirrored faces at the
        // coordinate planes repeat the same octant and never flip.
        const unsigned char xp = i + 1 < nh ? inside[idx(i + 1, j, k)] : 0;
        const unsigned char yp = j + 1 < nh ? inside[idx(i, j + 1, k)] : 0;
        const unsigned char zp = k + 1 < nh ? inside[idx(i, j, k + 1)] : 0;
        if (c != xp || c != yp || c != zp) ++boundary;
      }
    }
  }

  VolumeEstimate out;
  out.volume = 8.0 * count * hx * hy * hz;
  out.err = 8.0 * 0.5 * boundary * hx * hy * hz;
  return out;
}

}  // namespace

VolumeEstimate ball_volume(const Metric& m, double R, VolumeMethod method,
                           const QuadConfig& cfg, int grid_n) {
  check_radius(m, R, "ball_volume");
  switch (method) {
    case VolumeMethod::kPushforward:
      return pushforward_volume(m, R);
    case VolumeMethod::kGrid:
      return grid_volume(m, R, grid_n, cfg);
  }
  throw std::invalid_argument("ball_volume: unknown method");
}

std::vector<BallReport> bound_ratio_scan(const Metric& m,
                                         const std::vector<double>& R_list,
                                         const QuadConfig& cfg) {
  std::vector<BallReport> out;
  out.reserve(R_list.size());
  for (const double R : R_list) {
    BallReport rep;
    rep.R = R;
    try {
      rep.lower = lower_bound(m, R);
      rep.upper = upper_bound(m, R);
      const VolumeEstimate ve = ball_volume(m, R, VolumeMethod::kPushforward, cfg);
      rep.volume = ve.volume;
      rep.vol_err = ve.err;
      if (ve.volume > 0.0) {
        rep.ratio_lower_volume = rep.lower / ve.volume;
        rep.ratio_volume_upper = ve.volume / rep.upper;
      }
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace ccgeo
