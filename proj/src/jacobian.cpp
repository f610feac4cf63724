#include "ccgeo/jacobian.hpp"

#include <array>
#include <cmath>

#include "chart_internal.hpp"

namespace ccgeo {

double JacobianMatrix::det() const {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

AbcIntegrals abc_integrals(const GeodesicParams& params, const Metric& m,
                           double x, const QuadConfig& cfg) {
  const auto xstar = turning_point(params, m, m.domain_max());
  detail::check_chart_abscissa(x, m, xstar, "abc_integrals");
  AbcIntegrals out;
  if (x == 0.0) return out;
  auto wa = [&](double t) { const double ft = m.f.value(t); return ft * ft; };
  auto wb = [&](double t) { const double gt = m.g.value(t); return gt * gt; };
  auto wc = [&](double t) {
    const double ft = m.f.value(t);
    const double gt = m.g.value(t);
    return ft * ft * gt * gt;
  };
  out.A = detail::integrate_weighted(wa, params, m, 0.0, x, xstar, 3, cfg).value;
  out.B = detail::integrate_weighted(wb, params, m, 0.0, x, xstar, 3, cfg).value;
  out.C = detail::integrate_weighted(wc, params, m, 0.0, x, xstar, 3, cfg).value;
  return out;
}

JacobianMatrix jacobian_partials(const GeodesicParams& params, const Metric& m,
                                 double x, const QuadConfig& cfg) {
  const AbcIntegrals abc = abc_integrals(params, m, x, cfg);
  const double lam = params.lambda;
  const double mu = params.mu;
  const double f2 = [&] { const double v = m.f.value(x); return v * v; }();
  const double g2 = [&] { const double v = m.g.value(x); return v * v; }();
  const double root = std::sqrt(denominator(params, m, x));

  JacobianMatrix j;
  j.m[0][0] = root;
  j.m[0][1] = -lam * root * abc.A;
  j.m[0][2] = -mu * root * abc.B;
  j.m[1][0] = lam * f2;
  j.m[1][1] = (1.0 - lam * lam * f2) * abc.A - mu * mu * abc.C;
  j.m[1][2] = -lam * mu * f2 * abc.B + lam * mu * abc.C;
  j.m[2][0] = mu * g2;
  j.m[2][1] = -lam * mu * g2 * abc.A + lam * mu * abc.C;
  j.m[2][2] = (1.0 - mu * mu * g2) * abc.B - lam * lam * abc.C;
  return j;
}

double jacobian_det(const GeodesicParams& params, const Metric& m, double x,
                    const QuadConfig& cfg) {
  const AbcIntegrals abc = abc_integrals(params, m, x, cfg);
  const double lam = params.lambda;
  const double mu = params.mu;
  const double root = std::sqrt(denominator(params, m, x));
  return root *
         (abc.A * abc.B - lam * lam * abc.A * abc.C - mu * mu * abc.B * abc.C);
}

JacobianMatrix jacobian_fd(const GeodesicParams& params, const Metric& m,
                           double x, const QuadConfig& cfg) {
  const auto xstar = turning_point(params, m, m.domain_max());
  detail::check_chart_abscissa(x, m, xstar, "jacobian_fd");

  auto one = [](double) { return 1.0; };
  const double r0 =
      detail::integrate_weighted(one, params, m, 0.0, x, xstar, 1, cfg).value;

  auto forward = [&](double r, double lam, double mu) {
    GeodesicParams p = params;
    p.lambda = lam;
    p.mu = mu;
    const double xx = x_of_r(p, m, r, cfg);
    const GeodesicPoint gp = geodesic_map(p, m, xx, cfg);
    return std::array<double, 3>{xx, gp.y, gp.z};
  };

  const double hr = 1e-5 * (1.0 + std::fabs(r0));
  const double hl = 1e-5 * (1.0 + std::fabs(params.lambda));
  const double hm = 1e-5 * (1.0 + std::fabs(params.mu));

  const auto rp = forward(r0 + hr, params.lambda, params.mu);
  const auto rm = forward(r0 - hr, params.lambda, params.mu);
  const auto lp = forward(r0, params.lambda + hl, params.mu);
  const auto lm = forward(r0, params.lambda - hl, params.mu);
  const auto mp = forward(r0, params.lambda, params.mu + hm);
  const auto mm = forward(r0, params.lambda, params.mu - hm);

  JacobianMatrix j;
  for (int row = 0; row < 3; ++row) {
    j.m[row][0] = (rp[row] - rm[row]) / (2.0 * hr);
    j.m[row][1] = (lp[row] - lm[row]) / (2.0 * hl);
    j.m[row][2] = (mp[row] - mm[row]) / (2.0 * hm);
  }
  return j;
}

double x_of_r(const GeodesicParams& params, const Metric& m, double r,
              const QuadConfig& cfg) {
  if (!(r >= 0.0)) throw std::domain_error("x_of_r: r must be >= 0");
  if (r == 0.0) return 0.0;

  const auto xstar = turning_point(params, m, m.domain_max());
  const double x_cap =
      xstar ? *xstar * (1.0 - detail::kTurningGuard) : m.domain_max();
  auto one = [](double) { return 1.0; };
  auto r_of = [&](double x) {
    return detail::integrate_weighted(one, params, m, 0.0, x, xstar, 1, cfg).value;
  };
  const double r_cap = r_of(x_cap);
  if (r > r_cap)
    throw std::domain_error("x_of_r: arc length beyond the chart (r_cap = " +
                            std::to_string(r_cap) + ")");
  if (r == r_cap) return x_cap;
  return find_root([&](double x) { return r_of(x) - r; }, 0.0, x_cap, 1e-12);
}

}  // namespace ccgeo
