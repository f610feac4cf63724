// ccgeo: geodesics, subunit distances and ball-measure estimates for the
// diagonal degenerate metric dx^2 + dy^2/f(x)^2 + dz^2/g(x)^2.
//
// Subcommands: geodesic, sphere, bounds, volume, jacobian-check, profile-info.
// Profiles are given as "exp-inverse:sigma=1,p=2" or "power:k=2"; outputs are
// CSV (default) or JSON with 17-significant-digit numbers, so reruns are
// byte-identical.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccgeo/geodesics.hpp"
#include "ccgeo/jacobian.hpp"
#include "ccgeo/measure.hpp"
#include "ccgeo/report.hpp"

namespace {

struct RunConfig {
  std::string f_spec = "exp-inverse:sigma=1,p=2";
  std::string g_spec = "exp-inverse:sigma=2,p=2";
  double domain_max = 10.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::string format = "csv";
  std::string out;
  long seed = 0;
};

ccgeo::Metric make_metric(const RunConfig& rc) {
  return ccgeo::Metric{ccgeo::Profile::parse(rc.f_spec, rc.domain_max),
                       ccgeo::Profile::parse(rc.g_spec, rc.domain_max)};
}

ccgeo::QuadConfig make_quad(const RunConfig& rc) {
  ccgeo::QuadConfig q;
  q.abs_tol = rc.abs_tol;
  q.rel_tol = rc.rel_tol;
  return q;
}

void emit(const RunConfig& rc, const ccgeo::Table& table) {
  ccgeo::write_table(rc.out, table, ccgeo::parse_format(rc.format));
}

std::vector<double> parse_radii(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty radius list");
  return out;
}

int cmd_geodesic(const RunConfig& rc, double lambda, double mu,
                 std::optional<double> x_end, std::optional<double> r_end, int n) {
  const ccgeo::Metric m = make_metric(rc);
  const ccgeo::QuadConfig quad = make_quad(rc);
  ccgeo::GeodesicParams params;
  params.lambda = lambda;
  params.mu = mu;
  params.sign_y = lambda < 0 ? -1 : 1;
  params.sign_z = mu < 0 ? -1 : 1;

  double xe = 0.0;
  if (r_end)
    xe = ccgeo::x_of_r(params, m, *r_end, quad);
  else
    xe = *x_end;

  const ccgeo::SampledCurve curve = ccgeo::geodesic_curve(params, m, xe, n, quad);

  ccgeo::Table table;
  table.columns = {"t", "x", "y", "z"};
  for (const auto& s : curve.samples)
    table.rows.push_back({s.t, s.p.x, s.p.y, s.p.z});

  // Figure-style marker: the point at subunit distance 1, when the curve
  // reaches that far.
  const double r_total = curve.samples.back().t;
  if (r_total >= 1.0) {
    const double x1 = ccgeo::x_of_r(params, m, 1.0, quad);
    const ccgeo::GeodesicPoint p1 = ccgeo::geodesic_map(params, m, x1, quad);
    // drop cumulative samples that collide with the exact marker row
    std::erase_if(table.rows,
                  [](const auto& row) { return std::fabs(*row[0] - 1.0) < 1e-9; });
    auto it = std::lower_bound(
        table.rows.begin(), table.rows.end(), 1.0,
        [](const auto& row, double t) { return *row[0] < t; });
    table.rows.insert(it, {1.0, p1.x, p1.y, p1.z});
    table.comments.push_back("marker: row with t=1 is the distance-1 point");
  }
  emit(rc, table);
  return 0;
}

int cmd_sphere(const RunConfig& rc, double R, int n_lambda, int n_mu) {
  const ccgeo::Metric m = make_metric(rc);
  const ccgeo::QuadConfig quad = make_quad(rc);
  if (!(R > 0.0)) throw std::domain_error("sphere: R must be > 0");
  const double fR = m.f.value(R);
  const double gR = m.g.value(R);
  if (!(fR > 0.0) || !(gR > 0.0))
    throw std::domain_error("sphere: profiles vanish at R (radius too small)");

  const double lam_cap = (1.0 - 1e-6) / fR;
  const double mu_cap = (1.0 - 1e-6) / gR;
  ccgeo::Table table;
  table.columns = {"lambda", "mu", "x", "y", "z"};
  int truncated = 0;
  for (int i = 0; i < n_lambda; ++i) {
    const double lam = n_lambda > 1 ? lam_cap * i / (n_lambda - 1) : 0.0;
    for (int j = 0; j < n_mu; ++j) {
      const double mu = n_mu > 1 ? mu_cap * j / (n_mu - 1) : 0.0;
      ccgeo::GeodesicParams p;
      p.lambda = lam;
      p.mu = mu;
      ccgeo::GeodesicPoint pt;
      try {
        const double xe = ccgeo::x_of_r(p, m, R, quad);
        pt = ccgeo::geodesic_map(p, m, xe, quad);
      } catch (const std::domain_error&) {
        // turning point arrives before arc length R: emit the farthest chart
        // point instead and count the row as truncated
        ++truncated;
        const auto xstar = ccgeo::turning_point(p, m, m.domain_max());
        const double xe =
            xstar ? *xstar * (1.0 - 1e-9) : m.domain_max() * (1.0 - 1e-12);
        pt = ccgeo::geodesic_map(p, m, xe, quad);
      }
      table.rows.push_back({lam, mu, pt.x, pt.y, pt.z});
    }
  }
  if (truncated > 0)
    table.comments.push_back("truncated " + std::to_string(truncated) + " of " +
                             std::to_string(n_lambda * n_mu) +
                             " grid points before arc length R");
  emit(rc, table);
  return 0;
}

int cmd_bounds(const RunConfig& rc, const std::string& radii) {
  const ccgeo::Metric m = make_metric(rc);
  const ccgeo::QuadConfig quad = make_quad(rc);
  const std::vector<double> rs = parse_radii(radii);
  const std::vector<ccgeo::BallReport> reports = ccgeo::bound_ratio_scan(m, rs, quad);

  ccgeo::Table table;
  table.columns = {"R", "lower", "volume", "vol_err", "upper", "ratio_lv", "ratio_vu"};
  for (const auto& rep : reports) {
    table.rows.push_back({rep.R, rep.lower, rep.volume, rep.vol_err, rep.upper,
                          rep.ratio_lower_volume, rep.ratio_volume_upper});
    if (!rep.error.empty())
      table.comments.push_back("R=" + ccgeo::format_g17(rep.R) + ": " + rep.error);
  }
  emit(rc, table);
  return 0;
}

int cmd_volume(const RunConfig& rc, double R, const std::string& method, int grid_n) {
  const ccgeo::Metric m = make_metric(rc);
  const ccgeo::QuadConfig quad = make_quad(rc);
  ccgeo::VolumeMethod vm;
  if (method == "pushforward")
    vm = ccgeo::VolumeMethod::kPushforward;
  else if (method == "grid")
    vm = ccgeo::VolumeMethod::kGrid;
  else
    throw std::invalid_argument("volume: method must be pushforward or grid");
  const ccgeo::VolumeEstimate ve = ccgeo::ball_volume(m, R, vm, quad, grid_n);

  ccgeo::Table table;
  table.columns = {"R", "volume", "err"};
  table.comments.push_back("method=" + method);
  table.rows.push_back({R, ve.volume, ve.err});
  emit(rc, table);
  return 0;
}

int cmd_jacobian_check(const RunConfig& rc, int n_lambda, int n_mu, int n_x,
                       double x_max, double d_min, double tol_closed,
                       double tol_fd) {
  const ccgeo::Metric m = make_metric(rc);
  if (!(x_max > 0.0) || x_max > m.domain_max())
    throw std::domain_error("jacobian-check: x_max outside (0, domain_max]");
  ccgeo::QuadConfig quad;  // tight tolerances so FD noise stays below tol_fd
  quad.abs_tol = 1e-13;
  quad.rel_tol = 1e-12;

  const double fX = m.f.value(x_max);
  const double gX = m.g.value(x_max);
  const double lam_cap = fX > 0.0 ? 0.999 / fX : 0.0;
  const double mu_cap = gX > 0.0 ? 0.999 / gX : 0.0;

  ccgeo::Table table;
  table.columns = {"lambda", "mu",    "x",          "det_closed",
                   "det_matrix", "det_fd", "rel_err_matrix", "rel_err_fd"};
  double worst_matrix = 0.0, worst_fd = 0.0;
  int skipped = 0;
  for (int i = 0; i < n_lambda; ++i) {
    const double lam = n_lambda > 1 ? lam_cap * i / (n_lambda - 1) : 0.0;
    for (int j = 0; j < n_mu; ++j) {
      const double mu = n_mu > 1 ? mu_cap * j / (n_mu - 1) : 0.0;
      for (int k = 0; k < n_x; ++k) {
        const double x = x_max * (k + 1) / n_x;
        ccgeo::GeodesicParams p;
        p.lambda = lam;
        p.mu = mu;
        if (ccgeo::denominator(p, m, x) <= d_min) {
          ++skipped;
          continue;
        }
        const double det_closed = ccgeo::jacobian_det(p, m, x, quad);
        const double det_matrix = ccgeo::jacobian_partials(p, m, x, quad).det();
        const double det_fd = ccgeo::jacobian_fd(p, m, x, quad).det();
        const double scale = std::max(std::fabs(det_closed), 1e-300);
        const double rel_matrix = std::fabs(det_matrix - det_closed) / scale;
        const double rel_fd = std::fabs(det_fd - det_closed) / scale;
        worst_matrix = std::max(worst_matrix, rel_matrix);
        worst_fd = std::max(worst_fd, rel_fd);
        table.rows.push_back(
            {lam, mu, x, det_closed, det_matrix, det_fd, rel_matrix, rel_fd});
      }
    }
  }
  table.comments.push_back("max_rel_err_matrix=" + ccgeo::format_g17(worst_matrix));
  table.comments.push_back("max_rel_err_fd=" + ccgeo::format_g17(worst_fd));
  if (skipped > 0)
    table.comments.push_back("skipped " + std::to_string(skipped) +
                             " grid points with D <= " + ccgeo::format_g17(d_min));
  emit(rc, table);
  return (worst_matrix > tol_closed || worst_fd > tol_fd) ? 2 : 0;
}

int cmd_profile_info(const RunConfig& rc, const std::string& which, double x_min,
                     double x_max, int n) {
  const ccgeo::Metric m = make_metric(rc);
  const ccgeo::Profile& p = which == "g" ? m.g : m.f;
  if (!(x_min > 0.0) || !(x_max > x_min) || x_max > p.domain_max())
    throw std::domain_error("profile-info: need 0 < x_min < x_max <= domain_max");
  if (n < 2) throw std::invalid_argument("profile-info: need n >= 2");

  ccgeo::Table table;
  table.columns = {"x", "value", "deriv", "log_deriv_mag"};
  table.comments.push_back("profile " + which + " = " + p.spec_string());
  const double lr = std::log(x_max / x_min);
  for (int i = 0; i < n; ++i) {
    const double x = x_min * std::exp(lr * i / (n - 1));
    table.rows.push_back({x, p.value(x), p.deriv(x), p.log_deriv_mag(x)});
  }
  emit(rc, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesics and metric-ball measures of a degenerate diagonal metric"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  app.add_option("--f", rc.f_spec, "profile f spec")->capture_default_str();
  app.add_option("--g", rc.g_spec, "profile g spec")->capture_default_str();
  app.add_option("--domain-max", rc.domain_max, "largest abscissa profiles are evaluated at")
      ->capture_default_str();
  app.add_option("--abs-tol", rc.abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--rel-tol", rc.rel_tol, "quadrature relative tolerance")
      ->capture_default_str();
  app.add_option("--format", rc.format, "output format: csv or json")
      ->capture_default_str();
  app.add_option("--out", rc.out, "output path (stdout when omitted)");
  app.add_option("--seed", rc.seed, "seed recorded for reproducibility")
      ->capture_default_str();
  app.set_config("--config", "", "key=value config file, overridden by flags");

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "sample one geodesic from the origin");
  double lambda = 0.0, mu = 0.0;
  int geo_n = 200;
  std::optional<double> x_end, r_end;
  geo->add_option("--lambda", lambda, "conserved y-momentum");
  geo->add_option("--mu", mu, "conserved z-momentum");
  auto* ox = geo->add_option("--x-end", x_end, "final abscissa");
  auto* orr = geo->add_option("--r-end", r_end, "final arc length");
  ox->excludes(orr);
  orr->excludes(ox);
  geo->add_option("--n", geo_n, "number of samples")->capture_default_str();

  // sphere
  auto* sph = app.add_subcommand("sphere", "geodesic endpoints at arc length R");
  double sph_R = 1.0;
  int n_lambda = 16, n_mu = 16;
  sph->add_option("--radius,-R", sph_R, "arc length of the endpoints")->required();
  sph->add_option("--n-lambda", n_lambda, "lambda grid size")->capture_default_str();
  sph->add_option("--n-mu", n_mu, "mu grid size")->capture_default_str();

  // bounds
  auto* bnd = app.add_subcommand("bounds", "measure bounds and pushforward volume per radius");
  std::string radii = "0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  bnd->add_option("--radii", radii, "comma-separated radii")->capture_default_str();

  // volume
  auto* vol = app.add_subcommand("volume", "ball volume by pushforward or grid counting");
  double vol_R = 0.8;
  std::string method = "pushforward";
  int grid_n = 40;
  vol->add_option("--radius,-R", vol_R, "metric radius")->required();
  vol->add_option("--method", method, "pushforward or grid")->capture_default_str();
  vol->add_option("--grid-n", grid_n, "cells per axis for the grid method")
      ->capture_default_str();

  // jacobian-check
  auto* jac = app.add_subcommand("jacobian-check",
                                 "closed-form vs matrix vs finite-difference determinants");
  int jn_lambda = 5, jn_mu = 5, jn_x = 5;
  double jx_max = 0.8, jd_min = 0.05, jtol_closed = 1e-10, jtol_fd = 1e-4;
  jac->add_option("--n-lambda", jn_lambda)->capture_default_str();
  jac->add_option("--n-mu", jn_mu)->capture_default_str();
  jac->add_option("--n-x", jn_x)->capture_default_str();
  jac->add_option("--x-max", jx_max)->capture_default_str();
  jac->add_option("--d-min", jd_min, "skip grid points with D <= d-min")
      ->capture_default_str();
  jac->add_option("--tol-closed", jtol_closed, "matrix vs closed-form tolerance")
      ->capture_default_str();
  jac->add_option("--tol-fd", jtol_fd, "finite-difference tolerance")
      ->capture_default_str();

  // profile-info
  auto* pin = app.add_subcommand("profile-info", "tabulate a profile");
  std::string which = "f";
  double px_min = 0.05, px_max = 2.0;
  int pn = 50;
  pin->add_option("--which", which, "f or g")->capture_default_str();
  pin->add_option("--x-min", px_min)->capture_default_str();
  pin->add_option("--x-max", px_max)->capture_default_str();
  pin->add_option("--n", pn)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (geo->parsed()) {
      if (!x_end && !r_end)
        throw std::invalid_argument("geodesic: give exactly one of --x-end / --r-end");
      return cmd_geodesic(rc, lambda, mu, x_end, r_end, geo_n);
    }
    if (sph->parsed()) return cmd_sphere(rc, sph_R, n_lambda, n_mu);
    if (bnd->parsed()) return cmd_bounds(rc, radii);
    if (vol->parsed()) return cmd_volume(rc, vol_R, method, grid_n);
    if (jac->parsed())
      return cmd_jacobian_check(rc, jn_lambda, jn_mu, jn_x, jx_max, jd_min,
                                jtol_closed, jtol_fd);
    if (pin->parsed()) return cmd_profile_info(rc, which, px_min, px_max, pn);
  } catch (const std::exception& e) {
    std::cerr << "ccgeo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
