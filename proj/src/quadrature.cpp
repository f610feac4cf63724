#include "ccgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ccgeo {

namespace {

// 15-point Kronrod abscissae (positive half, decreasing); the odd indices and
// the centre form the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839998060075660,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a = 0, b = 0;
  double value = 0;
  double err = 0;
  int depth = 0;
};

struct PanelLessErr {
  bool operator()(const Panel& p, const Panel& q) const { return p.err < q.err; }
};

Panel eval_panel(const std::function<double(double)>& fn, double a, double b,
                 int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double f_lo[7], f_hi[7];
  const double fc = fn(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = std::fabs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f_lo[j] = fn(c - dx);
    f_hi[j] = fn(c + dx);
    const double fsum = f_lo[j] + f_hi[j];
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::fabs(f_lo[j]) + std::fabs(f_hi[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(f_lo[j] - reskh) + std::fabs(f_hi[j] - reskh));

  double err = std::fabs((resk - resg) * h);
  resabs *= std::fabs(h);
  resasc *= std::fabs(h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(err, eps50 * resabs);

  Panel out;
  out.a = a;
  out.b = b;
  out.value = resk * h;
  out.err = err;
  out.depth = depth;
  return out;
}

constexpr int kMaxPanels = 20000;

}  // namespace

QuadResult integrate(const std::function<double(double)>& fn, double a,
                     double b, const QuadConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_depth < 1)
    throw std::invalid_argument("integrate: invalid QuadConfig");
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");

  QuadResult out;
  if (a == b) return out;

  std::priority_queue<Panel, std::vector<Panel>, PanelLessErr> active;
  Panel whole = eval_panel(fn, a, b, 0);
  out.n_evals = 15;
  double total_val = whole.value;
  double total_err = whole.err;
  active.push(whole);
  int n_panels = 1;

  while (!active.empty()) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total_val));
    if (total_err <= tol) break;
    Panel worst = active.top();
    active.pop();
    if (worst.depth >= cfg.max_depth || n_panels >= kMaxPanels) continue;
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = eval_panel(fn, worst.a, mid, worst.depth + 1);
    Panel right = eval_panel(fn, mid, worst.b, worst.depth + 1);
    out.n_evals += 30;
    total_val += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
    ++n_panels;
  }

  out.value = total_val;
  out.err_estimate = total_err;
  out.converged =
      total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total_val));
  return out;
}

QuadResult integrate_singular_sqrt(const std::function<double(double)>& fn_regular,
                                   double a, double b, const QuadConfig& cfg) {
  if (!(a <= b)) throw std::invalid_argument("integrate_singular_sqrt: requires a <= b");
  if (a == b) return {};
  const double w = std::sqrt(b - a);
  auto transformed = [&fn_regular, b](double u) {
    return 2.0 * fn_regular(b - u * u);
  };
  return integrate(transformed, 0.0, w, cfg);
}

double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 double x_tol) {
  if (!(x_tol > 0.0)) throw std::invalid_argument("find_root: x_tol must be > 0");
  if (!(lo <= hi)) throw std::invalid_argument("find_root: requires lo <= hi");

  double a = lo, b = hi;
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::invalid_argument("find_root: endpoints do not bracket a root");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = fn(b);
  }
  return b;
}

}  // namespace ccgeo
