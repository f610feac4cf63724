#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccgeo/measure.hpp"
#include "oracles.hpp"

using ccgeo::Metric;
using ccgeo::Profile;
using ccgeo::StaircaseParams;
using ccgeo::VolumeMethod;

namespace {

Metric exp_pair() {
  return Metric{Profile::exp_inverse(1.0, 2.0), Profile::exp_inverse(2.0, 2.0)};
}

Metric exp_equal() {
  return Metric{Profile::exp_inverse(1.0, 2.0), Profile::exp_inverse(1.0, 2.0)};
}

}  // namespace

TEST_CASE("upper_bound: exp-inverse pair closed form") {
  // |F'| = 2, |G'| = 4 at R = 1: min{1/16, 1/32} of e^-3
  CHECK(ccgeo::upper_bound(exp_pair(), 1.0) ==
        doctest::Approx(std::exp(-3.0) / 32.0).epsilon(1e-12));
}

TEST_CASE("upper_bound: equal profiles collapse the min") {
  const Metric m = exp_equal();
  for (double R : {0.4, 0.7, 1.0}) {
    const double fR = m.f.value(R);
    const double dF = m.f.log_deriv_mag(R);
    CHECK(ccgeo::upper_bound(m, R) ==
          doctest::Approx(fR * fR / (dF * dF * dF)).epsilon(1e-12));
  }
}

TEST_CASE("upper_bound: unit power law") {
  const Metric m{Profile::power_law(1.0), Profile::power_law(1.0)};
  CHECK(ccgeo::upper_bound(m, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lower_bound: closed forms and matching case") {
  CHECK(ccgeo::lower_bound(exp_pair(), 1.0) ==
        doctest::Approx(std::exp(-3.0) / 64.0).epsilon(1e-12));

  const Metric meq = exp_equal();
  for (double R : {0.35, 0.6, 0.95})
    CHECK(ccgeo::lower_bound(meq, R) ==
          doctest::Approx(ccgeo::upper_bound(meq, R)).epsilon(1e-12));

  const Metric lin{Profile::power_law(1.0), Profile::power_law(1.0)};
  CHECK(ccgeo::lower_bound(lin, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lower_bound_exact_integral: polynomial closed form") {
  const Metric lin{Profile::power_law(1.0), Profile::power_law(1.0)};
  for (double R : {0.5, 1.0, 2.0}) {
    CHECK(ccgeo::lower_bound_exact_integral(lin, R) ==
          doctest::Approx(std::pow(R, 5) / 60.0).epsilon(1e-10));
  }
  CHECK(ccgeo::lower_bound_exact_integral(lin, 0.0) == 0.0);
}

TEST_CASE("lower_bound_exact_integral: midpoint oracle for the exp pair") {
  const Metric m = exp_pair();
  auto fn = [&](double x) {
    return 0.5 * (1.0 - x) * (1.0 - x) * m.f.value(x) * m.g.value(x);
  };
  const double oracle = oracles::midpoint(fn, 0.0, 1.0, 1000000);
  CHECK(ccgeo::lower_bound_exact_integral(m, 1.0) ==
        doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("exact lower-bound chain: V >= f(R-M) g(R-M) M^3 / 6") {
  for (const Metric& m : {exp_pair(), exp_equal(),
                          Metric{Profile::power_law(0.5), Profile::power_law(1.0)}}) {
    for (int i = 3; i <= 10; ++i) {
      const double R = 0.1 * i;
      const double M =
          std::min({1.0 / m.f.log_deriv_mag(R), 1.0 / m.g.log_deriv_mag(R), R});
      const double V = ccgeo::lower_bound_exact_integral(m, R);
      const double chain =
          m.f.value(R - M) * m.g.value(R - M) * M * M * M / 6.0;
      CHECK(V >= chain - 1e-8 * std::max(1.0, std::fabs(chain)));
    }
  }
}

TEST_CASE("staircase_curve: endpoints and corners") {
  const Metric m = exp_pair();
  const double fa = m.f.value(0.4);
  const double ga = m.g.value(0.4);
  const ccgeo::SampledCurve c =
      ccgeo::staircase_curve(StaircaseParams{0.4, 0.6, 0.9}, m, 31);
  REQUIRE(c.samples.size() == 31);
  CHECK(c.samples.front().t == 0.0);
  CHECK(c.samples.back().t == doctest::Approx(0.9));
  CHECK(c.samples.back().p.x == doctest::Approx(0.4));
  CHECK(c.samples.back().p.y == doctest::Approx(0.2 * fa).epsilon(1e-14));
  CHECK(c.samples.back().p.z == doctest::Approx(0.3 * ga).epsilon(1e-14));
  // the corners are sample points
  bool has_a = false, has_b = false;
  for (const auto& s : c.samples) {
    if (s.t == 0.4) has_a = true;
    if (s.t == 0.6) has_b = true;
  }
  CHECK(has_a);
  CHECK(has_b);
}

TEST_CASE("staircase_curve: degenerate corners") {
  const Metric m = exp_pair();
  const ccgeo::SampledCurve pure_x =
      ccgeo::staircase_curve(StaircaseParams{0.9, 0.9, 0.9}, m, 12);
  CHECK(pure_x.samples.back().p.x == doctest::Approx(0.9));
  CHECK(pure_x.samples.back().p.y == 0.0);
  CHECK(pure_x.samples.back().p.z == 0.0);

  // a = 0 with f(0) = 0: the curve cannot leave the origin
  const ccgeo::SampledCurve stuck =
      ccgeo::staircase_curve(StaircaseParams{0.0, 0.5, 0.9}, m, 12);
  for (const auto& s : stuck.samples) {
    CHECK(s.p.x == 0.0);
    CHECK(s.p.y == 0.0);
    CHECK(s.p.z == 0.0);
  }
  CHECK(ccgeo::is_subunit(stuck, m, 1e-9));

  CHECK_THROWS_AS(ccgeo::staircase_curve(StaircaseParams{0.5, 0.4, 0.9}, m, 12),
                  std::invalid_argument);
  CHECK_THROWS_AS(ccgeo::staircase_curve(StaircaseParams{0.2, 0.5, 0.9}, m, 3),
                  std::invalid_argument);
}

TEST_CASE("staircase_curve: every curve is subunit") {
  const Metric m = exp_pair();
  const double R = 0.8;
  for (int ia = 0; ia <= 6; ++ia) {
    for (int ib = ia; ib <= 6; ++ib) {
      const double a = std::min(R, R * ia / 6);
      const StaircaseParams sp{a, std::max(a, std::min(R, R * ib / 6)), R};
      const ccgeo::SampledCurve c = ccgeo::staircase_curve(sp, m, 40);
      CHECK(ccgeo::is_subunit(c, m, 1e-9));
    }
  }
}

TEST_CASE("staircase_reach: closed forms and endpoint consistency") {
  const Metric m = exp_pair();
  const Metric lin{Profile::power_law(1.0), Profile::power_law(1.0)};

  CHECK(ccgeo::staircase_reach(lin, 0.5, 0.25, 1.0) == doctest::Approx(0.0));
  CHECK(ccgeo::staircase_reach(m, 0.9, 0.0, 0.9) == doctest::Approx(0.0));
  const double budget = (0.9 - 0.3) * m.f.value(0.3);
  CHECK(ccgeo::staircase_reach(m, 0.3, budget, 0.9) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(ccgeo::staircase_reach(m, 0.3, budget * 1.01, 0.9),
                  std::domain_error);

  // reach reproduces the staircase endpoint z exactly
  for (double a : {0.2, 0.45, 0.7}) {
    for (double b : {0.7, 0.8, 0.9}) {
      const StaircaseParams sp{a, b, 0.9};
      const ccgeo::SampledCurve c = ccgeo::staircase_curve(sp, m, 24);
      const double y0 = c.samples.back().p.y;
      const double z_reach = ccgeo::staircase_reach(m, a, y0, 0.9);
      CHECK(z_reach == doctest::Approx(c.samples.back().p.z).epsilon(1e-13));
    }
  }
}

TEST_CASE("ball_volume: pushforward agrees with the coarse grid oracle") {
  const Metric m = exp_equal();
  const ccgeo::VolumeEstimate pf =
      ccgeo::ball_volume(m, 0.8, VolumeMethod::kPushforward);
  const ccgeo::VolumeEstimate gr =
      ccgeo::ball_volume(m, 0.8, VolumeMethod::kGrid, {}, 16);
  CHECK(pf.volume > 0.0);
  CHECK(gr.volume > 0.0);
  CHECK(std::fabs(pf.volume - gr.volume) <= 0.2 * pf.volume);
}

TEST_CASE("ball_volume: power-law scale equivariance") {
  const Metric m{Profile::power_law(1.0), Profile::power_law(2.0)};
  const double v1 = ccgeo::ball_volume(m, 1.0, VolumeMethod::kPushforward).volume;
  const double v2 = ccgeo::ball_volume(m, 0.5, VolumeMethod::kPushforward).volume;
  // |B(0, sR)| = s^(a+b+3) |B(0, R)| exactly for power laws
  CHECK(v1 / v2 == doctest::Approx(64.0).epsilon(1e-8));
}

TEST_CASE("ball_volume: tiny radius underflows to zero") {
  const Metric m = exp_pair();
  CHECK(ccgeo::ball_volume(m, 0.05, VolumeMethod::kPushforward).volume == 0.0);
  CHECK(ccgeo::ball_volume(m, 0.05, VolumeMethod::kGrid, {}, 8).volume == 0.0);
  CHECK(ccgeo::ball_volume(m, 0.2, VolumeMethod::kPushforward).volume < 1e-20);
}

TEST_CASE("ball_volume: argument validation") {
  const Metric m = exp_pair();
  CHECK_THROWS_AS(ccgeo::ball_volume(m, -1.0, VolumeMethod::kPushforward),
                  std::domain_error);
  CHECK_THROWS_AS(ccgeo::ball_volume(m, 0.8, VolumeMethod::kGrid, {}, 7),
                  std::invalid_argument);
}

TEST_CASE("bound_ratio_scan: constant ratio 2 for the exp pair") {
  const Metric m = exp_pair();
  const auto reports = ccgeo::bound_ratio_scan(m, {0.4, 0.6, 0.8});
  REQUIRE(reports.size() == 3);
  for (const auto& rep : reports) {
    CHECK(rep.error.empty());
    CHECK(rep.upper / rep.lower == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(rep.volume.has_value());
    CHECK(*rep.volume > 0.0);
    REQUIRE(rep.ratio_lower_volume.has_value());
    REQUIRE(rep.ratio_volume_upper.has_value());
    CHECK(*rep.ratio_lower_volume ==
          doctest::Approx(rep.lower / *rep.volume).epsilon(1e-12));
    CHECK(*rep.ratio_volume_upper ==
          doctest::Approx(*rep.volume / rep.upper).epsilon(1e-12));
  }
}

TEST_CASE("bound_ratio_scan: equal profiles give ratio 1") {
  const auto reports = ccgeo::bound_ratio_scan(exp_equal(), {0.5, 0.8});
  for (const auto& rep : reports)
    CHECK(rep.upper / rep.lower == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bound_ratio_scan: power-law bounds scale as R^(a+b+3)") {
  const Metric m{Profile::power_law(1.0), Profile::power_law(2.0)};
  const auto reports = ccgeo::bound_ratio_scan(m, {0.5, 1.0});
  REQUIRE(reports.size() == 2);
  CHECK(reports[1].lower / reports[0].lower == doctest::Approx(64.0).epsilon(1e-10));
  CHECK(reports[1].upper / reports[0].upper == doctest::Approx(64.0).epsilon(1e-10));
  CHECK(reports[0].upper / reports[0].lower ==
        doctest::Approx(reports[1].upper / reports[1].lower).epsilon(1e-10));
}

TEST_CASE("bound_ratio_scan: per-entry failure recorded, scan continues") {
  Metric m{Profile::exp_inverse(1.0, 2.0, 2.0), Profile::exp_inverse(2.0, 2.0, 2.0)};
  const auto reports = ccgeo::bound_ratio_scan(m, {0.5, 5.0, 0.8});
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].error.empty());
  CHECK_FALSE(reports[1].error.empty());  // R beyond the profile domain
  CHECK_FALSE(reports[1].volume.has_value());
  CHECK(reports[2].error.empty());
}
