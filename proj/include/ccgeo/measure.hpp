#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccgeo/geodesics.hpp"

namespace ccgeo {

/// Per-radius measure estimates. lower <= upper is not asserted: the two
/// bounds carry unknown proportionality constants and are reported as data.
struct BallReport {
  double R = 0;
  double lower = 0;
  double upper = 0;
  std::optional<double> volume;            // pushforward estimate
  std::optional<double> vol_err;
  std::optional<double> ratio_lower_volume;  // lower / volume
  std::optional<double> ratio_volume_upper;  // volume / upper
  std::string error;                         // nonempty when volume failed
};

/// Parameters of the three-segment axis-parallel curve phi on [0, R]:
/// x-leg to a, then y-leg until b, then z-leg until R.
struct StaircaseParams {
  double a = 0;
  double b = 0;
  double R = 0;
};

enum class VolumeMethod { kPushforward, kGrid };

struct VolumeEstimate {
  double volume = 0;
  double err = 0;
};

/// min{ f g / (|F'|^2 |G'|), f g / (|F'| |G'|^2) } at R, with |F'|, |G'| the
/// logarithmic-derivative magnitudes of f, g.
double upper_bound(const Metric& m, double R);

/// f(R) g(R) / max{|F'(R)|, |G'(R)|}^3.
double lower_bound(const Metric& m, double R);

/// The exact staircase-region volume V = int_0^R (R-x)^2 f(x) g(x) / 2 dx.
double lower_bound_exact_integral(const Metric& m, double R, const QuadConfig& cfg = {});

/// n samples of phi including the segment corners; endpoint
/// (a, (b-a) f(a), (R-b) g(a)). Requires n large enough to carry the corners.
SampledCurve staircase_curve(const StaircaseParams& sp, const Metric& m, int n);

/// Largest z reachable by a staircase through (x0, y0):
/// (R - x0 - y0/f(x0)) * g(x0).
double staircase_reach(const Metric& m, double x0, double y0, double R);

/// Lebesgue measure of the chart ball of radius R.
///  - kPushforward: 8 x integral of |det d(x,y,z)/d(r,lambda,mu)| over the
///    positive-octant momentum quadrant, r truncated at min(R, r*).
///  - kGrid: center-in-ball cell counting on a grid_n^3 lattice over the
///    bounding box; the independent oracle (unreachable centers count as
///    outside).
VolumeEstimate ball_volume(const Metric& m, double R, VolumeMethod method,
                           const QuadConfig& cfg = {}, int grid_n = 40);

/// One BallReport per radius; per-entry failures are recorded in the report
/// and the scan continues.
std::vector<BallReport> bound_ratio_scan(const Metric& m,
                                         const std::vector<double>& R_list,
                                         const QuadConfig& cfg = {});

}  // namespace ccgeo
