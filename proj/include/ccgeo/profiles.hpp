#pragma once

#include <string>
#include <string_view>

namespace ccgeo {

enum class ProfileFamily { kPowerLaw, kExpInverse };

/// One-variable degeneracy profile: positive and nondecreasing on
/// (0, domain_max], with exact closed-form derivative and logarithmic
/// derivative. Two families:
///   power_law(k):          x^k            (k > 0)
///   exp_inverse(sigma, p): exp(-sigma/x^p) with value(0) defined as 0.
class Profile {
 public:
  static Profile power_law(double k, double domain_max = 10.0);
  static Profile exp_inverse(double sigma, double p, double domain_max = 10.0);

  /// Parses "power:k=2" or "exp-inverse:sigma=1,p=2".
  static Profile parse(std::string_view spec, double domain_max = 10.0);

  /// f(x) for x in [0, domain_max].
  double value(double x) const;

  /// f'(x) for x in (0, domain_max].
  double deriv(double x) const;

  /// |f'(x)| / f(x) for x in (0, domain_max]; singular at x = 0 for the
  /// exp-inverse family.
  double log_deriv_mag(double x) const;

  ProfileFamily family() const { return family_; }
  double domain_max() const { return domain_max_; }

  /// Spec string that parses back to this profile.
  std::string spec_string() const;

 private:
  Profile(ProfileFamily family, double a, double b, double domain_max);

  ProfileFamily family_;
  double a_;  // k for power_law, sigma for exp_inverse
  double b_;  // p for exp_inverse, unused for power_law
  double domain_max_;
};

}  // namespace ccgeo
