#include "ccgeo/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace ccgeo {

namespace {

void check_domain(double x, double lo_open, double hi, const char* what) {
  const bool ok = (lo_open == 0.0 ? x >= 0.0 : x > 0.0) && x <= hi;
  if (!ok)
    throw std::domain_error(std::string(what) + ": x out of profile domain");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// "k=2,p=1" -> {k:2, p:1}
std::map<std::string, double> parse_kv(std::string_view body) {
  std::map<std::string, double> out;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view item = body.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 >= item.size())
      throw std::invalid_argument("Profile::parse: expected key=value, got '" +
                                  std::string(item) + "'");
    std::string key(item.substr(0, eq));
    std::string val(item.substr(eq + 1));
    size_t used = 0;
    double num = std::stod(val, &used);
    if (used != val.size())
      throw std::invalid_argument("Profile::parse: bad number '" + val + "'");
    out[key] = num;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Profile::Profile(ProfileFamily family, double a, double b, double domain_max)
    : family_(family), a_(a), b_(b), domain_max_(domain_max) {
  if (!(domain_max_ > 0.0))
    throw std::invalid_argument("Profile: domain_max must be > 0");
}

Profile Profile::power_law(double k, double domain_max) {
  if (!(k > 0.0)) throw std::invalid_argument("Profile: power-law exponent must be > 0");
  return Profile(ProfileFamily::kPowerLaw, k, 0.0, domain_max);
}

Profile Profile::exp_inverse(double sigma, double p, double domain_max) {
  if (!(sigma > 0.0) || !(p > 0.0))
    throw std::invalid_argument("Profile: exp-inverse needs sigma > 0 and p > 0");
  return Profile(ProfileFamily::kExpInverse, sigma, p, domain_max);
}

Profile Profile::parse(std::string_view spec, double domain_max) {
  const size_t colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("Profile::parse: expected '<family>:<params>' in '" +
                                std::string(spec) + "'");
  const std::string_view family = spec.substr(0, colon);
  const auto kv = parse_kv(spec.substr(colon + 1));
  if (family == "power") {
    auto it = kv.find("k");
    if (it == kv.end() || kv.size() != 1)
      throw std::invalid_argument("Profile::parse: power profile takes exactly k=<val>");
    return power_law(it->second, domain_max);
  }
  if (family == "exp-inverse") {
    auto is = kv.find("sigma");
    auto ip = kv.find("p");
    if (is == kv.end() || ip == kv.end() || kv.size() != 2)
      throw std::invalid_argument(
          "Profile::parse: exp-inverse profile takes sigma=<val>,p=<val>");
    return exp_inverse(is->second, ip->second, domain_max);
  }
  throw std::invalid_argument("Profile::parse: unknown family '" + std::string(family) +
                              "'");
}

double Profile::value(double x) const {
  check_domain(x, 0.0, domain_max_, "Profile::value");
  switch (family_) {
    case ProfileFamily::kPowerLaw:
      return std::pow(x, a_);
    case ProfileFamily::kExpInverse:
      if (x == 0.0) return 0.0;  // limit value
      return std::exp(-a_ / std::pow(x, b_));
  }
  return 0.0;
}

double Profile::deriv(double x) const {
  check_domain(x, 1.0, domain_max_, "Profile::deriv");
  switch (family_) {
    case ProfileFamily::kPowerLaw:
      return a_ * std::pow(x, a_ - 1.0);
    case ProfileFamily::kExpInverse:
      return a_ * b_ / std::pow(x, b_ + 1.0) * std::exp(-a_ / std::pow(x, b_));
  }
  return 0.0;
}

double Profile::log_deriv_mag(double x) const {
  check_domain(x, 1.0, domain_max_, "Profile::log_deriv_mag");
  switch (family_) {
    case ProfileFamily::kPowerLaw:
      return a_ / x;
    case ProfileFamily::kExpInverse:
      return a_ * b_ / std::pow(x, b_ + 1.0);
  }
  return 0.0;
}

std::string Profile::spec_string() const {
  switch (family_) {
    case ProfileFamily::kPowerLaw:
      return "power:k=" + fmt(a_);
    case ProfileFamily::kExpInverse:
      return "exp-inverse:sigma=" + fmt(a_) + ",p=" + fmt(b_);
  }
  return {};
}

}  // namespace ccgeo
