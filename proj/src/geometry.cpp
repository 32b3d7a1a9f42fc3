#include "atlas/geometry.hpp"

#include <cmath>
#include <limits>

namespace atlas {

CoverPoint::CoverPoint(double m, double a) : modulus(m), argument(a) {
  if (!(m > 0.0) || !std::isfinite(m) || !std::isfinite(a))
    throw domain_error("cover point needs a finite positive modulus and finite argument");
}

CoverPoint CoverPoint::lift(Complex z, double ref_arg) {
  double m = std::abs(z);
  if (m == 0.0) throw domain_error("cannot lift 0 to the cover");
  double a = std::arg(z);
  a += 2 * pi * std::round((ref_arg - a) / (2 * pi));
  return {m, a};
}

CoverPoint shift(const CoverPoint& p, Complex w) {
  Complex base = p.value();
  Complex target = base + w;
  double m = std::abs(target);
  if (m == 0.0) throw domain_error("contour passes through the origin");
  return {m, p.argument + std::arg(target / base)};
}

OrientedLine::OrientedLine(double phi_, double b_) : phi(phi_), b(b_) {
  if (!(b_ > 0.0) || !std::isfinite(b_) || !std::isfinite(phi_))
    throw domain_error("line needs b > 0");
}

CoverPoint OrientedLine::at_param(double s) const {
  return {std::hypot(b, s), phi - std::atan2(s, b)};
}

double OrientedLine::param_of(const CoverPoint& p) const {
  return p.modulus * std::sin(phi - p.argument);
}

CoverPoint line_point(const OrientedLine& line, double theta) {
  double d = line.phi - theta;
  if (!(std::abs(d) < pi / 2)) throw domain_error("argument outside the angular range of the line");
  double c = std::cos(d);
  if (c <= 0.0) throw domain_error("argument outside the angular range of the line");
  return {line.b / c, theta};
}

bool on_line(const OrientedLine& line, const CoverPoint& p, double rel_tol) {
  double d = line.phi - p.argument;
  if (!(std::abs(d) < pi / 2)) return false;
  return std::abs(line.b - p.modulus * std::cos(d)) <= rel_tol * line.b;
}

Ordering line_order(const OrientedLine& line, const CoverPoint& p, const CoverPoint& q) {
  if (!on_line(line, p) || !on_line(line, q)) throw domain_error("point not on line");
  double sp = line.param_of(p), sq = line.param_of(q);
  double tol = 1e-12 * std::max({line.b, std::abs(sp), std::abs(sq)});
  if (std::abs(sp - sq) <= tol) return Ordering::Equal;
  return sp < sq ? Ordering::Less : Ordering::Greater;
}

OrientedLine transversal_line_through(const CoverPoint& p, double phi_prime) {
  double d = phi_prime - p.argument;
  if (!(std::abs(d) < pi / 2)) throw domain_error("transversal direction out of range");
  double b = p.modulus * std::cos(d);
  if (!(b > 0.0)) throw domain_error("transversal direction out of range");
  return {phi_prime, b};
}

IotaCase IotaCurve::kind() const {
  if (b >= a) return IotaCase::Line;
  if (b > 0) return IotaCase::UpperPartial;
  if (b == 0) return IotaCase::Radial;
  if (b > -a) return IotaCase::LowerPartial;
  return IotaCase::LowerLine;
}

double IotaCurve::theta_lo() const {
  switch (kind()) {
    case IotaCase::Line:
    case IotaCase::UpperPartial:
    case IotaCase::Radial: return phi - pi / 2;
    case IotaCase::LowerPartial: return phi - pi / 2 + std::asin(b / a);
    case IotaCase::LowerLine: return phi - 3 * pi / 2;
  }
  return 0.0;
}

double IotaCurve::theta_hi() const {
  switch (kind()) {
    case IotaCase::Line: return phi + pi / 2;
    case IotaCase::UpperPartial: return phi - pi / 2 + std::asin(b / a);
    default: return phi - pi / 2;
  }
}

std::optional<CoverPoint> IotaCurve::junction() const {
  auto k = kind();
  if (k == IotaCase::UpperPartial || k == IotaCase::LowerPartial)
    return CoverPoint{a, phi - pi / 2 + std::asin(b / a)};
  if (k == IotaCase::Radial) return CoverPoint{a, phi - pi / 2};
  return std::nullopt;
}

CoverPoint iota_point(const IotaCurve& c, double theta) {
  if (!(c.a > 0)) throw domain_error("iota curve needs a > 0");
  auto k = c.kind();
  if (k == IotaCase::Radial) {
    if (!(theta >= c.a)) throw domain_error("radial iota curve needs modulus >= a");
    return {theta, c.phi - pi / 2};
  }
  double lo = c.theta_lo(), hi = c.theta_hi();
  bool ok = false;
  switch (k) {
    case IotaCase::Line:
    case IotaCase::LowerLine: ok = theta > lo && theta < hi; break;
    case IotaCase::UpperPartial: ok = theta > lo && theta <= hi + 1e-15; break;
    case IotaCase::LowerPartial: ok = theta >= lo - 1e-15 && theta < hi; break;
    default: break;
  }
  if (!ok) throw domain_error("argument outside the iota curve range");
  double cs = std::cos(c.phi - theta);
  double m = c.b / cs;
  if (!(m > 0) || !std::isfinite(m)) throw domain_error("argument outside the iota curve range");
  return {m, theta};
}

double theta_profile(double phi_min, double phi_max, double a, double theta) {
  if (theta < phi_min) {
    double c = std::cos(phi_min - theta);
    return (phi_min - theta < pi / 2 && c > 0) ? a / c : std::numeric_limits<double>::infinity();
  }
  if (theta > phi_max) {
    double c = std::cos(theta - phi_max);
    return (theta - phi_max < pi / 2 && c > 0) ? a / c : std::numeric_limits<double>::infinity();
  }
  return a;
}

double RadiusProfile::operator()(double theta) const {
  return constant ? a : theta_profile(phi_min, phi_max, a, theta);
}

Sector::Sector(double lo, double hi, double a) : arg_min(lo), arg_max(hi) {
  if (!(lo < hi)) throw domain_error("sector needs arg_min < arg_max");
  radius.a = a;
  radius.constant = true;
}

Sector Sector::half_plane_domain(double phi_min, double phi_max, double a) {
  Sector s(phi_min - pi / 2, phi_max + pi / 2, a);
  s.radius.constant = false;
  s.radius.phi_min = phi_min;
  s.radius.phi_max = phi_max;
  return s;
}

bool sector_contains(const Sector& s, const CoverPoint& p) {
  if (!(p.argument > s.arg_min && p.argument < s.arg_max)) return false;
  return p.modulus >= s.radius(p.argument) * (1 - 1e-12);
}

}  // namespace atlas
