#pragma once

#include <optional>

#include "atlas/common.hpp"

namespace atlas {

// Point of the universal cover of C*. The argument is never reduced mod 2pi.
struct CoverPoint {
  double modulus = 1.0;
  double argument = 0.0;

  CoverPoint() = default;
  CoverPoint(double m, double a);

  Complex value() const { return std::polar(modulus, argument); }
  Complex log() const { return {std::log(modulus), argument}; }
  Complex pow(double e) const { return std::exp(e * log()); }
  Complex pow(Complex e) const { return std::exp(e * log()); }

  // Lift a plane value to the sheet whose argument is closest to ref_arg.
  static CoverPoint lift(Complex z, double ref_arg);
};

// Point reached from p by the straight segment p -> p + w in the projected plane.
// The argument varies continuously along the segment, so the segment must avoid 0.
CoverPoint shift(const CoverPoint& p, Complex w);

enum class Ordering { Less, Equal, Greater };

// The line l_{phi,b}: |z| = b / cos(phi - arg z), oriented with direction tau = phi - pi/2.
// On a line with b > 0 the +infinity end is reached as arg z decreases to phi - pi/2.
struct OrientedLine {
  double phi = 0.0;
  double b = 1.0;

  OrientedLine() = default;
  OrientedLine(double phi_, double b_);

  double tau() const { return phi - pi / 2; }
  Complex direction() const { return std::polar(1.0, tau()); }
  CoverPoint foot() const { return {b, phi}; }
  // signed arclength from the foot, increasing toward +infinity
  double param_of_theta(double theta) const { return b * std::tan(phi - theta); }
  double theta_of_param(double s) const { return phi - std::atan2(s, b); }
  CoverPoint at_param(double s) const;
  double param_of(const CoverPoint& p) const;
};

CoverPoint line_point(const OrientedLine& line, double theta);
bool on_line(const OrientedLine& line, const CoverPoint& p, double rel_tol = 1e-12);
Ordering line_order(const OrientedLine& line, const CoverPoint& p, const CoverPoint& q);
OrientedLine transversal_line_through(const CoverPoint& p, double phi_prime);

enum class IotaCase { Line, UpperPartial, Radial, LowerPartial, LowerLine };

struct IotaCurve {
  double phi = 0.0;
  double a = 1.0;
  double b = 0.0;

  IotaCase kind() const;
  // open/closed angular range of the curve; for the radial case both ends equal phi - pi/2
  double theta_lo() const;
  double theta_hi() const;
  // junction with the circle |z| = a, for the partial cases
  std::optional<CoverPoint> junction() const;
};

// theta is the argument; in the radial case theta is read as a modulus >= a.
CoverPoint iota_point(const IotaCurve& curve, double theta);

// The boundary function of H_{I,a} for I = ]phi_min, phi_max[.
struct RadiusProfile {
  double a = 1.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  bool constant = true;

  double operator()(double theta) const;
};

struct Sector {
  double arg_min = 0.0;
  double arg_max = 0.0;
  RadiusProfile radius;

  Sector() = default;
  Sector(double lo, double hi, double a = 0.0);
  static Sector half_plane_domain(double phi_min, double phi_max, double a);

  double opening() const { return arg_max - arg_min; }
  double mid() const { return 0.5 * (arg_min + arg_max); }
};

bool sector_contains(const Sector& s, const CoverPoint& p);
double theta_profile(double phi_min, double phi_max, double a, double theta);

// Straight half-line or full line in the projected plane, carrying argument lifts.
// Points are origin + s*e^{i tau}; arguments are lifted continuously from origin.
struct StraightContour {
  CoverPoint origin;
  double tau = 0.0;

  Complex direction() const { return std::polar(1.0, tau); }
  CoverPoint at(double s) const { return shift(origin, s * direction()); }
};

}  // namespace atlas
