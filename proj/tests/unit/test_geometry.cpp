#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atlas/geometry.hpp"

using namespace atlas;
using doctest::Approx;

TEST_CASE("line_point on the foot and off it") {
  OrientedLine l(0.0, 2.0);
  CoverPoint p = line_point(l, 0.0);
  CHECK(p.modulus == Approx(2.0).epsilon(1e-15));
  CHECK(p.argument == 0.0);
  p = line_point(l, pi / 3);
  CHECK(p.modulus == Approx(4.0).epsilon(1e-14));
  CHECK(p.argument == Approx(pi / 3));
}

TEST_CASE("line_point rejects the boundary directions") {
  OrientedLine l(pi / 2, 1.0);
  CHECK_THROWS_AS(line_point(l, 0.0), Error);
  CHECK_THROWS_AS(line_point(l, pi), Error);
}

TEST_CASE("line_order follows the +infinity end at phi - pi/2") {
  OrientedLine l(0.0, 1.0);
  CoverPoint lo = line_point(l, -pi / 4), hi = line_point(l, pi / 4);
  CHECK(line_order(l, hi, lo) == Ordering::Less);
  CHECK(line_order(l, lo, hi) == Ordering::Greater);
  CHECK(line_order(l, lo, lo) == Ordering::Equal);
  CHECK_THROWS_AS(line_order(l, CoverPoint(1.5, 0.0), lo), Error);
}

TEST_CASE("line order round trip") {
  OrientedLine l(0.7, 3.0);
  for (double t1 = -1.4; t1 < 1.4; t1 += 0.35)
    for (double t2 = -1.4; t2 < 1.4; t2 += 0.35) {
      auto o = line_order(l, line_point(l, 0.7 + t1), line_point(l, 0.7 + t2));
      if (std::abs(t1 - t2) < 1e-9)
        CHECK(o == Ordering::Equal);
      else
        CHECK(o == (t1 > t2 ? Ordering::Less : Ordering::Greater));
    }
}

TEST_CASE("param and point agree on a line") {
  OrientedLine l(-2.0, 5.0);
  for (double s : {-100.0, -3.0, 0.0, 2.5, 1e4}) CHECK(l.param_of(l.at_param(s)) == Approx(s).epsilon(1e-12));
  // the +infinity end sits at arg phi - pi/2
  CHECK(l.at_param(1e9).argument == Approx(-2.0 - pi / 2).epsilon(1e-8));
}

TEST_CASE("iota_point cases") {
  CHECK(iota_point(IotaCurve{0.0, 1.0, 2.0}, 0.0).modulus == Approx(2.0));
  CHECK(iota_point(IotaCurve{0.0, 1.0, 0.5}, -pi / 3).modulus == Approx(1.0).epsilon(1e-12));
  CHECK(iota_point(IotaCurve{0.0, 1.0, 0.5}, -pi / 2 + 1e-3).modulus == Approx(500.0).epsilon(1e-6));
  CHECK_THROWS_AS(iota_point(IotaCurve{0.0, 1.0, 0.5}, -pi / 3 + 0.05), Error);
  CHECK(iota_point(IotaCurve{0.0, 1.0, -2.0}, -pi).modulus == Approx(2.0).epsilon(1e-12));
  CoverPoint r = iota_point(IotaCurve{0.0, 1.0, 0.0}, 7.0);
  CHECK(r.modulus == 7.0);
  CHECK(r.argument == Approx(-pi / 2));
}

TEST_CASE("iota curves with b >= a are lines") {
  IotaCurve c{0.4, 1.0, 3.0};
  OrientedLine l(0.4, 3.0);
  for (double t = -1.0; t <= 1.0; t += 0.25) {
    CHECK(iota_point(c, 0.4 + t).modulus == Approx(line_point(l, 0.4 + t).modulus).epsilon(1e-14));
  }
  CHECK(c.kind() == IotaCase::Line);
  CHECK(IotaCurve{0.0, 1.0, 0.5}.kind() == IotaCase::UpperPartial);
  CHECK(IotaCurve{0.0, 1.0, 0.0}.kind() == IotaCase::Radial);
  CHECK(IotaCurve{0.0, 1.0, -0.5}.kind() == IotaCase::LowerPartial);
  CHECK(IotaCurve{0.0, 1.0, -1.0}.kind() == IotaCase::LowerLine);
}

TEST_CASE("sector_contains on H_{I,a}") {
  Sector s = Sector::half_plane_domain(0.0, pi / 2, 1.0);
  CHECK(sector_contains(s, CoverPoint(2.0, pi / 4)));
  CHECK_FALSE(sector_contains(s, CoverPoint(1.05, -pi / 4)));
  CHECK(sector_contains(s, CoverPoint(1.5, -pi / 4)));
  CHECK_FALSE(sector_contains(s, CoverPoint(100.0, s.arg_min)));
  CHECK_FALSE(sector_contains(s, CoverPoint(100.0, s.arg_max)));
}

TEST_CASE("boundary function is continuous and flat on I") {
  double a = 2.0;
  for (double t = -pi / 2 + 0.01; t < pi - 0.01; t += 0.01) {
    double v = theta_profile(0.0, pi / 2, a, t);
    CHECK(v >= a * (1 - 1e-15));
    if (t >= 0 && t <= pi / 2) CHECK(v == Approx(a));
    CHECK(std::abs(theta_profile(0.0, pi / 2, a, t + 1e-7) - v) < 1e-4 * v);
  }
  CHECK(theta_profile(0.0, pi / 2, 1.0, -pi / 4) == Approx(std::sqrt(2.0)));
}

TEST_CASE("transversal line through a point") {
  CHECK(transversal_line_through(CoverPoint(2.0, 0.0), 0.0).b == Approx(2.0));
  CHECK(transversal_line_through(CoverPoint(2.0, 0.0), pi / 3).b == Approx(1.0));
  CHECK_THROWS_AS(transversal_line_through(CoverPoint(2.0, 0.0), pi / 2), Error);
  for (double arg : {-7.0, 0.3, 12.0}) CHECK(transversal_line_through(CoverPoint(3.5, arg), arg).b == Approx(3.5));
}

TEST_CASE("arguments are never reduced") {
  CoverPoint p(1.0, 5 * pi);
  CHECK(p.argument == 5 * pi);
  CoverPoint q = shift(p, Complex(0.1, 0.0));
  CHECK(q.argument == Approx(5 * pi).epsilon(1e-2));
  CHECK(std::abs(q.argument - 5 * pi) < 0.2);
}
