#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "atlas/spectral.hpp"

using namespace atlas;
using doctest::Approx;

namespace {

// z^4/4 diag(i, i, -i) + z diag(i, 0, 0)
ExponentPolynomialDiagonal quartic() {
  std::vector<Block> b(3);
  b[0].lambda = {Complex(0, 0.25), Complex(0, 1)};
  b[1].lambda = {Complex(0, 0.25), 0.0};
  b[2].lambda = {Complex(0, -0.25), 0.0};
  return ExponentPolynomialDiagonal({4.0, 1.0}, b);
}

ExponentPolynomialDiagonal pm1() { return ExponentPolynomialDiagonal::constant_diagonal({1.0, -1.0}); }

bool close(double a, double b) { return std::abs(a - b) < 1e-12; }

}  // namespace

TEST_CASE("leading_pair") {
  auto L = quartic();
  auto p = leading_pair(L, 0, 1);
  CHECK(p.k == 1);
  CHECK(std::abs(p.lambda - Complex(0, 1)) < 1e-15);
  CHECK(p.sigma == 1.0);
  auto q = leading_pair(L, 2, 0);
  CHECK(q.k == 0);
  CHECK(std::abs(q.lambda - Complex(0, -0.5)) < 1e-15);
  auto d = leading_pair(pm1(), 0, 1);
  CHECK(d.k == 0);
  CHECK(std::abs(d.lambda - 2.0) < 1e-15);
}

TEST_CASE("leading_pair is antisymmetric") {
  auto L = quartic();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      auto a = leading_pair(L, i, j), b = leading_pair(L, j, i);
      CHECK(a.k == b.k);
      CHECK(std::abs(a.lambda + b.lambda) < 1e-15);
    }
}

TEST_CASE("identical blocks are rejected") {
  std::vector<Block> b(2);
  b[0].lambda = {1.0};
  b[1].lambda = {1.0};
  CHECK_THROWS_AS(ExponentPolynomialDiagonal({1.0}, b), Error);
  CHECK_THROWS_AS(ExponentPolynomialDiagonal({0.5, 1.0}, {Block{1, {1.0, 0.0}}, Block{1, {2.0, 0.0}}}), Error);
}

TEST_CASE("stokes rays of the quartic system at eta = 2pi") {
  auto f = stokes_rays(quartic(), 2 * pi);
  REQUIRE(f.mu() == 2);
  CHECK(close(f.rays[0].tau, 0.0));
  CHECK(f.rays[0].sigma == 4.0);
  CHECK(close(f.rays[1].tau, 0.0));
  CHECK(f.rays[1].sigma == 1.0);
}

TEST_CASE("stokes rays of diag(1,-1)") {
  auto f = stokes_rays(pm1(), pi / 2);
  REQUIRE(f.mu() == 1);
  CHECK(close(f.rays[0].tau, 3 * pi / 2));
  CHECK(f.rays[0].sigma == 1.0);
  CHECK(f.generic);
}

TEST_CASE("eta on a ray is rejected") {
  CHECK_THROWS_AS(stokes_rays(pm1(), 0.0), Error);
  CHECK_FALSE(eta_is_generic(pm1(), pi));
  CHECK(eta_is_generic(pm1(), default_eta));
}

TEST_CASE("ray directions in a window") {
  auto f = stokes_rays(quartic(), 2 * pi);
  auto d = all_ray_directions(f, -pi / 2, pi / 2, true);
  std::multiset<std::pair<long, int>> got;
  for (auto& x : d) got.insert({std::lround(x.direction / (pi / 4)), x.rho});
  std::multiset<std::pair<long, int>> want{{-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}, {0, 1}};
  CHECK(got == want);
  auto open = all_ray_directions(f, -pi / 2, pi / 2);
  CHECK(open.size() == 4);

  auto g = stokes_rays(pm1(), pi / 2);
  auto e = all_ray_directions(g, 0.0, 2 * pi);
  REQUIRE(e.size() == 2);
  CHECK(close(e[0].direction, pi / 2));
  CHECK(close(e[1].direction, 3 * pi / 2));
  CHECK(all_ray_directions(g, 1.0, 1.0).empty());
}

TEST_CASE("every ray direction is a Stokes direction of some pair") {
  auto L = quartic();
  auto f = stokes_rays(L);
  for (auto& d : all_ray_directions(f, -2 * pi, 2 * pi, true)) {
    bool hit = false;
    for (int i = 0; i < 3 && !hit; ++i)
      for (int j = 0; j < 3 && !hit; ++j) {
        if (i == j) continue;
        auto p = leading_pair(L, i, j);
        Complex v = p.lambda * std::exp(Complex(0, p.sigma * d.direction));
        hit = std::abs(v.real()) < 1e-12 && v.imag() < 0 && p.sigma == f.rays[d.rho].sigma;
      }
    CHECK(hit);
  }
}

TEST_CASE("directions do not depend on eta") {
  auto L = quartic();
  auto a = all_ray_directions(stokes_rays(L, default_eta), -2 * pi, 2 * pi);
  auto b = all_ray_directions(stokes_rays(L, default_eta + pi), -2 * pi, 2 * pi);
  std::multiset<long> x, y;
  for (auto& d : a) x.insert(std::lround(d.direction * 1e9));
  for (auto& d : b) y.insert(std::lround(d.direction * 1e9));
  CHECK(x == y);
}

TEST_CASE("adequate tuples of width pi for diag(1,-1)") {
  auto f = stokes_rays(pm1(), pi / 2);
  KWindow w{{0}, {0}};
  auto t = adequate_tuples(f, pi, w);
  REQUIRE(t.size() == 1);
  CHECK(close(t[0].a, pi / 2));
  CHECK(close(t[0].b, 3 * pi / 2));
  Sector s = sector_of_tuple(t[0], pi);
  CHECK(close(s.arg_min, pi / 2));
  CHECK(close(s.arg_max, 5 * pi / 2));
}

TEST_CASE("adequate tuples of width pi/4 for the quartic system") {
  auto f = stokes_rays(quartic(), 2 * pi);
  auto t = adequate_tuples(f, pi / 4, k_window_for_directions(f, -pi, pi));
  bool base = false;
  for (auto& x : t) {
    // the selected directions fit in an arc shorter than the width
    double lo = 1e9, hi = -1e9;
    for (size_t r = 0; r < x.k.size(); ++r) {
      double d = f.rays[r].tau + x.k[r] * pi / f.rays[r].sigma;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(hi - lo < pi / 4);
    CHECK(std::abs(std::remainder(x.b, pi)) < 1e-12);
    if (close(x.a, -pi / 4) && close(x.b, 0.0)) {
      base = true;
      Sector s = sector_of_tuple(x, pi / 4);
      CHECK(close(s.arg_min, -pi / 4));
      CHECK(close(s.arg_max, pi / 4));
    }
  }
  CHECK(base);
}

TEST_CASE("no adequate tuple for two incompatible half-exponent rays") {
  StokesRayFamily f;
  f.rays = {RayLabel{-pi, 0.5, {}}, RayLabel{0.0, 0.5, {}}};
  auto t = adequate_tuples(f, pi, k_window_for_directions(f, -8 * pi, 8 * pi));
  CHECK(t.empty());
}

TEST_CASE("generic check") {
  CHECK(generic_check(pm1()));
  CHECK_FALSE(generic_check(quartic()));
  CHECK(generic_check(ExponentPolynomialDiagonal::constant_diagonal({3.0})));
}

TEST_CASE("generic sectors") {
  auto f = stokes_rays(pm1(), pi / 2);
  Sector s = generic_sector(f, 0);
  CHECK(close(s.arg_min, pi / 2));
  CHECK(close(s.arg_max, 5 * pi / 2));
  Sector t = generic_sector(f, f.mu());
  CHECK(close(t.arg_min - s.arg_min, pi));
  CHECK(close(t.arg_max - s.arg_max, pi));
  CHECK_THROWS_AS(generic_sector(stokes_rays(quartic()), 0), Error);
}

TEST_CASE("subdominant rays and sectors for diag(1,-1)") {
  auto L = pm1();
  auto f = subdominant_rays(L, 1, pi / 2);
  REQUIRE(f.mu() == 1);
  CHECK(close(f.rays[0].tau, 3 * pi / 2));
  auto s = subdominant_sector(f, -1);
  REQUIRE(s.ok());
  CHECK(close(s.sector->arg_min, -3 * pi / 2));
  CHECK(close(s.sector->arg_max, 3 * pi / 2));
  auto s0 = subdominant_sector(f, 0);
  CHECK(close(s0.sector->arg_min - s.sector->arg_min, 2 * pi));
  CHECK_THROWS_AS(subdominant_rays(L, 2, pi / 2), Error);
}

TEST_CASE("subdominant rays of the quartic system") {
  auto f = subdominant_rays(quartic(), 2, default_eta);
  for (auto& r : f.rays) {
    CHECK(r.sigma == 4.0);
    for (auto& p : r.pairs) CHECK(p.second == 2);
  }
  CHECK(f.mu() >= 1);
}

TEST_CASE("subdominant sector rejects a spread of pi") {
  StokesRayFamily f;
  f.generic = true;
  f.leading_sigma = 1.0;
  f.rays = {RayLabel{0.0, 1.0, {}}, RayLabel{pi, 1.0, {}}};
  auto s = subdominant_sector(f, 0);
  CHECK_FALSE(s.ok());
  CHECK_FALSE(s.reason.empty());
}

TEST_CASE("primitive and derivative agree") {
  auto L = quartic();
  CoverPoint z(1.7, 0.4);
  for (int b = 0; b < 3; ++b) {
    Complex h = 1e-5 * std::polar(1.0, 0.4);
    CoverPoint zp = shift(z, h), zm = shift(z, -h);
    Complex d = (L.q(b, zp) - L.q(b, zm)) / (2.0 * h);
    CHECK(std::abs(d - L.lambda(b, z)) < 1e-6 * std::abs(L.lambda(b, z)));
  }
}
