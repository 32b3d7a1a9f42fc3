#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atlas/solver.hpp"

using namespace atlas;
using doctest::Approx;

namespace {

ExponentPolynomialDiagonal pm1() { return ExponentPolynomialDiagonal::constant_diagonal({1.0, -1.0}); }

Perturbation corner(double c) { return Perturbation::expression(2, {ExprTerm{0, 1, c, -2.0, 0}}); }

// Z_0 for column 1 of diag(1,-1) + c z^-2 E_01: -c int_0^inf e^{-2s} (z+s)^-2 ds
Complex corner_exact(double c, const CoverPoint& z) {
  Complex zv = z.value();
  auto f = [&](double u) -> Complex {
    double s = u / (1 - u);
    return std::exp(-2 * s) / ((zv + s) * (zv + s)) / ((1 - u) * (1 - u));
  };
  return -c * integrate_gk(f, 0.0, 1.0, 1e-300, 1e-13, 4000).value;
}

ColumnProblem upper_half(std::vector<CoverPoint> samples = {}) {
  ColumnProblem p;
  p.phi_lo = 0.0;
  p.phi_hi = pi;
  p.a = 10.0;
  p.samples = std::move(samples);
  p.normalize_at_z0 = false;
  return p;
}

}  // namespace

TEST_CASE("weights") {
  auto L = pm1();
  CoverPoint t(1.0, 0.0), z(2.0, 0.0);
  CHECK(std::abs(weight(L, 1, 0, t, z) - std::exp(2.0)) < 1e-12);
  CHECK(std::abs(weight(L, 0, 1, t, z) - std::exp(-2.0)) < 1e-12);
  CHECK(weight(L, 1, 1, t, z) == Complex(1.0));
}

TEST_CASE("sign partition and the zero branch of the weight") {
  auto L = pm1();
  auto part = sign_partition(L, 1, 0.1, pi - 0.1);
  CHECK(part.minus_set == std::vector<int>{0, 1});
  CHECK(part.plus_set.empty());
  CoverPoint t(1.0, 0.0), z(2.0, 0.0);
  CHECK(weight(L, part, 0, WeightSign::Plus, t, z) == Complex(0.0));
  CHECK(std::abs(weight(L, part, 0, WeightSign::Minus, t, z) - std::exp(2.0)) < 1e-12);
  auto other = sign_partition(L, 0, 0.1, pi - 0.1);
  CHECK(other.plus_set == std::vector<int>{1});
  CHECK(other.minus_set == std::vector<int>{0});
  CHECK_THROWS_AS(sign_partition(L, 1, -0.5, 0.5), Error);
  CHECK_THROWS_AS(sign_partition(L, 2, 0.1, 0.2), Error);
}

TEST_CASE("weight constant is finite on a closed subinterval") {
  auto L = pm1();
  auto part = sign_partition(L, 1, 0.3, pi - 0.3);
  double C = weight_constant(L, part, 0.3, pi - 0.3, 10.0);
  CHECK(std::isfinite(C));
  CHECK(C >= 1.0);
}

TEST_CASE("zero perturbation gives the unit columns in one iteration") {
  auto sol = solve_fundamental(pm1(), Perturbation::zero(2), upper_half());
  REQUIRE(sol.columns.size() == 2);
  for (auto& c : sol.columns) {
    CHECK(c.iterations <= 1);
    for (size_t k = 0; k < sol.sample_count; ++k) {
      CVector e = CVector::Zero(2);
      e(c.j_o) = 1.0;
      CHECK((c.Z[k] - e).norm() == 0.0);
    }
  }
}

TEST_CASE("K operators vanish for R = 0 and split a triangular perturbation") {
  auto L = pm1();
  auto part = sign_partition(L, 1, 0.1, pi - 0.1);
  auto e1 = [](const CoverPoint&) {
    CVector v = CVector::Zero(2);
    v(1) = 1.0;
    return v;
  };
  CoverPoint z(20.0, 0.4);
  OrientedLine line(pi / 2, z.modulus * std::cos(pi / 2 - z.argument));
  CHECK(k_plus(L, Perturbation::zero(2), part, e1, z, line).norm() == 0.0);
  auto R = corner(0.5);
  CVector kp = k_plus(L, R, part, e1, z, line);
  CVector km = k_minus(L, R, part, e1, z, line);
  CHECK(kp.norm() < 1e-15);
  CHECK(std::abs(km(0) - corner_exact(0.5, z)) < 1e-10 * std::abs(km(0)));
  CVector ko = k_operator(L, R, part, WeightSign::Minus, e1, z, line.tau());
  CHECK((ko - km).norm() < 1e-12 * km.norm());
}

TEST_CASE("triangular perturbation matches the closed integral") {
  std::vector<CoverPoint> pts{{15.0, 1.0}, {30.0, pi / 2}, {60.0, 2.2}, {12.0, 0.6}};
  auto R = corner(0.5);
  auto sol = solve_column(pm1(), R, 1, upper_half(pts));
  auto& c = sol.columns[0];
  CHECK(c.contraction < 0.9);
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(c.Z[k](1) - 1.0) < 1e-13);
    CHECK(std::abs(c.Z[k](0) - corner_exact(0.5, pts[k])) < 1e-9);
  }
}

TEST_CASE("solution does not depend on the line direction") {
  std::vector<CoverPoint> pts{{15.0, 1.0}, {40.0, 1.9}};
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 0.4, -2.0, 0}, ExprTerm{1, 0, Complex(0.2, 0.1), -2.5, 0}});
  SolverConfig a, b;
  b.line_rotation = 0.3;
  auto sa = solve_column(pm1(), R, 1, upper_half(pts), a);
  auto sb = solve_column(pm1(), R, 1, upper_half(pts), b);
  for (size_t k = 0; k < pts.size(); ++k) CHECK((sa.columns[0].Z[k] - sb.columns[0].Z[k]).norm() < 1e-9);
}

TEST_CASE("differential check") {
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 0.4, -2.0, 0}, ExprTerm{1, 0, 0.3, -2.0, 0}});
  double res = differential_check(pm1(), R, 1, upper_half(), CoverPoint(25.0, 1.3), 0.05);
  CHECK(res < 1e-7);
}

TEST_CASE("connection matrix of a solution with itself is the identity") {
  auto sol = solve_fundamental(pm1(), corner(0.2), upper_half({{15.0, 1.0}, {30.0, 1.6}, {45.0, 2.1}}));
  auto cm = connection_matrix(sol, sol);
  CHECK((cm.C - CMatrix::Identity(2, 2)).norm() < 1e-10);
  CHECK(cm.residual < 1e-10);
}

TEST_CASE("no contraction after the doubling budget") {
  SolverConfig cfg;
  cfg.max_a_doublings = 0;
  CHECK_THROWS_AS(solve_column(pm1(), corner(50.0), 1, upper_half(), cfg), Error);
}

TEST_CASE("a grows until the contraction bound holds") {
  auto sol = solve_column(pm1(), corner(5.0), 1, upper_half({{200.0, 1.5}}));
  CHECK(sol.a_doublings >= 1);
  CHECK(sol.columns[0].contraction < 0.9);
}
