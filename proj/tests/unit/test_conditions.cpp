#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atlas/conditions.hpp"

using namespace atlas;
using doctest::Approx;

namespace {

ExponentPolynomialDiagonal pm1() { return ExponentPolynomialDiagonal::constant_diagonal({1.0, -1.0}); }

Perturbation corner(double c) { return Perturbation::expression(2, {ExprTerm{0, 1, c, -2.0, 0}}); }

}  // namespace

TEST_CASE("phase integral vanishes along vertical lines for diag(1,-1)") {
  auto L = pm1();
  OrientedLine line(0.0, 3.0);
  CoverPoint w = line.at_param(-5.0), z = line.at_param(7.0);
  CHECK(std::abs(phase_real_integral(L, 0, 1, line, w, z)) < 1e-12);
  CHECK(std::abs(phase_real_integral(L, 1, 0, line, w, z)) < 1e-12);
}

TEST_CASE("phase integral along a horizontal line") {
  auto L = pm1();
  OrientedLine line(pi / 2, 2.0);
  CoverPoint w = line.at_param(-1.0), z = line.at_param(3.0);
  CHECK(phase_real_integral(L, 0, 1, line, w, z) == Approx(8.0).epsilon(1e-12));
  CHECK(phase_real_integral(L, 1, 0, line, w, z) == Approx(-8.0).epsilon(1e-12));
  CHECK(phase_real_integral(L, 0, 0, line, w, z) == 0.0);
  CHECK_THROWS_AS(phase_real_integral(L, 0, 1, line, z, w), Error);
}

TEST_CASE("classification of the two orderings is complementary") {
  auto L = pm1();
  auto a = classify_pair(L, 0, 1, 0.0);
  auto b = classify_pair(L, 1, 0, 0.0);
  CHECK(a.classification == LClass::L2);
  CHECK(b.classification == LClass::L1);
  REQUIRE(a.witness);
  REQUIRE(b.witness);
}

TEST_CASE("classification agrees with the sign of the phase integral") {
  auto L = pm1();
  for (double tau : {-1.2, -0.4, 0.3, 1.1}) {
    OrientedLine line(tau + pi / 2, 1.5);
    CoverPoint w = line.at_param(-2.0), z = line.at_param(4.0);
    for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}}) {
      double re = phase_real_integral(L, i, j, line, w, z);
      auto c = classify_pair(L, i, j, tau);
      CHECK((c.classification == LClass::L1) == (re < 0));
    }
  }
}

TEST_CASE("identical blocks classify as L2") {
  auto L = ExponentPolynomialDiagonal::constant_diagonal({1.0, 1.0, -1.0});
  REQUIRE(L.block_count() == 2);
  CHECK(classify_pair(L, 0, 0, 0.3).classification == LClass::L2);
}

TEST_CASE("on-ray directions are rejected") {
  CHECK_THROWS_AS(classify_pair(pm1(), 0, 1, pi / 2), Error);
  CHECK_THROWS_AS(classify_pair(pm1(), 0, 1, -pi / 2), Error);
  CHECK_THROWS_AS(classify_tau_star(0.3, 1.0, 0.3), Error);
}

TEST_CASE("classify_tau_star matches classify_direction") {
  Complex lam = std::polar(1.0, 0.7);
  double ts = (3 * pi / 2 - 0.7) / 2.0;
  for (double tau : {0.1, 0.5, 1.9}) {
    auto a = classify_direction(lam, 2.0, tau);
    auto b = classify_tau_star(ts, 2.0, tau);
    CHECK(a.classification == b.classification);
  }
}

TEST_CASE("subdominant condition for diag(1,-1)") {
  auto L = pm1();
  CHECK(subdominant_condition(L, 1, 0.0));
  CHECK(subdominant_condition(L, 1, 0.9));
  CHECK_FALSE(subdominant_condition(L, 1, pi));
  CHECK_FALSE(subdominant_condition(L, 0, 0.0));
  CHECK(subdominant_condition(L, 0, pi));
}

TEST_CASE("good decay norm of c z^-2 is c pi / b") {
  for (double b : {1.0, 4.0, 10.0})
    for (double phi : {0.0, 0.7, -1.3}) CHECK(good_decay_norm(corner(0.1), OrientedLine(phi, b)) == Approx(0.1 * pi / b).epsilon(1e-9));
}

TEST_CASE("zero perturbation has zero norm") {
  CHECK(good_decay_norm(Perturbation::zero(2), OrientedLine(0.0, 1.0)) == 0.0);
  auto rep = decay_supremum(Perturbation::zero(2), -0.5, 0.5, 10.0);
  CHECK(rep.M_RaJ == 0.0);
}

TEST_CASE("non-integrable perturbation is rejected") {
  auto slow = Perturbation::black_box(
      2,
      [](const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) {
        out.resize(pts.size());
        for (size_t k = 0; k < pts.size(); ++k) {
          out[k] = CMatrix::Zero(2, 2);
          out[k](0, 1) = 1.0 / pts[k].value();
        }
      },
      DecayBound{1.0, 1.0});
  CHECK_THROWS_AS(good_decay_norm(slow, OrientedLine(0.0, 2.0)), Error);
}

TEST_CASE("decay supremum and its decrease with a") {
  auto R = corner(0.1);
  auto rep = decay_supremum(R, -pi / 4, pi / 4, 10.0);
  CHECK(rep.M_RaJ == Approx(0.1 * pi / 10).epsilon(1e-8));
  CHECK(rep.M_double_a == Approx(0.1 * pi / 20).epsilon(1e-8));
  auto rep2 = decay_supremum(R, -pi / 4, pi / 4, 20.0);
  CHECK(rep2.M_RaJ / rep.M_RaJ == Approx(0.5).epsilon(1e-8));
  CHECK(rep.delta == Approx(1.0));
}

TEST_CASE("iota norms are bounded by the line supremum up to a constant") {
  auto R = corner(0.1);
  auto rep = decay_supremum(R, -0.3, 0.3, 10.0, 3, {}, true);
  CHECK(rep.M_tilde > 0);
  CHECK(rep.M_tilde < 4 * rep.M_RaJ);
}
