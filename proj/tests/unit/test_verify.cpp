#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atlas/verify.hpp"

using namespace atlas;
using doctest::Approx;

namespace {

ExponentPolynomialDiagonal pm1() { return ExponentPolynomialDiagonal::constant_diagonal({1.0, -1.0}); }

Perturbation corner(double c) { return Perturbation::expression(2, {ExprTerm{0, 1, c, -2.0, 0}}); }

CMatrix exact_pm1(const CoverPoint& z, const CoverPoint& z0) {
  Complex d = z.value() - z0.value();
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(d);
  m(1, 1) = std::exp(-d);
  return m;
}

ContourPath sample_path() {
  ContourPath p(CoverPoint(1.0, 0.0));
  p.line_to(CoverPoint(3.0, 0.5)).arc_to(1.4).line_to(CoverPoint(0.8, 2.0));
  return p;
}

std::vector<CoverPoint> grid(std::vector<double> args, std::vector<double> radii) {
  std::vector<CoverPoint> pts;
  for (double a : args)
    for (double r : radii) pts.emplace_back(r, a);
  return pts;
}

}  // namespace

TEST_CASE("ODE integration reproduces exponentials along lines and arcs") {
  auto path = sample_path();
  auto res = integrate_ode(pm1(), Perturbation::zero(2), path, CMatrix::Identity(2, 2));
  auto nodes = path.nodes();
  REQUIRE(res.at_nodes.size() == nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    CMatrix ex = exact_pm1(nodes[k], nodes[0]);
    CHECK((res.at_nodes[k] - ex).norm() < 1e-8 * ex.norm());
  }
  CHECK(res.steps > 0);
}

TEST_CASE("arc keeps the modulus and lifts the argument") {
  ContourPath p(CoverPoint(2.0, 0.0));
  p.arc_to(7.0);
  CHECK(p.end().modulus == 2.0);
  CHECK(p.end().argument == 7.0);
  CHECK(p.segments()[0].at(0.5).modulus == Approx(2.0));
}

TEST_CASE("reversed path returns to the start value") {
  auto path = sample_path();
  auto R = corner(0.3);
  auto fwd = integrate_ode(pm1(), R, path, CMatrix::Identity(2, 2));
  auto back = integrate_ode(pm1(), R, path.reversed(), fwd.at_nodes.back());
  CHECK((back.at_nodes.back() - CMatrix::Identity(2, 2)).norm() < 1e-8);
  CHECK(path.reversed().end().argument == path.start().argument);
}

TEST_CASE("tolerances agree") {
  auto path = sample_path();
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 0.3, -2.0, 0}, ExprTerm{1, 0, 0.2, -1.5, 0}});
  OdeOptions a, b;
  a.tol = 1e-8;
  b.tol = 1e-12;
  auto ra = integrate_ode(pm1(), R, path, CMatrix::Identity(2, 2), a);
  auto rb = integrate_ode(pm1(), R, path, CMatrix::Identity(2, 2), b);
  CHECK((ra.at_nodes.back() - rb.at_nodes.back()).norm() < 1e-6 * rb.at_nodes.back().norm());
  CHECK(rb.steps > ra.steps);
}

TEST_CASE("gauge entry removes the exponential of that entry") {
  auto path = sample_path();
  OdeOptions o;
  o.gauge_entry = 0;
  CMatrix Y0 = CMatrix::Identity(2, 2);
  auto res = integrate_ode(pm1(), Perturbation::zero(2), path, Y0, o);
  CHECK(std::abs(res.at_nodes.back()(0, 0) - 1.0) < 1e-9);
}

TEST_CASE("residual scan statuses") {
  std::vector<double> radii{10, 20, 40, 80, 160, 320};
  ResidualRay inv{0.0, radii, {}};
  ResidualRay inv2{0.0, radii, {}};
  ResidualRay zero{0.0, radii, std::vector<double>(radii.size(), 0.0)};
  for (double r : radii) {
    inv.residuals.push_back(0.3 / r);
    inv2.residuals.push_back(0.3 / (r * r));
  }
  auto p = residual_scan(std::vector<ResidualRay>{inv}, 1.0);
  CHECK(p.status == ScanStatus::Pass);
  CHECK(p.slope == Approx(-1.0).epsilon(1e-9));
  auto f = residual_scan(std::vector<ResidualRay>{inv2}, 1.0);
  CHECK(f.status == ScanStatus::Fail);
  CHECK(f.slope == Approx(-2.0).epsilon(1e-9));
  auto s = residual_scan(std::vector<ResidualRay>{zero}, 1.0);
  CHECK(s.status == ScanStatus::Skipped);
  CHECK_FALSE(s.reason.empty());
}

TEST_CASE("Liouville identity holds and detects a corrupted column") {
  ColumnProblem prob;
  prob.phi_lo = 0.0;
  prob.phi_hi = pi;
  prob.a = 10.0;
  prob.samples = grid({0.3, 1.5, 2.7}, {15.0, 30.0, 60.0});
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 0.2, -2.0, 0}, ExprTerm{1, 0, 0.1, -2.0, 0}, ExprTerm{0, 0, 0.3, -2.0, 0}});
  auto sol = solve_fundamental(pm1(), R, prob);
  auto fs = assemble_fundamental(sol);
  CHECK(liouville_check(fs, pm1(), R, 0) < 1e-8);
  fs.Z[4].col(1) *= 1.001;
  CHECK(liouville_check(fs, pm1(), R, 0) > 1e-4);
}

TEST_CASE("oracle agrees with the solver") {
  ColumnProblem prob;
  prob.phi_lo = 0.0;
  prob.phi_hi = pi;
  prob.a = 10.0;
  prob.samples = grid({0.4, 1.6}, {20.0, 50.0, 120.0});
  auto R = corner(0.1);
  auto sol = solve_fundamental(pm1(), R, prob);
  auto rep = oracle_compare(pm1(), R, sol, prob, SolverConfig{});
  CHECK(rep.max_deviation < 1e-7);
  CHECK_FALSE(rep.deviations.empty());
}

TEST_CASE("default stress variants") {
  auto v = default_variants(SolverConfig{});
  CHECK(v.size() == 4);
  CHECK(v[0].name == "base");
}

TEST_CASE("subdominant column is dominated") {
  auto L = pm1();
  auto R = corner(0.1);
  auto rays = subdominant_rays(L, 1, default_eta);
  auto ss = subdominant_sector(rays, -1);
  REQUIRE(ss.ok());
  ColumnProblem sp;
  sp.phi_lo = ss.phi_interval->first;
  sp.phi_hi = ss.phi_interval->second;
  sp.a = 10.0;
  sp.samples = grid({0.2, 1.0}, {20.0, 40.0, 80.0});
  auto sub = solve_subdominant(L, R, 1, sp);
  ColumnProblem fp = sp;
  fp.phi_lo = 0.0;
  fp.phi_hi = pi;
  auto full = solve_fundamental(L, R, fp);
  auto dom = subdominant_domination_check(sub, full, 0);
  CHECK(dom.pass);
  CHECK(dom.rays.size() == 2);
}
