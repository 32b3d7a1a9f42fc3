#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "atlas/meromorphic.hpp"
#include "atlas/report.hpp"
#include "atlas/verify.hpp"

using namespace atlas;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ExponentPolynomialDiagonal pm1() { return ExponentPolynomialDiagonal::constant_diagonal({1.0, -1.0}); }

std::vector<Block> quartic_blocks() {
  std::vector<Block> b(3);
  b[0].lambda = {Complex(0, 0.25), Complex(0, 1)};
  b[1].lambda = {Complex(0, 0.25), 0.0};
  b[2].lambda = {Complex(0, -0.25), 0.0};
  return b;
}

ExponentPolynomialDiagonal quartic_z() { return ExponentPolynomialDiagonal({4.0, 1.0}, quartic_blocks()); }
ExponentPolynomialDiagonal quartic_x() { return ExponentPolynomialDiagonal({1.0, 0.25}, quartic_blocks()); }

Perturbation corner(double c) { return Perturbation::expression(2, {ExprTerm{0, 1, c, -2.0, 0}}); }

ColumnProblem upper_half(double a = 10.0) {
  ColumnProblem p;
  p.phi_lo = 0.0;
  p.phi_hi = pi;
  p.a = a;
  return p;
}

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

MeromorphicSystem exchange() {
  MeromorphicSystem s;
  s.r = 1;
  s.A = {m2(1, 0, 0, -1), m2(0, 1, 1, 0)};
  return s;
}

// line directions of the adequate sector of width pi whose midpoint is closest to 0
ColumnProblem central_problem(const ExponentPolynomialDiagonal& L) {
  auto f = stokes_rays(L);
  auto t = adequate_tuples(f, pi, k_window_for_directions(f, -2 * pi, 2 * pi));
  if (t.empty()) throw domain_error("no adequate sector");
  Sector best = sector_of_tuple(t[0], pi);
  for (auto& x : t) {
    Sector s = sector_of_tuple(x, pi);
    if (std::abs(s.mid()) < std::abs(best.mid())) best = s;
  }
  ColumnProblem p;
  p.phi_lo = best.arg_min + pi / 2;
  p.phi_hi = best.arg_max - pi / 2;
  p.a = 10.0;
  return p;
}

Outcome c1() {
  ProblemSpec ps = load_problem(std::string(SPEC_DIR) + "/quartic_z.json");
  auto rays = cmd_rays(ps).report;
  std::set<long> got;
  bool exact = true;
  for (auto& d : rays["directions"]) {
    double x = d["direction"].get<double>() / (pi / 4);
    long k = std::lround(x);
    if (std::abs(x - k) * (pi / 4) > 1e-12) exact = false;
    got.insert(k);
  }
  std::set<long> want;
  for (long k = -8; k <= 8; ++k) want.insert(k);
  bool dirs_ok = exact && got == want;

  auto sec = cmd_sectors(ps).report;
  std::set<long> ms;
  bool shape = true;
  for (auto& e : sec["sectors"]) {
    double lo = e["sector"]["arg_min"].get<double>(), hi = e["sector"]["arg_max"].get<double>();
    double m = (lo + pi / 4) / pi;
    long mi = std::lround(m);
    if (std::abs(lo - (-pi / 4 + mi * pi)) > 1e-12 || std::abs(hi - (pi / 4 + mi * pi)) > 1e-12) shape = false;
    ms.insert(mi);
  }
  bool sectors_ok = shape && ms == std::set<long>{-2, -1, 0, 1, 2} && sec["sectors"].size() == 5;
  return {dirs_ok && sectors_ok, std::to_string(got.size()) + " directions, " + std::to_string(sec["sectors"].size()) +
                                     " sectors ]-pi/4+m pi, pi/4+m pi["};
}

Outcome c2() {
  ProblemSpec ps = load_problem(std::string(SPEC_DIR) + "/no_adequate.json");
  auto rep = cmd_sectors(ps).report;
  StokesRayFamily f;
  f.rays = {RayLabel{-pi, 0.5, {}}, RayLabel{0.0, 0.5, {}}};
  auto t = adequate_tuples(f, pi, k_window_for_directions(f, -16 * pi, 16 * pi));
  return {rep["sectors"].empty() && t.empty(), "tuple list size " + std::to_string(t.size())};
}

double exactness(const ExponentPolynomialDiagonal& L, double& y_err) {
  auto sol = solve_fundamental(L, Perturbation::zero(L.dim()), central_problem(L));
  double z_err = 0.0;
  for (auto& c : sol.columns) {
    if (c.iterations > 1) return INFINITY;
    for (size_t k = 0; k < sol.sample_count; ++k) {
      CVector e = CVector::Zero(L.dim());
      e(c.j_o) = 1.0;
      z_err = std::max(z_err, (c.Z[k] - e).cwiseAbs().maxCoeff());
    }
  }
  auto fs = assemble_fundamental(sol);
  CVector q0 = L.q_entries(*sol.z0);
  y_err = 0.0;
  for (size_t k = 0; k < sol.sample_count; ++k) {
    CVector q = L.q_entries(fs.points[k]);
    for (int i = 0; i < L.dim(); ++i)
      for (int j = 0; j < L.dim(); ++j) {
        Complex want = i == j ? std::exp(q(i) - q0(i)) : Complex(0.0);
        y_err = std::max(y_err, std::abs(fs.Y[k](i, j) - want) / std::max(1.0, std::abs(want)));
      }
  }
  return z_err;
}

Outcome c3() {
  double ya = 0, yb = 0;
  double za = exactness(pm1(), ya);
  double zb = exactness(quartic_x(), yb);
  bool ok = za <= 1e-14 && zb <= 1e-14 && ya <= 1e-12 && yb <= 1e-12;
  return {ok, "|Z-e| " + num(std::max(za, zb)) + ", |Y-exp| " + num(std::max(ya, yb))};
}

struct CornerRun {
  AsymptoticSolution sol;
  ColumnProblem prob;
};

const CornerRun& corner_run() {
  static CornerRun run = [] {
    CornerRun r;
    r.prob = upper_half();
    r.sol = solve_fundamental(pm1(), corner(0.1), r.prob);
    return r;
  }();
  return run;
}

Outcome c4() {
  auto& r = corner_run();
  OracleOptions oo;
  oo.anchor_radius = 200.0;
  oo.ode.tol = 1e-10;
  auto rep = oracle_compare(pm1(), corner(0.1), r.sol, r.prob, SolverConfig{}, oo);
  std::set<double> args, radii;
  for (size_t k = 0; k < r.sol.sample_count; ++k) {
    args.insert(r.sol.points[k].argument);
    radii.insert(r.sol.points[k].modulus);
  }
  bool grid = args.size() == 5 && r.sol.sample_count == 60;
  return {grid && rep.max_deviation <= 1e-7,
          "max deviation " + num(rep.max_deviation) + " over " + std::to_string(r.sol.sample_count) + " samples"};
}

Outcome c5() {
  auto& r = corner_run();
  auto scan = residual_scan(r.sol, corner(0.1).decay().delta);
  bool ok = std::abs(scan.slope + 1.0) <= 0.1;
  return {ok, "fitted slope " + num(scan.slope) + ", expected -1 +- 0.1"};
}

Outcome c6() {
  auto& r = corner_run();
  auto st = uniqueness_stress(pm1(), corner(0.1), {0, 1}, r.prob, default_variants(SolverConfig{}));
  auto L = pm1();
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 0.1, -2.0, 0}, ExprTerm{1, 0, 0.2, -2.0, 0}});
  auto part = sign_partition(L, 1, 0.1, pi - 0.1);
  auto f = [](const CoverPoint& t) {
    CVector v(2);
    v << 1.0 / t.value(), 1.0 + 0.5 / t.value();
    return v;
  };
  QuadratureConfig q;
  CoverPoint z(30.0, 0.7);
  double line_dev = 0.0;
  CVector base = k_operator(L, R, part, WeightSign::Minus, f, z, 0.0, q) +
                 k_operator(L, R, part, WeightSign::Plus, f, z, 0.0, q);
  for (double tau : {-0.6, 0.4, 0.9}) {
    CVector v = k_operator(L, R, part, WeightSign::Minus, f, z, tau, q) +
                k_operator(L, R, part, WeightSign::Plus, f, z, tau, q);
    line_dev = std::max(line_dev, (v - base).cwiseAbs().maxCoeff());
  }
  bool ok = st.pass && st.max_deviation <= 1e-7 && st.ran.size() >= 3 && line_dev <= 10 * q.panel_tol;
  return {ok, std::to_string(st.ran.size()) + " variants, deviation " + num(st.max_deviation) + ", K line deviation " +
                  num(line_dev)};
}

Outcome c7() {
  auto L = pm1();
  auto R = corner(0.1);
  auto ss = subdominant_sector(subdominant_rays(L, 1, default_eta), -1);
  if (!ss.ok()) return {false, ss.reason};
  ColumnProblem p;
  p.phi_lo = ss.phi_interval->first;
  p.phi_hi = ss.phi_interval->second;
  p.a = 10.0;
  p.normalize_at_z0 = false;
  p.samples = {CoverPoint(50.0, 0.0), CoverPoint(50.0, 5 * pi / 4), CoverPoint(50.0, -5 * pi / 4)};
  auto sol = solve_subdominant(L, R, 1, p);
  const auto& Z = sol.columns[0].Z;
  OdeOptions oo;
  oo.tol = 1e-12;
  oo.gauge_entry = 1;
  double worst = 0.0;
  for (int s : {1, 2}) {
    ContourPath path(p.samples[0]);
    path.arc_to(p.samples[s].argument);
    auto res = integrate_ode(L, R, path, Z[0], oo);
    worst = std::max(worst, (res.at_nodes.back().col(0) - Z[s]).cwiseAbs().maxCoeff());
  }
  auto fd = formal_reduce_distinct(exchange(), std::nullopt, 2);
  Sector w = widen_subdominant_mero(exchange(), fd, 1, Sector(-pi / 2, pi / 2));
  bool wide = std::abs(w.arg_min + 3 * pi / 2) < 1e-12 && std::abs(w.arg_max - 3 * pi / 2) < 1e-12;
  return {worst < 1e-6 && wide, "oracle residual " + num(worst) + " at |z| = 50, widened ]" + num(w.arg_min / pi) +
                                     " pi, " + num(w.arg_max / pi) + " pi["};
}

Outcome c8() {
  auto fd = formal_reduce_distinct(exchange(), std::nullopt, 1);
  double f1 = (fd.F[1] - m2(0, -0.5, 0.5, 0)).cwiseAbs().maxCoeff();
  double j = fd.J.cwiseAbs().maxCoeff();
  auto g = gauge_identity_check(exchange(), fd);
  bool ok = f1 == 0.0 && j == 0.0 && g.radii.size() == 8 && g.coefficient_error <= 1e-10 && g.pointwise_error <= 1e-10;
  return {ok, "|F_1 - F_1*| " + num(f1) + ", |J| " + num(j) + ", identity error " +
                  num(std::max(g.coefficient_error, g.pointwise_error))};
}

Outcome c9() {
  double worst = 0.0;
  auto check = [&](const ExponentPolynomialDiagonal& L, const Perturbation& R, const ColumnProblem& p) {
    auto fs = assemble_fundamental(solve_fundamental(L, R, p));
    worst = std::max(worst, liouville_check(fs, L, R, 0));
    return fs;
  };
  auto fs = check(pm1(), corner(0.1), upper_half());
  check(quartic_x(), Perturbation::zero(3), central_problem(quartic_x()));
  auto Rfull = Perturbation::expression(
      2, {ExprTerm{0, 1, 0.2, -2.0, 0}, ExprTerm{1, 0, Complex(0.1, 0.05), -2.5, 0}, ExprTerm{0, 0, 0.3, -2.0, 0}});
  check(pm1(), Rfull, upper_half());
  fs.Z[fs.Z.size() / 2].col(1) *= 1.001;
  double control = liouville_check(fs, pm1(), corner(0.1), 0);
  return {worst <= 1e-8 && control > 1e-4, "max deviation " + num(worst) + ", corrupted control " + num(control)};
}

Outcome c10() {
  auto L = pm1();
  auto R = Perturbation::expression(2, {ExprTerm{0, 1, 5.0, -2.0, 0}, ExprTerm{1, 0, 5.0, -2.0, 0}});
  ColumnProblem p = upper_half(1.0);
  p.samples = {CoverPoint(400.0, 1.2), CoverPoint(900.0, 2.0)};
  auto sol = solve_column(L, R, 1, p);
  const auto& c = sol.columns[0];
  bool ratio_ok = c.contraction < 0.9 && c.measured_ratio <= 1.1 * c.contraction;
  auto m1 = decay_supremum(R, 0.1, pi - 0.1, 10.0);
  auto m2v = decay_supremum(R, 0.1, pi - 0.1, 20.0);
  double q = m2v.M_RaJ / m1.M_RaJ;
  bool halving = std::abs(q - 0.5) <= 0.02;
  return {ratio_ok && halving, "measured ratio " + num(c.measured_ratio) + ", 2CM " + num(c.contraction) + " after " +
                                   std::to_string(sol.a_doublings) + " doublings, M(2a)/M(a) " + num(q)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"geometry of the quartic system", c1}, {"no adequate tuple", c2},       {"exactness at R = 0", c3},
      {"oracle agreement", c4},                {"decay-rate law", c5},          {"uniqueness stress", c6},
      {"subdominant doubling", c7},            {"formal reduction", c8},        {"Liouville invariant", c9},
      {"contraction law", c10}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
