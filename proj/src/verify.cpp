#include "atlas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace atlas {

CoverPoint PathSegment::at(double t) const {
  if (kind == Kind::Arc) return {from.modulus, from.argument + t * (to.argument - from.argument)};
  return shift(from, t * (to.value() - from.value()));
}

Complex PathSegment::velocity(double t) const {
  if (kind == Kind::Arc) return I * (to.argument - from.argument) * at(t).value();
  return to.value() - from.value();
}

ContourPath::ContourPath(const CoverPoint& start) : start_(start) {}

ContourPath& ContourPath::line_to(const CoverPoint& p) {
  PathSegment s;
  s.kind = PathSegment::Kind::Line;
  s.from = end();
  s.to = p;
  CoverPoint reached = s.at(1.0);
  if (std::abs(reached.argument - p.argument) > 1e-9 * std::max(1.0, std::abs(p.argument)))
    throw domain_error("straight segment does not reach the requested sheet");
  segs_.push_back(s);
  return *this;
}

ContourPath& ContourPath::arc_to(double argument) {
  PathSegment s;
  s.kind = PathSegment::Kind::Arc;
  s.from = end();
  s.to = CoverPoint(s.from.modulus, argument);
  segs_.push_back(s);
  return *this;
}

ContourPath ContourPath::reversed() const {
  ContourPath r(end());
  for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
    PathSegment s = *it;
    std::swap(s.from, s.to);
    r.segs_.push_back(s);
  }
  return r;
}

std::vector<CoverPoint> ContourPath::nodes() const {
  std::vector<CoverPoint> out{start_};
  for (auto& s : segs_) out.push_back(s.to);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeResult integrate_ode(const ExponentPolynomialDiagonal& L, const Perturbation& R, const ContourPath& path,
                        const CMatrix& Y0, const OdeOptions& opt) {
  if (Y0.rows() != L.dim()) throw input_error("initial value has the wrong dimension");
  OdeResult res;
  res.at_nodes.push_back(Y0);
  CMatrix y = Y0;
  for (const auto& seg : path.segments()) {
    auto rhs = [&](double t) {
      CoverPoint z = seg.at(t);
      CMatrix A = R(z);
      CVector lam = L.diagonal(z);
      Complex g = opt.gauge_entry ? lam(*opt.gauge_entry) : Complex(0.0);
      for (int i = 0; i < L.dim(); ++i) A(i, i) += lam(i) - g;
      return CMatrix(A * seg.velocity(t));
    };
    double t = 0.0, h = opt.h0;
    CMatrix k1 = rhs(0.0) * y;
    while (t < 1.0) {
      if (++res.steps > opt.max_steps) throw verification_error("ODE integration exceeded its step budget");
      h = std::min(h, 1.0 - t);
      if (h < 1e-14) throw verification_error("ODE step size underflow");
      CMatrix k2 = rhs(t + c2 * h) * (y + h * a21 * k1);
      CMatrix k3 = rhs(t + c3 * h) * (y + h * (a31 * k1 + a32 * k2));
      CMatrix k4 = rhs(t + c4 * h) * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      CMatrix k5 = rhs(t + c5 * h) * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      CMatrix k6 = rhs(t + h) * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      CMatrix yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      CMatrix k7 = rhs(t + h) * yn;
      CMatrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        double sc = opt.tol * (1.0 + std::max(std::abs(y.data()[i]), std::abs(yn.data()[i])));
        en = std::max(en, std::abs(err.data()[i]) / sc);
      }
      if (!std::isfinite(en)) throw verification_error("ODE integration overflow");
      if (en <= 1.0) {
        t += h;
        y = yn;
        k1 = k7;
      } else {
        ++res.rejected;
      }
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    }
    res.at_nodes.push_back(y);
  }
  return res;
}

const char* to_string(ScanStatus s) {
  switch (s) {
    case ScanStatus::Pass: return "pass";
    case ScanStatus::Fail: return "fail";
    case ScanStatus::Skipped: return "skipped";
    case ScanStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// sample indices grouped by argument, each group sorted by modulus
std::vector<std::vector<size_t>> rays_of(const std::vector<CoverPoint>& pts, size_t count) {
  std::vector<std::vector<size_t>> out;
  std::vector<double> args;
  for (size_t k = 0; k < count; ++k) {
    size_t r = 0;
    while (r < args.size() && std::abs(args[r] - pts[k].argument) > 1e-12) ++r;
    if (r == args.size()) {
      args.push_back(pts[k].argument);
      out.emplace_back();
    }
    out[r].push_back(k);
  }
  for (auto& g : out)
    std::sort(g.begin(), g.end(), [&](size_t a, size_t b) { return pts[a].modulus < pts[b].modulus; });
  return out;
}

}  // namespace

ResidualReport residual_scan(const std::vector<ResidualRay>& in, double expected_delta, const ScanOptions& opt) {
  ResidualReport rep;
  rep.rays = in;
  rep.expected_delta = expected_delta;
  rep.slope_tolerance = opt.slope_tolerance;
  bool any_fit = false, all_ok = true, enough = true;
  double sum = 0.0;
  int fitted = 0;
  std::ostringstream why;
  for (auto& ray : rep.rays) {
    for (size_t i = 1; i < ray.radii.size(); ++i)
      if (!(ray.radii[i] > ray.radii[i - 1])) throw input_error("radii must be strictly increasing");
    if (ray.radii.size() < 3) {
      enough = false;
      continue;
    }
    for (size_t i = 2; i < ray.residuals.size(); ++i)
      if (ray.residuals[i] > ray.residuals[i - 1] * (1 + 1e-9) + opt.monotone_slack) ray.monotone = false;
    size_t m = ray.radii.size(), first = m - (2 * m + 2) / 3;
    std::vector<double> x, y;
    for (size_t i = first; i < m; ++i) {
      if (ray.residuals[i] <= opt.negligible) continue;
      x.push_back(std::log(ray.radii[i]));
      y.push_back(std::log(ray.residuals[i]));
    }
    if (x.size() < 3) continue;
    any_fit = true;
    ray.slope = ols_slope(x, y);
    sum += ray.slope;
    ++fitted;
    bool ok = std::abs(ray.slope + expected_delta) <= opt.slope_tolerance && ray.monotone;
    if (!ok) {
      all_ok = false;
      why << "ray " << ray.argument << ": slope " << ray.slope << (ray.monotone ? "" : ", not monotone") << "; ";
    }
  }
  if (fitted) rep.slope = sum / fitted;
  if (!enough && !any_fit) {
    throw input_error("insufficient samples for a residual scan");
  } else if (!any_fit) {
    rep.status = ScanStatus::Skipped;
    rep.reason = "residuals at rounding level";
  } else if (expected_delta < 0.1) {
    rep.status = ScanStatus::Inconclusive;
    rep.reason = "decay exponent below 0.1 needs radii over several decades";
  } else {
    rep.status = all_ok ? ScanStatus::Pass : ScanStatus::Fail;
    rep.reason = why.str();
  }
  return rep;
}

ResidualReport residual_scan(const AsymptoticSolution& sol, double expected_delta, const ScanOptions& opt) {
  std::vector<ResidualRay> rays;
  for (auto& g : rays_of(sol.points, sol.sample_count)) {
    ResidualRay r;
    r.argument = sol.points[g[0]].argument;
    for (size_t k : g) {
      double res = 0.0;
      for (auto& c : sol.columns) {
        CVector d = c.Z[k];
        d(c.j_o) -= 1.0;
        res = std::max(res, sup_norm(d));
      }
      r.radii.push_back(sol.points[k].modulus);
      r.residuals.push_back(res);
    }
    rays.push_back(std::move(r));
  }
  return residual_scan(rays, expected_delta, opt);
}

namespace {

Complex log_det(const CMatrix& m) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const CMatrix& U = lu.matrixLU();
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < U.rows(); ++i) s += std::log(U(i, i));
  // permutation sign
  if (lu.permutationP().determinant() < 0) s += Complex(0.0, pi);
  return s;
}

Complex trace_integral(const Perturbation& R, const ContourPath& path, const QuadratureConfig& q) {
  Complex total = 0.0;
  if (R.is_zero()) return total;
  for (auto& seg : path.segments()) {
    auto f = [&](double t) { return R.trace(seg.at(t)) * seg.velocity(t); };
    total += integrate_gk(f, 0.0, 1.0, 1e-15, 1e-14, q.max_panels).value;
  }
  return total;
}

}  // namespace

double liouville_check(const FundamentalSamples& fs, const ExponentPolynomialDiagonal& L, const Perturbation& R,
                       size_t base, const QuadratureConfig& q) {
  const CoverPoint& z0 = fs.points.at(base);
  Complex ld0 = log_det(fs.Z[base]) + fs.E[base].sum();
  double worst = 0.0;
  for (size_t k = 0; k < fs.points.size(); ++k) {
    if (k == base) continue;
    const CoverPoint& z = fs.points[k];
    ContourPath path(z0);
    if (z.modulus != z0.modulus) path.line_to(CoverPoint(z.modulus, z0.argument));
    if (z.argument != z0.argument) path.arc_to(z.argument);
    Complex tr = trace_integral(R, path, q);
    for (int i = 0; i < L.dim(); ++i) tr += L.q(L.block_of(i), z) - L.q(L.block_of(i), z0);
    Complex ld = log_det(fs.Z[k]) + fs.E[k].sum();
    double dev = std::abs(std::exp(ld - ld0 - tr) - 1.0);
    if (!std::isfinite(dev)) dev = INFINITY;
    worst = std::max(worst, dev);
  }
  return worst;
}

OracleReport oracle_compare(const ExponentPolynomialDiagonal& L, const Perturbation& R, const AsymptoticSolution& sol,
                            const ColumnProblem& prob, const SolverConfig& cfg, const OracleOptions& opt) {
  OracleReport rep;
  auto rays = rays_of(sol.points, sol.sample_count);
  // anchors per ray and column frame
  struct Plan {
    size_t ray;
    CoverPoint anchor;
    bool inward;
  };
  std::vector<int> cols;
  for (auto& c : sol.columns) cols.push_back(c.j_o);
  ColumnProblem ap = prob;
  ap.samples.clear();
  ap.normalize_at_z0 = false;
  std::vector<std::vector<Plan>> plans(cols.size());
  for (size_t ci = 0; ci < cols.size(); ++ci) {
    int j = cols[ci];
    for (size_t r = 0; r < rays.size(); ++r) {
      const auto& g = rays[r];
      double th = sol.points[g[0]].argument;
      double rmax = sol.points[g.back()].modulus, rmin = sol.points[g.front()].modulus;
      CoverPoint probe(std::max(rmax, opt.anchor_radius), th);
      CVector lam = L.diagonal(probe);
      bool grow = false, decay = false;
      for (int i = 0; i < L.dim(); ++i) {
        if (L.block_of(i) == L.block_of(j)) continue;
        double rate = std::real((lam(i) - lam(j)) * std::polar(1.0, th));
        double scale = std::abs(lam(i) - lam(j)) * 1e-9;
        if (rate > scale) grow = true;
        if (rate < -scale) decay = true;
      }
      Plan p{r, CoverPoint(opt.anchor_radius, th), true};
      if (grow && !decay) {
        p.anchor = CoverPoint(std::max(opt.anchor_radius, rmax), th);
      } else if (decay && !grow) {
        p.anchor = CoverPoint(rmin, th);
        p.inward = false;
      } else if (grow && decay) {
        rep.notes.push_back("mixed growth on ray " + std::to_string(th) + "; anchored at the anchor radius");
      }
      plans[ci].push_back(p);
      ap.samples.push_back(p.anchor);
    }
  }
  auto anchors = solve_columns(L, R, cols, ap, cfg);
  size_t idx = 0;
  for (size_t ci = 0; ci < cols.size(); ++ci) {
    OdeOptions o = opt.ode;
    o.gauge_entry = cols[ci];
    for (auto& p : plans[ci]) {
      CVector a = anchors.columns[ci].Z[idx++];
      const auto& g = rays[p.ray];
      // integrate from the anchor outward and inward through the sorted samples
      std::vector<size_t> below, above;
      for (size_t k : g) (sol.points[k].modulus <= p.anchor.modulus ? below : above).push_back(k);
      std::reverse(below.begin(), below.end());
      for (auto* part : {&below, &above}) {
        if (part->empty()) continue;
        ContourPath path(p.anchor);
        for (size_t k : *part) path.line_to(CoverPoint(sol.points[k].modulus, p.anchor.argument));
        auto res = integrate_ode(L, R, path, a, o);
        for (size_t m = 0; m < part->size(); ++m) {
          size_t k = (*part)[m];
          double dev = sup_norm(CVector(res.at_nodes[m + 1].col(0)) - sol.columns[ci].Z[k]);
          rep.deviations.emplace_back(sol.points[k], dev);
          rep.max_deviation = std::max(rep.max_deviation, dev);
        }
      }
    }
  }
  return rep;
}

std::vector<StressVariant> default_variants(const SolverConfig& base) {
  std::vector<StressVariant> v;
  v.push_back({"base", base});
  StressVariant rot{"rotated-lines", base};
  rot.cfg.line_rotation = 0.15;
  v.push_back(rot);
  StressVariant quad{"quadrature", base};
  quad.cfg.quad.nodes_per_panel = 12;
  quad.cfg.quad.sub_nodes = 20;
  quad.cfg.quad.panel_width = 0.8;
  quad.cfg.quad.panel_tol = std::max(base.quad.panel_tol, 1e-10);
  v.push_back(quad);
  StressVariant f0{"start-1.5", base};
  f0.cfg.f0_scale = 1.5;
  v.push_back(f0);
  return v;
}

StressReport uniqueness_stress(const ExponentPolynomialDiagonal& L, const Perturbation& R, const std::vector<int>& cols,
                               const ColumnProblem& prob, const std::vector<StressVariant>& variants) {
  StressReport rep;
  std::vector<AsymptoticSolution> sols;
  double loosest = 0.0;
  for (auto& v : variants) {
    try {
      sols.push_back(solve_columns(L, R, cols, prob, v.cfg));
      rep.ran.push_back(v.name);
      loosest = std::max(loosest, v.cfg.quad.panel_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      rep.not_applicable.push_back(v.name + ": " + e.what());
    }
  }
  rep.threshold = 10 * loosest;
  for (size_t a = 0; a < sols.size(); ++a)
    for (size_t b = a + 1; b < sols.size(); ++b) {
      size_t m = std::min(sols[a].sample_count, sols[b].sample_count);
      for (size_t k = 0; k < m; ++k)
        for (size_t c = 0; c < cols.size(); ++c)
          rep.max_deviation = std::max(rep.max_deviation, sup_norm(sols[a].columns[c].Z[k] - sols[b].columns[c].Z[k]));
    }
  rep.pass = sols.size() >= 2 && rep.max_deviation <= rep.threshold;
  return rep;
}

DominationReport subdominant_domination_check(const AsymptoticSolution& sub, const AsymptoticSolution& others,
                                              int other_column, double slack) {
  DominationReport rep;
  const auto& sc = sub.columns.at(0);
  const ColumnResult* oc = nullptr;
  for (auto& c : others.columns)
    if (c.j_o == other_column) oc = &c;
  if (!oc) throw input_error("the comparison solution lacks the requested column");
  int bs = sub.L.block_of(sc.j_o), bo = others.L.block_of(other_column);
  for (auto& g : rays_of(sub.points, sub.sample_count)) {
    DominationRay ray;
    ray.argument = sub.points[g[0]].argument;
    for (size_t k : g) {
      const CoverPoint& z = sub.points[k];
      for (size_t m = 0; m < others.sample_count; ++m) {
        const CoverPoint& w = others.points[m];
        if (std::abs(w.modulus - z.modulus) > 1e-12 * z.modulus || std::abs(w.argument - z.argument) > 1e-12) continue;
        double lr = std::log(sc.Z[k].norm()) + std::real(sub.L.q(bs, z)) - std::log(oc->Z[m].norm()) -
                    std::real(others.L.q(bo, z));
        ray.radii.push_back(z.modulus);
        ray.log_ratio.push_back(lr);
        break;
      }
    }
    for (size_t i = 2; i < ray.log_ratio.size(); ++i)
      if (ray.log_ratio[i] > ray.log_ratio[i - 1] + slack) ray.bounded = false;
    if (ray.radii.size() >= 2) {
      rep.pass = rep.pass && ray.bounded;
      rep.rays.push_back(std::move(ray));
    }
  }
  if (rep.rays.empty()) throw input_error("no common sample rays for the domination check");
  return rep;
}

}  // namespace atlas
