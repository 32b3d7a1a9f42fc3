#include "atlas/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "atlas/verify.hpp"

namespace atlas {

namespace {

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const ordered_json& j, int indent, int depth) {
  auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += ordered_json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      nl(depth);
      out += '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays stay on one line
      bool flat = j.size() <= 4;
      for (auto& e : j) flat = flat && e.is_primitive();
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) nl(depth + 1);
        write(out, j[i], indent, depth + 1);
      }
      if (!flat) nl(depth);
      out += ']';
      return;
    }
    case ordered_json::value_t::number_float: write_number(out, j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

ordered_json cx(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json mat(const CMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cx(m(i, c)));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vec(const CVector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cx(v(i)));
  return a;
}

ordered_json pt(const CoverPoint& p) { return {{"modulus", p.modulus}, {"argument", p.argument}}; }

ordered_json sector_json(const Sector& s) {
  ordered_json j = {{"arg_min", s.arg_min}, {"arg_max", s.arg_max}, {"arg_min_over_pi", s.arg_min / pi},
                    {"arg_max_over_pi", s.arg_max / pi}, {"opening", s.opening()}};
  if (s.radius.a > 0) {
    j["a"] = s.radius.a;
    if (!s.radius.constant) j["line_directions"] = ordered_json::array({s.radius.phi_min, s.radius.phi_max});
  }
  return j;
}

const char* kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::Normalized: return "normalized";
    case SystemKind::Meromorphic: return "meromorphic";
    case SystemKind::Rays: return "rays";
  }
  return "";
}

ordered_json header(const char* cmd, const ProblemSpec& ps) {
  return {{"schema", report_schema}, {"command", cmd}, {"spec", ps.source}, {"system", kind_name(ps.system.kind)}};
}

SolverConfig effective(const ProblemSpec& ps, const CommandOptions& opt) {
  SolverConfig c = ps.solver;
  if (opt.tol) c.quad.panel_tol = *opt.tol;
  if (opt.jobs) c.jobs = std::max(1, *opt.jobs);
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FormalData formal(const ProblemSpec& ps) {
  return formal_reduce_distinct(ps.system.mero, ps.system.F0, ps.system.M);
}

StokesRayFamily family_of(const ProblemSpec& ps) {
  switch (ps.system.kind) {
    case SystemKind::Normalized: return stokes_rays(ps.system.L, ps.eta());
    case SystemKind::Rays: return ps.system.rays;
    case SystemKind::Meromorphic:
      if (ps.system.user) return stokes_rays(ps.system.user->Q, ps.eta());
      return stokes_rays(formal(ps).q_diagonal(), ps.eta());
  }
  return {};
}

double default_width(const ProblemSpec& ps) {
  if (ps.domain.width) return *ps.domain.width;
  if (ps.domain.rank) return pi / *ps.domain.rank;
  switch (ps.system.kind) {
    case SystemKind::Normalized: return pi / ps.system.L.exponents()[0];
    case SystemKind::Meromorphic: return pi / ps.system.mero.r;
    case SystemKind::Rays: return pi;
  }
  return pi;
}

struct SectorList {
  std::vector<AdequateTuple> tuples;
  std::vector<Sector> sectors;
};

SectorList adequate_in_window(const StokesRayFamily& f, double width, double lo, double hi) {
  SectorList out;
  auto w = k_window_for_directions(f, lo - 2 * width, hi + 2 * width);
  for (auto& t : adequate_tuples(f, width, w)) {
    Sector s = sector_of_tuple(t, width);
    if (s.mid() < lo - 1e-12 || s.mid() > hi + 1e-12) continue;
    bool dup = false;
    for (auto& e : out.sectors)
      if (std::abs(e.arg_min - s.arg_min) < 1e-12 && std::abs(e.arg_max - s.arg_max) < 1e-12) dup = true;
    if (dup) continue;
    out.tuples.push_back(t);
    out.sectors.push_back(s);
  }
  return out;
}

// Adequate sector whose midpoint is closest to 0
Sector default_sector(const ProblemSpec& ps) {
  auto f = family_of(ps);
  double width = default_width(ps);
  auto list = adequate_in_window(f, width, -2 * pi, 2 * pi);
  if (list.sectors.empty()) throw domain_error("no adequate tuple: no sector available");
  const Sector* best = &list.sectors[0];
  for (auto& s : list.sectors)
    if (std::abs(s.mid()) < std::abs(best->mid()) - 1e-12) best = &s;
  return *best;
}

void require_solvable(const ProblemSpec& ps) {
  if (ps.system.kind == SystemKind::Rays) throw input_error("/system/type: a bare ray family cannot be solved");
  if (ps.system.kind == SystemKind::Normalized && !ps.system.L.is_normalized())
    throw input_error("/system/exponents: the leading exponent must be 1 to solve; rescale the variable first");
}

ColumnProblem column_problem(const ProblemSpec& ps) {
  ColumnProblem p;
  p.a = ps.domain.a;
  if (ps.domain.interval) {
    p.phi_lo = ps.domain.interval->first;
    p.phi_hi = ps.domain.interval->second;
  } else {
    Sector s = ps.domain.sector ? Sector(ps.domain.sector->first, ps.domain.sector->second) : default_sector(ps);
    p.phi_lo = s.arg_min + pi / 2;
    p.phi_hi = s.arg_max - pi / 2;
    if (!(p.phi_hi > p.phi_lo)) throw domain_error("/domain/sector: opening must exceed pi");
  }
  for (double r : ps.outputs.radii)
    for (double t : ps.outputs.arguments) p.samples.push_back(CoverPoint(r, t));
  return p;
}

std::vector<CoverPoint> z_samples(const ProblemSpec& ps) {
  std::vector<CoverPoint> out;
  for (double r : ps.outputs.radii)
    for (double t : ps.outputs.arguments) out.push_back(CoverPoint(r, t));
  return out;
}

ordered_json column_json(const ColumnResult& c) {
  ordered_json plus = ordered_json::array(), minus = ordered_json::array();
  for (int i : c.partition.plus_set) plus.push_back(i);
  for (int i : c.partition.minus_set) minus.push_back(i);
  ordered_json tr = ordered_json::array();
  for (double d : c.trace) tr.push_back(d);
  return {{"column", c.j_o},        {"iterations", c.iterations},
          {"C", c.C},               {"M", c.M},
          {"contraction", c.contraction}, {"measured_ratio", c.measured_ratio},
          {"plus_set", plus},       {"minus_set", minus},
          {"quadrature_points", c.quadrature_points}, {"trace", tr}};
}

double sample_deviation(const AsymptoticSolution& sol, size_t k) {
  double d = 0.0;
  CMatrix Z = sol.Z(k);
  for (size_t c = 0; c < sol.columns.size(); ++c) {
    CVector v = Z.col(c);
    v(sol.columns[c].j_o) -= 1.0;
    d = std::max(d, sup_norm(v));
  }
  return d;
}

ordered_json solution_json(const AsymptoticSolution& sol) {
  ordered_json cols = ordered_json::array();
  for (auto& c : sol.columns) cols.push_back(column_json(c));
  ordered_json j = {{"sector", sector_json(sol.sector)},
                    {"line_directions", ordered_json::array({sol.phi_lo, sol.phi_hi})},
                    {"a", sol.a},
                    {"a_doublings", sol.a_doublings},
                    {"subdominant", sol.subdominant},
                    {"samples", sol.sample_count},
                    {"columns", cols}};
  if (sol.z0) j["z0"] = pt(*sol.z0);
  double worst = 0.0;
  size_t uncertified = 0;
  for (size_t k = 0; k < sol.sample_count; ++k) {
    worst = std::max(worst, sample_deviation(sol, k));
    if (!sol.certified[k]) ++uncertified;
  }
  j["max_deviation_from_identity"] = worst;
  j["uncertified_samples"] = uncertified;
  return j;
}

std::string solution_csv(const AsymptoticSolution& sol) {
  std::ostringstream os;
  os << "# " << samples_schema << "\n";
  os << "index,modulus,argument,certified,column,row,z_re,z_im,exponent_re,exponent_im\n";
  for (size_t k = 0; k < sol.sample_count; ++k) {
    CMatrix Z = sol.Z(k);
    CVector E = sol.exponents(k);
    for (size_t c = 0; c < sol.columns.size(); ++c)
      for (Eigen::Index i = 0; i < Z.rows(); ++i)
        os << k << ',' << fmt(sol.points[k].modulus) << ',' << fmt(sol.points[k].argument) << ','
           << (sol.certified[k] ? 1 : 0) << ',' << sol.columns[c].j_o << ',' << i << ',' << fmt(Z(i, c).real()) << ','
           << fmt(Z(i, c).imag()) << ',' << fmt(E(c).real()) << ',' << fmt(E(c).imag()) << '\n';
  }
  return os.str();
}

ordered_json scan_json(const ResidualReport& r) {
  ordered_json rays = ordered_json::array();
  for (auto& ray : r.rays)
    rays.push_back({{"argument", ray.argument}, {"slope", ray.slope}, {"monotone", ray.monotone}});
  return {{"status", to_string(r.status)}, {"expected_slope", -r.expected_delta}, {"slope", r.slope},
          {"tolerance", r.slope_tolerance}, {"reason", r.reason}, {"rays", rays}};
}

ordered_json scan_or_note(const AsymptoticSolution& sol, double delta) {
  try {
    return scan_json(residual_scan(sol, delta));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Input) throw;
    return {{"status", "insufficient-samples"}, {"reason", e.what()}};
  }
}

ordered_json formal_json(const FormalData& fd) {
  ordered_json Q = ordered_json::array(), F = ordered_json::array();
  for (auto& q : fd.Q) Q.push_back(vec(q));
  for (auto& f : fd.F) F.push_back(mat(f));
  return {{"r", fd.r}, {"M", fd.M}, {"Q", Q}, {"J", vec(fd.J)}, {"F", F}};
}

std::vector<int> columns_of(const ProblemSpec& ps) {
  if (!ps.domain.columns.empty()) return ps.domain.columns;
  std::vector<int> all(ps.dim());
  for (int i = 0; i < ps.dim(); ++i) all[i] = i;
  return all;
}

AsymptoticSolution solve_normalized(const ProblemSpec& ps, const SolverConfig& cfg) {
  ColumnProblem prob = column_problem(ps);
  if (ps.domain.columns.empty()) return solve_fundamental(ps.system.L, ps.system.R, prob, cfg);
  return solve_columns(ps.system.L, ps.system.R, ps.domain.columns, prob, cfg);
}

Sector mero_sector(const ProblemSpec& ps) {
  if (ps.domain.sector) return Sector(ps.domain.sector->first, ps.domain.sector->second, ps.domain.a);
  Sector s = default_sector(ps);
  return Sector(s.arg_min, s.arg_max, ps.domain.a);
}

int report_order(const ProblemSpec& ps) {
  int m = ps.outputs.report_order;
  return m < 0 ? std::min(ps.system.M, 2) : m;
}

CommandResult solve_mero(const ProblemSpec& ps, const SolverConfig& cfg, const char* cmd) {
  CommandResult res;
  res.report = header(cmd, ps);
  if (ps.system.user) {
    NormalizeOptions no;
    no.a = ps.domain.a;
    Sector S = mero_sector(ps);
    no.arg_lo = S.arg_min + 0.25 * S.opening();
    no.arg_hi = S.arg_max - 0.25 * S.opening();
    NormalizedSystem ns = normalize_variable(*ps.system.user, ps.system.mero, no);
    ColumnProblem prob;
    int r = ps.system.mero.r;
    prob.phi_lo = r * S.arg_min + pi / 2;
    prob.phi_hi = r * S.arg_max - pi / 2;
    if (!(prob.phi_hi > prob.phi_lo)) throw domain_error("/domain/sector: too narrow for the normalized problem");
    prob.a = std::pow(ps.domain.a, r);
    for (auto& z : z_samples(ps)) prob.samples.push_back(ns.to_x(z));
    AsymptoticSolution sol = solve_fundamental(ns.Lambda, ns.R, prob, cfg);
    res.report["z_sector"] = sector_json(S);
    res.report["fitted_delta"] = ns.delta_prime;
    res.report["remainder_C"] = ns.C;
    res.report["x_solution"] = solution_json(sol);
    res.csv = solution_csv(sol);
    return res;
  }
  FormalData fd = formal(ps);
  Sector S = mero_sector(ps);
  auto ms = solve_meromorphic(ps.system.mero, fd, S, ps.domain.a, report_order(ps), z_samples(ps), cfg);
  GaugeCheck g = gauge_identity_check(ps.system.mero, fd);
  res.report["formal"] = formal_json(fd);
  res.report["gauge"] = {{"coefficient_error", g.coefficient_error}, {"pointwise_error", g.pointwise_error}};
  res.report["z_sector"] = sector_json(S);
  res.report["fitted_delta"] = ms.normalized.delta_prime;
  res.report["remainder_C"] = ms.normalized.C;
  res.report["x_solution"] = solution_json(ms.x_solution);
  res.report["report_order"] = ms.report_order;
  res.report["residual_slope"] = ms.slope;
  res.report["expected_slope"] = -(ms.report_order + 1.0);
  double worst = 0.0;
  for (double v : ms.residual) worst = std::max(worst, v);
  res.report["max_residual"] = worst;
  std::ostringstream os;
  os << "# " << samples_schema << "\n";
  os << "index,modulus,argument,row,col,y_re,y_im,residual\n";
  for (size_t k = 0; k < ms.z_points.size(); ++k)
    for (Eigen::Index i = 0; i < ms.Y_scaled[k].rows(); ++i)
      for (Eigen::Index c = 0; c < ms.Y_scaled[k].cols(); ++c)
        os << k << ',' << fmt(ms.z_points[k].modulus) << ',' << fmt(ms.z_points[k].argument) << ',' << i << ',' << c
           << ',' << fmt(ms.Y_scaled[k](i, c).real()) << ',' << fmt(ms.Y_scaled[k](i, c).imag()) << ','
           << fmt(ms.residual[k]) << '\n';
  res.csv = os.str();
  return res;
}

}  // namespace

std::string dump_json(const ordered_json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  out += '\n';
  return out;
}

std::string rays_svg(const std::vector<RayDirection>& dirs, const std::vector<Sector>& sectors) {
  const double c = 220.0, R = 180.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" viewBox=\"0 0 440 440\">\n";
  os << "<rect width=\"440\" height=\"440\" fill=\"white\"/>\n";
  os << "<circle cx=\"220\" cy=\"220\" r=\"" << R << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  int idx = 0;
  for (auto& s : sectors) {
    double rr = 60.0 + 12.0 * (idx++ % 8);
    double span = std::min(s.opening(), 2 * pi - 1e-3);
    double x0 = c + rr * std::cos(s.arg_min), y0 = c - rr * std::sin(s.arg_min);
    double x1 = c + rr * std::cos(s.arg_min + span), y1 = c - rr * std::sin(s.arg_min + span);
    os << "<path d=\"M " << x0 << ' ' << y0 << " A " << rr << ' ' << rr << " 0 " << (span > pi ? 1 : 0) << " 0 " << x1
       << ' ' << y1 << "\" fill=\"none\" stroke=\"#2a7\" stroke-width=\"2\"><title>]" << s.arg_min / pi << "pi, "
       << s.arg_max / pi << "pi[</title></path>\n";
  }
  for (auto& d : dirs) {
    long sheet = static_cast<long>(std::floor((d.direction + pi) / (2 * pi)));
    double x = c + R * std::cos(d.direction), y = c - R * std::sin(d.direction);
    os << "<line x1=\"220\" y1=\"220\" x2=\"" << x << "\" y2=\"" << y << "\" stroke=\"#c33\"/>\n";
    double lx = c + (R + 14) * std::cos(d.direction), ly = c - (R + 14) * std::sin(d.direction);
    os << "<text x=\"" << lx << "\" y=\"" << ly << "\" font-size=\"9\" text-anchor=\"middle\">" << d.direction / pi
       << "pi";
    if (sheet != 0) os << " [" << (sheet > 0 ? "+" : "") << sheet << "]";
    os << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

CommandResult cmd_rays(const ProblemSpec& ps, const CommandOptions& opt) {
  CommandResult res;
  auto f = family_of(ps);
  auto dirs = all_ray_directions(f, ps.domain.window_lo, ps.domain.window_hi, true);
  res.report = header("rays", ps);
  res.report["eta"] = f.eta;
  res.report["generic"] = f.generic;
  res.report["window"] = ordered_json::array({ps.domain.window_lo, ps.domain.window_hi});
  ordered_json rays = ordered_json::array();
  for (size_t i = 0; i < f.rays.size(); ++i) {
    ordered_json pairs = ordered_json::array();
    for (auto& p : f.rays[i].pairs) pairs.push_back(ordered_json::array({p.first, p.second}));
    rays.push_back({{"rho", i}, {"tau", f.rays[i].tau}, {"sigma", f.rays[i].sigma}, {"pairs", pairs}});
  }
  res.report["rays"] = rays;
  ordered_json d = ordered_json::array();
  for (auto& x : dirs)
    d.push_back({{"direction", x.direction}, {"over_pi", x.direction / pi}, {"rho", x.rho}, {"k", x.k}});
  res.report["directions"] = d;
  if (opt.svg) res.svg = rays_svg(dirs, {});
  return res;
}

CommandResult cmd_sectors(const ProblemSpec& ps, const CommandOptions& opt) {
  CommandResult res;
  auto f = family_of(ps);
  double width = default_width(ps);
  auto list = adequate_in_window(f, width, ps.domain.window_lo, ps.domain.window_hi);
  res.report = header("sectors", ps);
  res.report["width"] = width;
  res.report["window"] = ordered_json::array({ps.domain.window_lo, ps.domain.window_hi});
  ordered_json entries = ordered_json::array();
  for (size_t i = 0; i < list.sectors.size(); ++i) {
    ordered_json k = ordered_json::array();
    for (int v : list.tuples[i].k) k.push_back(v);
    entries.push_back({{"k", k},
                       {"interval", ordered_json::array({list.tuples[i].a, list.tuples[i].b})},
                       {"sector", sector_json(list.sectors[i])}});
  }
  res.report["sectors"] = entries;
  if (list.sectors.empty())
    res.report["diagnostic"] = "no adequate tuple: the selected rays never fit in an open arc of the given width";
  if (f.generic) {
    ordered_json gen = ordered_json::array();
    long mu = f.mu();
    for (long nu = -8 * mu; nu <= 8 * mu; ++nu) {
      Sector s = generic_sector(f, nu);
      if (s.mid() >= ps.domain.window_lo - 1e-12 && s.mid() <= ps.domain.window_hi + 1e-12)
        gen.push_back({{"nu", nu}, {"sector", sector_json(s)}});
    }
    res.report["generic_sectors"] = gen;
  }
  if (opt.svg) res.svg = rays_svg(all_ray_directions(f, ps.domain.window_lo, ps.domain.window_hi, true), list.sectors);
  return res;
}

CommandResult cmd_solve(const ProblemSpec& ps, const CommandOptions& opt) {
  require_solvable(ps);
  SolverConfig cfg = effective(ps, opt);
  if (ps.system.kind == SystemKind::Meromorphic) return solve_mero(ps, cfg, "solve");
  CommandResult res;
  AsymptoticSolution sol = solve_normalized(ps, cfg);
  res.report = header("solve", ps);
  res.report["solution"] = solution_json(sol);
  res.report["residual_scan"] = scan_or_note(sol, ps.system.R.decay().delta);
  res.csv = solution_csv(sol);
  return res;
}

CommandResult cmd_subdominant(const ProblemSpec& ps, const CommandOptions& opt) {
  require_solvable(ps);
  SolverConfig cfg = effective(ps, opt);
  CommandResult res;
  res.report = header("subdominant", ps);
  int j = ps.domain.column;
  if (ps.system.kind == SystemKind::Meromorphic) {
    FormalData fd = formal(ps);
    Sector S = mero_sector(ps);
    Sector w = widen_subdominant_mero(ps.system.mero, fd, j, S);
    res.report["column"] = j;
    res.report["sector"] = sector_json(S);
    res.report["widened"] = sector_json(w);
    return res;
  }
  const auto& L = ps.system.L;
  ColumnProblem prob;
  prob.a = ps.domain.a;
  if (ps.domain.interval) {
    prob.phi_lo = ps.domain.interval->first;
    prob.phi_hi = ps.domain.interval->second;
  } else {
    auto rays = subdominant_rays(L, L.block_of(j), ps.eta());
    auto ss = subdominant_sector(rays, ps.domain.k);
    if (!ss.ok()) throw domain_error("no subdominant sector: " + ss.reason);
    prob.phi_lo = ss.phi_interval->first;
    prob.phi_hi = ss.phi_interval->second;
    res.report["subdominant_sector"] = sector_json(*ss.sector);
  }
  prob.samples = z_samples(ps);
  AsymptoticSolution sol = solve_subdominant(L, ps.system.R, j, prob, cfg);
  res.report["solution"] = solution_json(sol);
  res.csv = solution_csv(sol);
  return res;
}

CommandResult cmd_verify(const ProblemSpec& ps, const CommandOptions& opt) {
  require_solvable(ps);
  SolverConfig cfg = effective(ps, opt);
  CommandResult res;
  ordered_json checks = ordered_json::array();
  auto add = [&](const char* name, double value, double threshold, bool pass, const std::string& reason = "") {
    ordered_json c = {{"check", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}};
    if (!reason.empty()) c["reason"] = reason;
    checks.push_back(c);
    if (!pass) res.verification_failed = true;
  };
  if (ps.system.kind == SystemKind::Meromorphic) {
    if (ps.system.user) throw input_error("/system/formal: verify supports the computed formal path only");
    res = solve_mero(ps, cfg, "verify");
    FormalData fd = formal(ps);
    GaugeCheck g = gauge_identity_check(ps.system.mero, fd);
    add("gauge_identity", std::max(g.coefficient_error, g.pointwise_error), 1e-10,
        g.coefficient_error <= 1e-10 && g.pointwise_error <= 1e-10);
    double slope = res.report["residual_slope"].get<double>();
    double expect = res.report["expected_slope"].get<double>();
    double worst = res.report["max_residual"].get<double>();
    if (worst > 1e-12)
      add("residual_slope", slope, expect, std::abs(slope - expect) <= 0.1 * std::abs(expect) || slope < expect,
          "the residual must decay at least like |z|^(-M-1)");
    else
      add("residual_slope", slope, expect, true, "residual at roundoff level, fit skipped");
    res.report["checks"] = checks;
    return res;
  }
  AsymptoticSolution sol = solve_normalized(ps, cfg);
  ColumnProblem prob = column_problem(ps);
  res.report = header("verify", ps);
  res.report["solution"] = solution_json(sol);
  ResidualReport scan = residual_scan(sol, ps.system.R.decay().delta);
  res.report["residual_scan"] = scan_json(scan);
  if (scan.status == ScanStatus::Pass || scan.status == ScanStatus::Fail)
    add("decay_bound", scan.slope, -scan.expected_delta, scan.slope <= -scan.expected_delta + scan.slope_tolerance,
        "the residual must decay at least like |z|^(-delta)");
  if (ps.verify.oracle) {
    OracleOptions oo;
    oo.anchor_radius = ps.verify.anchor_radius;
    OracleReport orc = oracle_compare(ps.system.L, ps.system.R, sol, prob, cfg, oo);
    add("oracle", orc.max_deviation, ps.verify.oracle_tol, orc.max_deviation <= ps.verify.oracle_tol);
  }
  if (sol.columns.size() == static_cast<size_t>(ps.dim()) && sol.z0_index()) {
    FundamentalSamples fs = assemble_fundamental(sol);
    double dev = liouville_check(fs, ps.system.L, ps.system.R, *sol.z0_index(), cfg.quad);
    add("liouville", dev, ps.verify.liouville_tol, dev <= ps.verify.liouville_tol);
  }
  if (ps.verify.stress) {
    StressReport st = uniqueness_stress(ps.system.L, ps.system.R, columns_of(ps), prob, default_variants(cfg));
    add("uniqueness_stress", st.max_deviation, st.threshold, st.pass);
  }
  res.report["checks"] = checks;
  res.csv = solution_csv(sol);
  return res;
}

CommandResult cmd_sweep(const ProblemSpec& ps, const CommandOptions& opt) {
  if (!ps.sweep) throw input_error("/sweep: missing field");
  require_solvable(ps);
  if (ps.system.kind != SystemKind::Normalized) throw input_error("/system/type: sweeps run on normalized systems");
  CommandResult res;
  res.report = header("sweep", ps);
  res.report["parameter"] = ps.sweep->parameter;
  ordered_json subs = ordered_json::array();
  std::vector<double> dev;
  std::ostringstream csv;
  csv << "# " << samples_schema << "\n";
  csv << "value,index,modulus,argument,deviation\n";
  for (double v : ps.sweep->values) {
    ProblemSpec p = ps;
    if (ps.sweep->parameter == "perturbation.scale")
      p.system.R = ps.system.R.scaled(v);
    else
      p.domain.a = v;
    SolverConfig cfg = effective(p, opt);
    AsymptoticSolution sol = solve_normalized(p, cfg);
    ordered_json sub = {{"value", v}, {"solution", solution_json(sol)}};
    sub["residual_scan"] = scan_or_note(sol, p.system.R.decay().delta);
    dev.push_back(sub["solution"]["max_deviation_from_identity"].get<double>());
    for (size_t k = 0; k < sol.sample_count; ++k)
      csv << fmt(v) << ',' << k << ',' << fmt(sol.points[k].modulus) << ',' << fmt(sol.points[k].argument) << ','
          << fmt(sample_deviation(sol, k)) << '\n';
    subs.push_back(sub);
  }
  res.report["runs"] = subs;
  if (ps.sweep->parameter == "perturbation.scale") {
    bool mono = true;
    std::vector<size_t> order(dev.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return std::abs(ps.sweep->values[x]) < std::abs(ps.sweep->values[y]); });
    for (size_t i = 1; i < order.size(); ++i) mono = mono && dev[order[i]] >= dev[order[i - 1]];
    res.report["monotone"] = mono;
  }
  res.csv = csv.str();
  return res;
}

CommandResult run_command(const std::string& name, const ProblemSpec& ps, const CommandOptions& opt) {
  CommandResult res;
  if (name == "rays") res = cmd_rays(ps, opt);
  else if (name == "sectors") res = cmd_sectors(ps, opt);
  else if (name == "solve") res = cmd_solve(ps, opt);
  else if (name == "subdominant") res = cmd_subdominant(ps, opt);
  else if (name == "verify") res = cmd_verify(ps, opt);
  else if (name == "sweep") res = cmd_sweep(ps, opt);
  else throw input_error("unknown command " + name);
  res.report["jobs"] = effective(ps, opt).jobs;
  return res;
}

}  // namespace atlas
