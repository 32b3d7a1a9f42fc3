#include "atlas/problem.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "atlas/evaluator.hpp"

namespace atlas {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& ptr, const std::string& msg) { throw input_error(ptr + ": " + msg); }

const json& need(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key)) bad(ptr + "/" + key, "missing field");
  return j.at(key);
}

double num(const json& j, const std::string& ptr) {
  if (!j.is_number()) bad(ptr, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) bad(ptr, "expected an integer");
  return j.get<int>();
}

double num_or(const json& j, const std::string& key, double def, const std::string& ptr) {
  if (!j.contains(key)) return def;
  return num(j.at(key), ptr + "/" + key);
}

std::vector<double> num_list(const json& j, const std::string& ptr) {
  if (!j.is_array()) bad(ptr, "expected an array");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

std::pair<double, double> open_interval(const json& j, const std::string& ptr) {
  auto v = num_list(j, ptr);
  if (v.size() != 2) bad(ptr, "expected [lo, hi]");
  if (!(v[0] < v[1])) bad(ptr, "lo must be below hi");
  return {v[0], v[1]};
}

CVector parse_vector(const json& j, const std::string& ptr) {
  if (!j.is_array()) bad(ptr, "expected an array");
  CVector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = parse_complex(j[i], ptr + "/" + std::to_string(i));
  return v;
}

ExponentPolynomialDiagonal parse_lambda(const json& s, const std::string& ptr) {
  auto ex = num_list(need(s, "exponents", ptr), ptr + "/exponents");
  const json& bl = need(s, "blocks", ptr);
  if (!bl.is_array()) bad(ptr + "/blocks", "expected an array");
  std::vector<Block> blocks;
  for (size_t i = 0; i < bl.size(); ++i) {
    std::string bp = ptr + "/blocks/" + std::to_string(i);
    Block b;
    const json* lam = &bl[i];
    if (bl[i].is_object()) {
      lam = &need(bl[i], "lambda", bp);
      bp += "/lambda";
      if (bl[i].contains("size")) b.size = integer(bl[i]["size"], ptr + "/blocks/" + std::to_string(i) + "/size");
    }
    if (!lam->is_array()) bad(bp, "expected one coefficient per exponent");
    for (size_t k = 0; k < lam->size(); ++k) b.lambda.push_back(parse_complex((*lam)[k], bp + "/" + std::to_string(k)));
    blocks.push_back(b);
  }
  if (s.contains("log_coeffs")) {
    const json& lc = s["log_coeffs"];
    if (!lc.is_array() || lc.size() != blocks.size()) bad(ptr + "/log_coeffs", "expected one entry per block");
    for (size_t i = 0; i < lc.size(); ++i) blocks[i].log_coeff = parse_complex(lc[i], ptr + "/log_coeffs/" + std::to_string(i));
  }
  try {
    return ExponentPolynomialDiagonal(ex, blocks);
  } catch (const Error& e) {
    static const std::regex field(R"(^(exponents|blocks)\[(\d+)\](\.lambda)?:? (.*)$)");
    std::string msg = e.what();
    std::smatch m;
    if (std::regex_match(msg, m, field))
      bad(ptr + "/" + m[1].str() + "/" + m[2].str() + (m[3].matched ? "/lambda" : ""), m[4].str());
    bad(ptr, msg);
  }
}

Perturbation parse_perturbation(const json& p, int n, const std::string& ptr, std::string& type) {
  type = p.value("type", std::string());
  if (type == "zero") return Perturbation::zero(n);
  if (type == "expr") {
    std::vector<ExprTerm> terms;
    const json& ts = need(p, "terms", ptr);
    if (!ts.is_array()) bad(ptr + "/terms", "expected an array");
    for (size_t i = 0; i < ts.size(); ++i) {
      std::string tp = ptr + "/terms/" + std::to_string(i);
      ExprTerm t;
      t.row = integer(need(ts[i], "row", tp), tp + "/row");
      t.col = integer(need(ts[i], "col", tp), tp + "/col");
      if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) bad(tp, "row/col out of range");
      t.coeff = parse_complex(need(ts[i], "coeff", tp), tp + "/coeff");
      t.exponent = num(need(ts[i], "exponent", tp), tp + "/exponent");
      if (ts[i].contains("log_power")) t.log_power = integer(ts[i]["log_power"], tp + "/log_power");
      if (t.log_power < 0) bad(tp + "/log_power", "must be >= 0");
      if (t.exponent > -1.0 || (t.exponent == -1.0))
        bad(tp + "/exponent", "must be below -1 for integrable decay");
      terms.push_back(t);
    }
    Perturbation R = Perturbation::expression(n, terms);
    if (p.contains("scale")) R = R.scaled(parse_complex(p["scale"], ptr + "/scale"));
    return R;
  }
  if (type == "extern") {
    if (!need(p, "command", ptr).is_string()) bad(ptr + "/command", "expected a string");
    DecayBound b;
    b.delta = num(need(p, "delta", ptr), ptr + "/delta");
    b.C = num(need(p, "C", ptr), ptr + "/C");
    if (!(b.delta > 0)) bad(ptr + "/delta", "must be positive");
    if (!(b.C > 0)) bad(ptr + "/C", "must be positive");
    double timeout = num_or(p, "timeout", 5.0, ptr);
    return subprocess_perturbation(p["command"].get<std::string>(), n, b, timeout);
  }
  bad(ptr + "/type", "expected \"zero\", \"expr\" or \"extern\"");
}

UserFormalData parse_user(const json& f, int r, int n, const std::string& ptr) {
  UserFormalData u;
  u.r = r;
  u.p = f.contains("p") ? integer(f["p"], ptr + "/p") : 1;
  if (u.p < 1) bad(ptr + "/p", "must be >= 1");
  u.Q = parse_lambda(need(f, "Q", ptr), ptr + "/Q");
  if (u.Q.dim() != n) bad(ptr + "/Q", "dimension differs from the system");
  u.J = parse_vector(need(f, "J", ptr), ptr + "/J");
  if (u.J.size() != n) bad(ptr + "/J", "dimension differs from the system");
  u.U = f.contains("U") ? parse_matrix(f["U"], ptr + "/U") : CMatrix::Identity(n, n);
  const json& F = need(f, "F", ptr);
  if (!F.is_array() || F.empty()) bad(ptr + "/F", "expected a non-empty array of matrices");
  for (size_t k = 0; k < F.size(); ++k) {
    u.F.push_back(parse_matrix(F[k], ptr + "/F/" + std::to_string(k)));
    if (u.F.back().rows() != n) bad(ptr + "/F/" + std::to_string(k), "dimension differs from the system");
  }
  u.N = num_or(f, "N", 0.0, ptr);
  return u;
}

}  // namespace

Complex parse_complex(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad(ptr, "expected a number or [re, im]");
}

CMatrix parse_matrix(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty()) bad(ptr, "expected a square matrix");
  size_t n = j.size();
  CMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) bad(ptr + "/" + std::to_string(i), "expected a row of length " + std::to_string(n));
    for (size_t c = 0; c < n; ++c) m(i, c) = parse_complex(j[i][c], ptr + "/" + std::to_string(i) + "/" + std::to_string(c));
  }
  return m;
}

int ProblemSpec::dim() const {
  switch (system.kind) {
    case SystemKind::Normalized: return system.L.dim();
    case SystemKind::Meromorphic: return system.mero.dim();
    case SystemKind::Rays: return 0;
  }
  return 0;
}

double ProblemSpec::eta() const { return domain.eta.value_or(default_eta); }

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) bad("", "the spec must be a JSON object");
  ProblemSpec ps;
  const json& s = need(j, "system", "");
  std::string type = s.value("type", std::string());
  if (type == "normalized") {
    ps.system.kind = SystemKind::Normalized;
    ps.system.L = parse_lambda(s, "/system");
    int n = ps.system.L.dim();
    const json* p = s.contains("perturbation") ? &s["perturbation"] : (j.contains("perturbation") ? &j["perturbation"] : nullptr);
    std::string pp = s.contains("perturbation") ? "/system/perturbation" : "/perturbation";
    ps.system.R = p ? parse_perturbation(*p, n, pp, ps.system.perturbation_type) : Perturbation::zero(n);
    if (!p) ps.system.perturbation_type = "zero";
  } else if (type == "meromorphic") {
    ps.system.kind = SystemKind::Meromorphic;
    auto& m = ps.system.mero;
    m.r = integer(need(s, "r", "/system"), "/system/r");
    if (m.r < 1) bad("/system/r", "must be >= 1");
    const json& A = need(s, "A_coeffs", "/system");
    if (!A.is_array() || A.empty()) bad("/system/A_coeffs", "expected a non-empty array of matrices");
    for (size_t k = 0; k < A.size(); ++k) m.A.push_back(parse_matrix(A[k], "/system/A_coeffs/" + std::to_string(k)));
    for (size_t k = 1; k < m.A.size(); ++k)
      if (m.A[k].rows() != m.A[0].rows()) bad("/system/A_coeffs/" + std::to_string(k), "inconsistent dimensions");
    int n = m.dim();
    if (s.contains("F0")) {
      ps.system.F0 = parse_matrix(s["F0"], "/system/F0");
      if (ps.system.F0->rows() != n) bad("/system/F0", "dimension differs from A_0");
    }
    if (s.contains("M")) ps.system.M = integer(s["M"], "/system/M");
    if (ps.system.M < m.r) bad("/system/M", "must be >= r");
    if (s.contains("formal")) ps.system.user = parse_user(s["formal"], m.r, n, "/system/formal");
    ps.system.R = Perturbation::zero(n);
  } else if (type == "rays") {
    ps.system.kind = SystemKind::Rays;
    const json& rs = need(s, "rays", "/system");
    if (!rs.is_array()) bad("/system/rays", "expected an array");
    for (size_t i = 0; i < rs.size(); ++i) {
      std::string rp = "/system/rays/" + std::to_string(i);
      RayLabel rl;
      rl.tau = num(need(rs[i], "tau", rp), rp + "/tau");
      rl.sigma = num(need(rs[i], "sigma", rp), rp + "/sigma");
      if (!(rl.sigma > 0)) bad(rp + "/sigma", "must be positive");
      if (i > 0 && !(rl.tau >= ps.system.rays.rays.back().tau)) bad(rp + "/tau", "labels must be non-decreasing");
      ps.system.rays.rays.push_back(rl);
    }
    ps.system.rays.eta = num_or(s, "eta", 0.0, "/system");
  } else {
    bad("/system/type", "expected \"normalized\", \"meromorphic\" or \"rays\"");
  }

  if (j.contains("domain")) {
    const json& d = j["domain"];
    auto& D = ps.domain;
    D.a = num_or(d, "a", D.a, "/domain");
    if (!(D.a > 0)) bad("/domain/a", "must be positive");
    if (d.contains("eta")) D.eta = num(d["eta"], "/domain/eta");
    if (d.contains("window")) {
      auto w = num_list(d["window"], "/domain/window");
      if (w.size() != 2 || w[1] < w[0]) bad("/domain/window", "expected [lo, hi] with lo <= hi");
      D.window_lo = w[0];
      D.window_hi = w[1];
    }
    if (d.contains("interval")) D.interval = open_interval(d["interval"], "/domain/interval");
    if (d.contains("sector")) D.sector = open_interval(d["sector"], "/domain/sector");
    if (d.contains("columns")) {
      for (size_t i = 0; i < d["columns"].size(); ++i) {
        int c = integer(d["columns"][i], "/domain/columns/" + std::to_string(i));
        if (c < 0 || (ps.dim() > 0 && c >= ps.dim())) bad("/domain/columns/" + std::to_string(i), "column out of range");
        D.columns.push_back(c);
      }
    }
    if (d.contains("column")) {
      D.column = integer(d["column"], "/domain/column");
      if (D.column < 0 || (ps.dim() > 0 && D.column >= ps.dim())) bad("/domain/column", "column out of range");
    }
    if (d.contains("k")) D.k = integer(d["k"], "/domain/k");
    if (d.contains("width")) {
      D.width = num(d["width"], "/domain/width");
      if (!(*D.width > 0)) bad("/domain/width", "must be positive");
    }
    if (d.contains("rank")) {
      D.rank = integer(d["rank"], "/domain/rank");
      if (*D.rank < 1) bad("/domain/rank", "must be >= 1");
    }
  }

  if (j.contains("solver")) {
    const json& c = j["solver"];
    auto& q = ps.solver.quad;
    q.panel_tol = num_or(c, "panel_tol", q.panel_tol, "/solver");
    q.tail_threshold = num_or(c, "tail_threshold", q.tail_threshold, "/solver");
    if (c.contains("nodes_per_panel")) q.nodes_per_panel = integer(c["nodes_per_panel"], "/solver/nodes_per_panel");
    q.panel_width = num_or(c, "panel_width", q.panel_width, "/solver");
    if (c.contains("sub_nodes")) q.sub_nodes = integer(c["sub_nodes"], "/solver/sub_nodes");
    if (c.contains("max_panels")) q.max_panels = integer(c["max_panels"], "/solver/max_panels");
    if (c.contains("max_iterations")) q.max_iterations = integer(c["max_iterations"], "/solver/max_iterations");
    if (c.contains("max_a_doublings")) ps.solver.max_a_doublings = integer(c["max_a_doublings"], "/solver/max_a_doublings");
    ps.solver.contraction_limit = num_or(c, "contraction_limit", ps.solver.contraction_limit, "/solver");
    ps.solver.shrink = num_or(c, "shrink", ps.solver.shrink, "/solver");
    ps.solver.line_rotation = num_or(c, "line_rotation", ps.solver.line_rotation, "/solver");
    if (c.contains("jobs")) ps.solver.jobs = integer(c["jobs"], "/solver/jobs");
    if (!(q.panel_tol > 0)) bad("/solver/panel_tol", "must be positive");
    if (q.nodes_per_panel < 2) bad("/solver/nodes_per_panel", "must be >= 2");
    if (!(ps.solver.shrink >= 0 && ps.solver.shrink < 0.5)) bad("/solver/shrink", "must lie in [0, 0.5[");
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (o.contains("radii")) ps.outputs.radii = num_list(o["radii"], "/outputs/radii");
    if (o.contains("arguments")) ps.outputs.arguments = num_list(o["arguments"], "/outputs/arguments");
    for (size_t i = 0; i < ps.outputs.radii.size(); ++i)
      if (!(ps.outputs.radii[i] > 0)) bad("/outputs/radii/" + std::to_string(i), "must be positive");
    if (ps.outputs.radii.empty() != ps.outputs.arguments.empty())
      bad("/outputs", "radii and arguments must be given together");
    if (o.contains("report_order")) ps.outputs.report_order = integer(o["report_order"], "/outputs/report_order");
  }

  if (j.contains("verify")) {
    const json& v = j["verify"];
    ps.verify.oracle = v.value("oracle", ps.verify.oracle);
    ps.verify.stress = v.value("stress", ps.verify.stress);
    ps.verify.oracle_tol = num_or(v, "oracle_tol", ps.verify.oracle_tol, "/verify");
    ps.verify.liouville_tol = num_or(v, "liouville_tol", ps.verify.liouville_tol, "/verify");
    ps.verify.anchor_radius = num_or(v, "anchor_radius", ps.verify.anchor_radius, "/verify");
  }

  if (j.contains("sweep")) {
    const json& w = j["sweep"];
    SweepSpec sw;
    if (w.contains("parameter")) {
      if (!w["parameter"].is_string()) bad("/sweep/parameter", "expected a string");
      sw.parameter = w["parameter"].get<std::string>();
    }
    if (sw.parameter != "perturbation.scale" && sw.parameter != "domain.a")
      bad("/sweep/parameter", "expected \"perturbation.scale\" or \"domain.a\"");
    sw.values = num_list(need(w, "values", "/sweep"), "/sweep/values");
    if (sw.values.empty()) bad("/sweep/values", "must not be empty");
    ps.sweep = sw;
  }
  return ps;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open");
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".toml") throw input_error(path + ": TOML specs are not supported by this build, use JSON");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
  ProblemSpec ps = parse_problem(j);
  ps.source = path;
  return ps;
}

}  // namespace atlas
