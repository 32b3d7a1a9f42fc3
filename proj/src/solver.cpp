#include "atlas/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "atlas/detail/line_operator.hpp"

namespace atlas {

namespace {

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (jobs <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next++;
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(m);
          if (!err) err = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

struct LineSpec {
  CoverPoint z;
  double tau = 0.0;
  bool two_sided = true;
};

struct LineOutcome {
  CVector value;
  std::vector<double> deltas;
  long qpoints = 0;
};

CVector unit(int n, int j) {
  CVector e = CVector::Zero(n);
  e(j) = 1.0;
  return e;
}

LineOutcome iterate_line(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                         const std::vector<int>& block_sign, const LineSpec& ls, const SolverConfig& cfg) {
  detail::LineOperator op(L, R, j_o, block_sign, ls.z, ls.tau, ls.two_sided, cfg.quad);
  int n = L.dim();
  CVector e = unit(n, j_o);
  std::vector<CVector> f(op.node_count(), cfg.f0_scale * e), g;
  CVector at_z = cfg.f0_scale * e;
  LineOutcome out;
  out.qpoints = op.quadrature_points();
  for (int it = 0; it < cfg.quad.max_iterations; ++it) {
    CVector nz = op.apply(f, g, e);
    double delta = sup_norm(nz - at_z), scale = std::max(1.0, sup_norm(nz));
    for (size_t k = 0; k < f.size(); ++k) {
      delta = std::max(delta, sup_norm(g[k] - f[k]));
      scale = std::max(scale, sup_norm(g[k]));
    }
    if (!std::isfinite(delta)) throw solver_error("fixed-point iteration diverged");
    out.deltas.push_back(delta);
    std::swap(f, g);
    at_z = nz;
    if (delta <= cfg.quad.panel_tol * scale) {
      out.value = at_z;
      return out;
    }
  }
  throw solver_error("no-contraction: fixed-point iteration did not reach the tolerance");
}

std::vector<double> grid(double lo, double hi, int k) {
  std::vector<double> g;
  for (int i = 0; i < k; ++i) g.push_back(k == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (k - 1));
  return g;
}

struct Bootstrap {
  double a = 0.0;
  int doublings = 0;
  double C = 1.0, M = 0.0;
};

double closed_lo(const ColumnProblem& p, const SolverConfig& cfg) {
  return p.phi_lo + cfg.shrink * (p.phi_hi - p.phi_lo);
}
double closed_hi(const ColumnProblem& p, const SolverConfig& cfg) {
  return p.phi_hi - cfg.shrink * (p.phi_hi - p.phi_lo);
}

void check_problem(const ExponentPolynomialDiagonal& L, const Perturbation& R, const ColumnProblem& p) {
  if (R.dim() != L.dim()) throw input_error("perturbation dimension does not match Lambda");
  if (!(p.phi_hi > p.phi_lo)) throw input_error("direction interval needs phi_lo < phi_hi");
  if (!(p.a > 0)) throw input_error("a must be positive");
}

// phi in J for a full line through z
double full_line_phi(const CoverPoint& z, double jlo, double jhi, double rotation) {
  double phi = std::clamp(z.argument, jlo, jhi);
  if (rotation != 0.0) {
    double mid = 0.5 * (jlo + jhi);
    phi += rotation * (jhi - jlo) * (phi <= mid ? 1.0 : -1.0);
    phi = std::clamp(phi, jlo, jhi);
  }
  if (!(std::cos(z.argument - phi) > 0))
    throw domain_error("sample point is not in the half-plane domain of the direction interval");
  return phi;
}

// clearance of the half-line from z toward +infinity in direction phi - pi/2
double half_line_clearance(const CoverPoint& z, double phi) {
  Complex d = std::polar(1.0, phi - pi / 2);
  Complex w = std::conj(d) * z.value();
  double s_f = -std::real(w), b = std::imag(w);
  return s_f > 0 ? std::abs(b) : z.modulus;
}

double half_line_phi(const CoverPoint& z, double jlo, double jhi, double rotation) {
  double best = -1.0, phi_best = 0.0, mid = 0.5 * (jlo + jhi);
  for (double phi : grid(jlo, jhi, 33)) {
    if (!(z.argument > phi - 3 * pi / 2 && z.argument < phi + pi / 2)) continue;
    double c = half_line_clearance(z, phi);
    bool better = c > best * (1 + 1e-12) ||
                  (c >= best * (1 - 1e-12) && std::abs(phi - mid) < std::abs(phi_best - mid));
    if (better) {
      best = c;
      phi_best = phi;
    }
  }
  if (best <= 0) throw domain_error("sample point is outside the doubled domain of the subdominant solution");
  if (rotation != 0.0) {
    double alt = std::clamp(phi_best + rotation * (jhi - jlo) * (phi_best <= mid ? 1.0 : -1.0), jlo, jhi);
    if (z.argument > alt - 3 * pi / 2 && z.argument < alt + pi / 2 && half_line_clearance(z, alt) > 0.5 * best)
      phi_best = alt;
  }
  return phi_best;
}

std::vector<int> all_minus(const ExponentPolynomialDiagonal& L) { return std::vector<int>(L.block_count(), -1); }

AsymptoticSolution make_solution(const ExponentPolynomialDiagonal& L, const ColumnProblem& prob,
                                 const Sector& dom, std::vector<CoverPoint> samples, double jlo, double jhi,
                                 double a) {
  AsymptoticSolution sol;
  sol.L = L;
  sol.sector = dom;
  sol.phi_lo = jlo;
  sol.phi_hi = jhi;
  sol.a = a;
  sol.points = std::move(samples);
  sol.sample_count = sol.points.size();
  for (auto& p : sol.points) sol.certified.push_back(sector_contains(dom, p));
  if (prob.normalize_at_z0) {
    sol.z0 = prob.z0 ? *prob.z0 : CoverPoint(a, 0.5 * (jlo + jhi));
    sol.points.push_back(*sol.z0);
  }
  return sol;
}

ColumnResult run_column(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                        const std::vector<int>& block_sign, const std::vector<LineSpec>& lines,
                        const SolverConfig& cfg) {
  ColumnResult col;
  col.j_o = j_o;
  std::vector<LineOutcome> res(lines.size());
  parallel_for(lines.size(), cfg.jobs, [&](size_t k) { res[k] = iterate_line(L, R, j_o, block_sign, lines[k], cfg); });
  size_t iters = 0;
  for (auto& r : res) iters = std::max(iters, r.deltas.size());
  col.trace.assign(iters, 0.0);
  for (auto& r : res) {
    col.Z.push_back(r.value);
    col.quadrature_points += r.qpoints;
    for (size_t k = 0; k < r.deltas.size(); ++k) col.trace[k] = std::max(col.trace[k], r.deltas[k]);
  }
  col.iterations = static_cast<int>(iters);
  double floor = 1e3 * cfg.quad.panel_tol;
  for (size_t k = 1; k < col.trace.size(); ++k)
    if (col.trace[k - 1] > floor && col.trace[k] > floor)
      col.measured_ratio = std::max(col.measured_ratio, col.trace[k] / col.trace[k - 1]);
  return col;
}

}  // namespace

SignPartition sign_partition(const ExponentPolynomialDiagonal& L, int j_o, double phi_lo, double phi_hi) {
  if (j_o < 0 || j_o >= L.dim()) throw input_error("column index out of range");
  SignPartition part;
  part.j_o = j_o;
  int jb = L.block_of(j_o);
  part.block_sign.assign(L.block_count(), -1);
  for (int b = 0; b < L.block_count(); ++b) {
    if (b == jb) continue;
    LClass first = LClass::Fails;
    for (double phi : grid(phi_lo, phi_hi, 11)) {
      LClass c = classify_pair(L, b, jb, phi - pi / 2).classification;
      if (c == LClass::Fails) {
        std::ostringstream os;
        os << "L-condition fails for blocks (" << b << ", " << jb << ") at line direction " << phi;
        throw domain_error(os.str());
      }
      if (phi == phi_lo) first = c;
      else if (c != first) throw domain_error("L-condition class changes across the direction interval");
    }
    part.block_sign[b] = first == LClass::L1 ? 1 : -1;
  }
  for (int i = 0; i < L.dim(); ++i)
    (part.block_sign[L.block_of(i)] > 0 ? part.plus_set : part.minus_set).push_back(i);
  return part;
}

Complex weight(const ExponentPolynomialDiagonal& L, int j_o, int i, const CoverPoint& t, const CoverPoint& z) {
  int bi = L.block_of(i), bj = L.block_of(j_o);
  if (bi == bj) return 1.0;
  return std::exp(L.q_difference(bi, bj, z) - L.q_difference(bi, bj, t));
}

Complex weight(const ExponentPolynomialDiagonal& L, const SignPartition& part, int i, WeightSign s,
               const CoverPoint& t, const CoverPoint& z) {
  bool plus = part.block_sign.at(L.block_of(i)) > 0;
  if (plus != (s == WeightSign::Plus)) return 0.0;
  return weight(L, part.j_o, i, t, z);
}

double weight_constant(const ExponentPolynomialDiagonal& L, const SignPartition& part, double phi_lo, double phi_hi,
                       double a) {
  int jb = L.block_of(part.j_o);
  double K = 0.0;
  const int N = 2001;
  std::vector<double> re(N);
  for (double phi : grid(phi_lo, phi_hi, 5))
    for (double f : {1.0, 2.0, 4.0, 16.0}) {
      OrientedLine line(phi, f * a);
      for (int b = 0; b < L.block_count(); ++b) {
        if (b == jb) continue;
        for (int k = 0; k < N; ++k) {
          double u = -8.0 + 16.0 * k / (N - 1);
          re[k] = std::real(L.q_difference(b, jb, line.at_param(line.b * std::sinh(u))));
        }
        // |W(t,z)| = exp(Re P(z) - Re P(t)), t before z for K+, after z for K-
        double run = INFINITY;
        if (part.block_sign[b] > 0) {
          for (int k = 0; k < N; ++k) {
            run = std::min(run, re[k]);
            K = std::max(K, re[k] - run);
          }
        } else {
          for (int k = N - 1; k >= 0; --k) {
            run = std::min(run, re[k]);
            K = std::max(K, re[k] - run);
          }
        }
      }
    }
  return std::exp(K);
}

std::vector<CoverPoint> default_samples(double arg_lo, double arg_hi, const RadiusProfile& rp) {
  std::vector<CoverPoint> out;
  for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double th = arg_lo + f * (arg_hi - arg_lo);
    double r0 = rp(th);
    if (!std::isfinite(r0)) throw domain_error("default sample ray leaves the domain");
    for (int k = 0; k < 12; ++k) out.emplace_back(r0 * std::pow(64.0, k / 11.0), th);
  }
  return out;
}

CMatrix AsymptoticSolution::Z(size_t k) const {
  CMatrix m(L.dim(), columns.size());
  for (size_t c = 0; c < columns.size(); ++c) m.col(c) = columns[c].Z.at(k);
  return m;
}

CVector AsymptoticSolution::exponents(size_t k) const {
  CVector e(columns.size());
  for (size_t c = 0; c < columns.size(); ++c) {
    int b = L.block_of(columns[c].j_o);
    e(c) = L.q(b, points.at(k)) - (z0 ? L.q(b, *z0) : Complex(0.0));
  }
  return e;
}

CMatrix AsymptoticSolution::Y(size_t k) const {
  CMatrix z = Z(k);
  CVector e = exponents(k);
  for (Eigen::Index c = 0; c < z.cols(); ++c) z.col(c) *= std::exp(e(c));
  return z;
}

std::optional<size_t> AsymptoticSolution::z0_index() const {
  if (!z0) return std::nullopt;
  return points.size() - 1;
}

AsymptoticSolution solve_columns(const ExponentPolynomialDiagonal& L, const Perturbation& R,
                                 const std::vector<int>& cols, const ColumnProblem& prob, const SolverConfig& cfg) {
  check_problem(L, R, prob);
  double jlo = closed_lo(prob, cfg), jhi = closed_hi(prob, cfg);
  std::vector<SignPartition> parts;
  for (int j : cols) parts.push_back(sign_partition(L, j, jlo, jhi));

  // contraction bootstrap
  Bootstrap bs;
  bs.a = prob.a;
  for (auto& p : parts) bs.C = std::max(bs.C, weight_constant(L, p, jlo, jhi, bs.a));
  if (!std::isfinite(bs.C)) throw domain_error("weight constant is unbounded; the L-condition does not hold");
  for (;;) {
    bs.M = R.is_zero() ? 0.0 : decay_supremum(R, jlo, jhi, bs.a, 5, cfg.quad).M_RaJ;
    if (2 * bs.C * bs.M < cfg.contraction_limit) break;
    if (bs.doublings >= cfg.max_a_doublings) {
      std::ostringstream os;
      os << "no-contraction: 2CM = " << 2 * bs.C * bs.M << " after " << bs.doublings << " doublings of a";
      throw solver_error(os.str());
    }
    bs.a *= 2;
    ++bs.doublings;
  }
  Sector dom = Sector::half_plane_domain(jlo, jhi, bs.a);
  auto samples = prob.samples.empty() ? default_samples(dom.arg_min, dom.arg_max, dom.radius) : prob.samples;
  AsymptoticSolution sol = make_solution(L, prob, dom, samples, jlo, jhi, bs.a);
  sol.a_doublings = bs.doublings;

  std::vector<LineSpec> lines;
  for (auto& p : sol.points) {
    double phi = full_line_phi(p, jlo, jhi, cfg.line_rotation);
    lines.push_back({p, phi - pi / 2, true});
  }
  for (size_t c = 0; c < cols.size(); ++c) {
    ColumnResult col = run_column(L, R, cols[c], parts[c].block_sign, lines, cfg);
    col.partition = parts[c];
    col.C = bs.C;
    col.M = bs.M;
    col.contraction = 2 * bs.C * bs.M;
    sol.columns.push_back(std::move(col));
  }
  return sol;
}

AsymptoticSolution solve_column(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                                const ColumnProblem& prob, const SolverConfig& cfg) {
  return solve_columns(L, R, {j_o}, prob, cfg);
}

AsymptoticSolution solve_fundamental(const ExponentPolynomialDiagonal& L, const Perturbation& R,
                                     const ColumnProblem& prob, const SolverConfig& cfg) {
  std::vector<int> cols;
  for (int j = 0; j < L.dim(); ++j) cols.push_back(j);
  return solve_columns(L, R, cols, prob, cfg);
}

FundamentalSamples assemble_fundamental(const AsymptoticSolution& sol) {
  if (static_cast<int>(sol.columns.size()) != sol.L.dim())
    throw input_error("assembling a fundamental matrix needs one column per index");
  for (size_t c = 0; c < sol.columns.size(); ++c)
    if (sol.columns[c].j_o != static_cast<int>(c)) throw input_error("columns must be ordered by index");
  FundamentalSamples out;
  for (size_t k = 0; k < sol.points.size(); ++k) {
    CMatrix z = sol.Z(k);
    Eigen::PartialPivLU<CMatrix> lu(z);
    double rc = std::abs(lu.determinant());
    double scale = 1.0;
    for (Eigen::Index c = 0; c < z.cols(); ++c) scale *= std::max(z.col(c).norm(), 1e-300);
    if (!(rc > 1e-12 * scale)) {
      std::ostringstream os;
      os << "singular fundamental matrix at modulus " << sol.points[k].modulus << " argument " << sol.points[k].argument;
      throw solver_error(os.str());
    }
    out.points.push_back(sol.points[k]);
    out.Z.push_back(z);
    out.E.push_back(sol.exponents(k));
    out.Y.push_back(sol.Y(k));
  }
  return out;
}

AsymptoticSolution solve_subdominant(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                                     const ColumnProblem& prob, const SolverConfig& cfg) {
  check_problem(L, R, prob);
  if (j_o < 0 || j_o >= L.dim()) throw input_error("column index out of range");
  double jlo = closed_lo(prob, cfg), jhi = closed_hi(prob, cfg);
  int jb = L.block_of(j_o);
  for (double phi : grid(jlo, jhi, 11))
    if (!subdominant_condition(L, jb, phi - pi / 2)) {
      std::ostringstream os;
      os << "not-subdominant: index " << j_o << " fails the subdominance condition at line direction " << phi;
      throw domain_error(os.str());
    }
  SignPartition part;
  part.j_o = j_o;
  part.block_sign = all_minus(L);
  for (int i = 0; i < L.dim(); ++i) part.minus_set.push_back(i);

  double C = weight_constant(L, part, jlo, jhi, prob.a);
  double Mt = R.is_zero() ? 0.0 : decay_supremum(R, jlo, jhi, prob.a, 5, cfg.quad, true).M_tilde;

  Sector dom = Sector::half_plane_domain(jlo - pi, jhi, prob.a);
  auto samples = prob.samples.empty() ? default_samples(dom.arg_min, dom.arg_max, dom.radius) : prob.samples;
  AsymptoticSolution sol = make_solution(L, prob, dom, samples, jlo, jhi, prob.a);
  sol.subdominant = true;

  std::vector<LineSpec> lines;
  for (auto& p : sol.points) {
    double phi = half_line_phi(p, jlo, jhi, cfg.line_rotation);
    lines.push_back({p, phi - pi / 2, false});
  }
  ColumnResult col = run_column(L, R, j_o, part.block_sign, lines, cfg);
  col.partition = part;
  col.C = C;
  col.M = Mt;
  col.contraction = C * Mt;
  sol.columns.push_back(std::move(col));
  return sol;
}

ConnectionResult connection_matrix(const std::vector<CMatrix>& ZA, const std::vector<CVector>& EA,
                                   const std::vector<CMatrix>& ZB, const std::vector<CVector>& EB) {
  if (ZA.empty() || ZA.size() != ZB.size() || EA.size() != ZA.size() || EB.size() != ZB.size())
    throw input_error("no-overlap: connection needs common samples");
  int n = static_cast<int>(ZA[0].rows());
  std::vector<CMatrix> M;
  for (size_t k = 0; k < ZA.size(); ++k) M.push_back(ZA[k].partialPivLu().solve(ZB[k]));
  ConnectionResult out;
  out.C = CMatrix::Zero(n, n);
  out.samples = static_cast<int>(ZA.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex num = 0.0;
      double den = 0.0;
      for (size_t k = 0; k < M.size(); ++k) {
        Complex dE = EB[k](j) - EA[k](i);
        double w = std::exp(-2 * std::max(0.0, std::real(dE)));
        if (w == 0.0) continue;
        num += w * M[k](i, j) * std::exp(dE);
        den += w;
      }
      out.C(i, j) = den > 0 ? num / den : Complex(0.0);
    }
  for (size_t k = 0; k < M.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex pred = out.C(i, j) * std::exp(EA[k](i) - EB[k](j));
        if (!std::isfinite(std::abs(pred))) continue;
        out.residual = std::max(out.residual, std::abs(M[k](i, j) - pred) / std::max(1.0, std::abs(pred)));
      }
  return out;
}

ConnectionResult connection_matrix(const AsymptoticSolution& A, const AsymptoticSolution& B) {
  std::vector<CMatrix> ZA, ZB;
  std::vector<CVector> EA, EB;
  auto same = [](const CoverPoint& p, const CoverPoint& q) {
    return std::abs(p.modulus - q.modulus) <= 1e-12 * p.modulus && std::abs(p.argument - q.argument) <= 1e-12;
  };
  for (size_t i = 0; i < A.sample_count; ++i)
    for (size_t j = 0; j < B.sample_count; ++j)
      if (same(A.points[i], B.points[j])) {
        ZA.push_back(A.Z(i));
        EA.push_back(A.exponents(i));
        ZB.push_back(B.Z(j));
        EB.push_back(B.exponents(j));
        break;
      }
  if (ZA.empty()) throw input_error("no-overlap: the two solutions share no sample points");
  return connection_matrix(ZA, EA, ZB, EB);
}

CVector k_operator(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
                   WeightSign s, const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z,
                   double tau, const QuadratureConfig& q) {
  int n = L.dim();
  CVector out = CVector::Zero(n);
  if (R.is_zero()) return out;
  Complex d = std::polar(1.0, tau);
  double dir = s == WeightSign::Plus ? -1.0 : 1.0;
  double rho = std::max(1.0, std::abs(std::imag(std::conj(d) * z.value())));
  // t = z + dir * rho * sinh(u) d, u >= 0
  for (int i = 0; i < n; ++i) {
    bool plus = part.block_sign.at(L.block_of(i)) > 0;
    if (plus != (s == WeightSign::Plus)) continue;
    auto integrand = [&](double u) -> Complex {
      CoverPoint t = shift(z, dir * rho * std::sinh(u) * d);
      Complex w = weight(L, part.j_o, i, t, z);
      if (w == 0.0) return 0.0;
      Complex v = (R(t).row(i) * f(t))(0);
      return w * v * rho * std::cosh(u) * d * dir;
    };
    Complex total = 0.0;
    double lo = 0.0;
    for (int chunk = 0; chunk < 100; ++chunk) {
      auto r = integrate_gk(integrand, lo, lo + 4.0, 1e-300, q.panel_tol, q.max_panels);
      total += r.value;
      lo += 4.0;
      double S = std::max(rho * std::sinh(lo), 1.0);
      if (std::abs(r.value) <= q.tail_threshold * std::max(std::abs(total), 1e-300) &&
          R.tail_bound(S, std::abs(z.argument) + pi) <= q.tail_threshold)
        break;
    }
    out(i) = -total;
  }
  return out;
}

CVector k_plus(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
               const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z, const OrientedLine& line,
               const QuadratureConfig& q) {
  if (!on_line(line, z, 1e-9)) throw domain_error("point is not on the line");
  return k_operator(L, R, part, WeightSign::Plus, f, z, line.tau(), q);
}

CVector k_minus(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
                const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z, const OrientedLine& line,
                const QuadratureConfig& q) {
  if (!on_line(line, z, 1e-9)) throw domain_error("point is not on the line");
  return k_operator(L, R, part, WeightSign::Minus, f, z, line.tau(), q);
}

double differential_check(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                          const ColumnProblem& prob, const CoverPoint& z, double h, const SolverConfig& cfg) {
  ColumnProblem p = prob;
  p.normalize_at_z0 = false;
  p.samples.clear();
  Complex step = h * std::polar(1.0, z.argument);
  for (int k = -2; k <= 2; ++k) p.samples.push_back(shift(z, static_cast<double>(k) * step));
  auto sol = solve_column(L, R, j_o, p, cfg);
  const auto& Z = sol.columns[0].Z;
  CVector dZ = (Z[0] - 8.0 * Z[1] + 8.0 * Z[3] - Z[4]) / (12.0 * step);
  CVector lam = L.diagonal(z);
  CMatrix A = R(z);
  for (int i = 0; i < L.dim(); ++i) A(i, i) += lam(i) - lam(j_o);
  CVector res = dZ - A * Z[2];
  CMatrix full = R(z);
  for (int i = 0; i < L.dim(); ++i) full(i, i) += lam(i);
  return sup_norm(res) / (std::max(sup_norm(Z[2]), 1e-300) * std::max(inf_norm(full), 1e-300));
}

}  // namespace atlas
