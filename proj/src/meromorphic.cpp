#include "atlas/meromorphic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace atlas {

namespace {

using Series = std::vector<CMatrix>;  // coefficients of z^-k

Series mul(const Series& a, const Series& b, int order) {
  int n = static_cast<int>(a[0].rows());
  Series out(order + 1, CMatrix::Zero(n, n));
  for (int i = 0; i < static_cast<int>(a.size()) && i <= order; ++i)
    for (int j = 0; j < static_cast<int>(b.size()) && i + j <= order; ++j) out[i + j] += a[i] * b[j];
  return out;
}

// inverse of I + N(w) with N(0) = 0, as a truncated Neumann series
Series inverse_unipotent(const Series& g, int order) {
  int n = static_cast<int>(g[0].rows());
  Series nn(order + 1, CMatrix::Zero(n, n));
  for (int k = 1; k <= order && k < static_cast<int>(g.size()); ++k) nn[k] = -g[k];
  Series out(order + 1, CMatrix::Zero(n, n));
  out[0] = CMatrix::Identity(n, n);
  Series term = out;
  for (int p = 1; p <= order; ++p) {
    term = mul(term, nn, order);
    for (int k = 0; k <= order; ++k) out[k] += term[k];
  }
  return out;
}

Complex zpow(const CoverPoint& z, double e) { return z.pow(e); }

CMatrix eval_series(const Series& s, const CoverPoint& z, int order) {
  CMatrix m = CMatrix::Zero(s[0].rows(), s[0].cols());
  int top = order < 0 ? static_cast<int>(s.size()) - 1 : std::min(order, static_cast<int>(s.size()) - 1);
  for (int k = 0; k <= top; ++k) m += s[k] * zpow(z, -k);
  return m;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

CMatrix zJ(const CVector& J, const CoverPoint& z, double sign) {
  CMatrix d = CMatrix::Zero(J.size(), J.size());
  for (Eigen::Index i = 0; i < J.size(); ++i) d(i, i) = z.pow(sign * J(i));
  return d;
}

}  // namespace

CMatrix MeromorphicSystem::A_at(const CoverPoint& z) const { return eval_series(A, z, -1); }

void MeromorphicSystem::validate() const {
  if (r < 1) throw input_error("system.r must be >= 1");
  if (A.empty()) throw input_error("system.A_coeffs must not be empty");
  int n = dim();
  for (size_t k = 0; k < A.size(); ++k)
    if (A[k].rows() != n || A[k].cols() != n)
      throw input_error("system.A_coeffs[" + std::to_string(k) + "] has inconsistent dimensions");
  if (A[0].cwiseAbs().maxCoeff() == 0.0) throw input_error("system.A_coeffs[0] must be nonzero");
}

ExponentPolynomialDiagonal FormalData::q_diagonal() const {
  std::vector<double> ex;
  for (int k = 0; k < r; ++k) ex.push_back(static_cast<double>(r - k));
  std::vector<Block> blocks;
  for (int i = 0; i < dim(); ++i) {
    Block b;
    b.size = 1;
    for (int k = 0; k < r; ++k) b.lambda.push_back(Q[k](i));
    blocks.push_back(b);
  }
  return ExponentPolynomialDiagonal(ex, blocks);
}

CMatrix FormalData::F_at(const CoverPoint& z, int order) const { return eval_series(F, z, order < 0 ? M : order); }

CMatrix FormalData::dF_at(const CoverPoint& z, int order) const {
  int top = std::min(order < 0 ? M : order, static_cast<int>(F.size()) - 1);
  CMatrix m = CMatrix::Zero(dim(), dim());
  for (int k = 1; k <= top; ++k) m += -static_cast<double>(k) * F[k] * z.pow(-k - 1.0);
  return m;
}

CMatrix UserFormalData::F_at(const CoverPoint& z) const {
  CMatrix m = CMatrix::Zero(J.size(), J.size());
  for (size_t k = 0; k < F.size(); ++k) m += F[k] * z.pow(N - static_cast<double>(k) / p);
  return m;
}

CMatrix UserFormalData::dF_at(const CoverPoint& z) const {
  CMatrix m = CMatrix::Zero(J.size(), J.size());
  for (size_t k = 0; k < F.size(); ++k) {
    double e = N - static_cast<double>(k) / p;
    if (e != 0.0) m += e * F[k] * z.pow(e - 1.0);
  }
  return m;
}

FormalData formal_reduce_distinct(const MeromorphicSystem& sys, const std::optional<CMatrix>& F0in, int M) {
  sys.validate();
  int n = sys.dim(), r = sys.r;
  if (M < r) throw input_error("formal reduction needs M >= r");
  const CMatrix& A0 = sys.A[0];
  Eigen::ComplexEigenSolver<CMatrix> es(A0);
  CVector ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= 1e-10 * scale)
        throw domain_error("eigenvalue collision: A_0 has repeated eigenvalues");
  CMatrix F0;
  if (F0in) {
    F0 = *F0in;
    if (F0.rows() != n || F0.cols() != n) throw input_error("F0 has the wrong dimension");
    CMatrix D = F0.partialPivLu().solve(A0 * F0);
    CMatrix off = D;
    off.diagonal().setZero();
    if (!D.allFinite() || off.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, D.cwiseAbs().maxCoeff()))
      throw domain_error("F0 does not diagonalize A_0");
  } else {
    CMatrix V = es.eigenvectors();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto lead = [&](int c) {
      Eigen::Index at;
      V.col(c).cwiseAbs().maxCoeff(&at);
      return static_cast<int>(at);
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
      if (lead(x) != lead(y)) return lead(x) < lead(y);
      return std::real(ev(x)) > std::real(ev(y));
    });
    F0.resize(n, n);
    for (int c = 0; c < n; ++c) {
      CVector v = V.col(idx[c]);
      v /= v.norm();
      for (int i = 0; i < n; ++i)
        if (std::abs(v(i)) > 1e-14) {
          v *= std::abs(v(i)) / v(i);
          v(i) = std::abs(v(i));
          break;
        }
      F0.col(c) = v;
    }
  }
  // the normal-form coefficients up to M + r - 1 fix every diagonal entry of F_1 .. F_{M-1};
  // the diagonal of F_M is left at zero
  int K = M + r - 1;
  Eigen::PartialPivLU<CMatrix> lu0(F0);
  Series Ah;
  for (int k = 0; k <= K; ++k)
    Ah.push_back(k < static_cast<int>(sys.A.size()) ? CMatrix(lu0.solve(sys.A[k] * F0)) : CMatrix::Zero(n, n));
  CVector lam = Ah[0].diagonal();
  Series T(K + 1, CMatrix::Zero(n, n)), B(K + 1, CMatrix::Zero(n, n));
  T[0] = CMatrix::Identity(n, n);
  B[0] = lam.asDiagonal();
  for (int m = 1; m <= K; ++m) {
    CMatrix rhs = Ah[m];
    for (int j = 1; j < m; ++j) rhs += Ah[m - j] * T[j] - T[j] * B[m - j];
    if (m > r) rhs += static_cast<double>(m - r) * T[m - r];
    B[m] = rhs.diagonal().asDiagonal();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) T[m](i, j) = rhs(i, j) / (lam(j) - lam(i));
  }
  // diagonal factor exp(sum_{j>r} B_j z^(r-j) / (r-j))
  std::vector<CVector> s(M + 1, CVector::Zero(n)), d(M + 1, CVector::Zero(n));
  for (int j = r + 1; j <= K; ++j) s[j - r] = B[j].diagonal() / static_cast<double>(r - j);
  d[0].setOnes();
  for (int k = 1; k < M; ++k) {
    for (int i = 1; i <= k; ++i) d[k] += static_cast<double>(i) * s[i].cwiseProduct(d[k - i]);
    d[k] /= static_cast<double>(k);
  }
  FormalData fd;
  fd.r = r;
  fd.p = 1;
  fd.M = M;
  fd.U = CMatrix::Identity(n, n);
  for (int k = 0; k <= M; ++k) {
    CMatrix G = CMatrix::Zero(n, n);
    for (int i = 0; i <= k; ++i) G += T[i] * d[k - i].asDiagonal();
    fd.F.push_back(F0 * G);
  }
  for (int k = 0; k <= r; ++k) fd.Lambda.push_back(B[k].diagonal());
  for (int k = 0; k < r; ++k) fd.Q.push_back(B[k].diagonal() / static_cast<double>(r - k));
  fd.J = B[r].diagonal();
  return fd;
}

GaugeCheck gauge_identity_check(const MeromorphicSystem& sys, const FormalData& fd, double arg) {
  int n = fd.dim(), r = fd.r;
  const int extra = 8, order = r + extra;
  CMatrix F0 = fd.F[0];
  Eigen::PartialPivLU<CMatrix> lu0(F0);
  Series G, Ah;
  for (int k = 0; k <= r; ++k) G.push_back(lu0.solve(fd.F.at(k)));
  for (int k = 0; k <= order; ++k)
    Ah.push_back(k < static_cast<int>(sys.A.size()) ? CMatrix(lu0.solve(sys.A[k] * F0)) : CMatrix::Zero(n, n));
  Series Gi = inverse_unipotent(G, order);
  Series S = mul(mul(Gi, Ah, order), G, order);
  GaugeCheck out;
  for (int k = 0; k <= r; ++k) {
    CMatrix want = CMatrix::Zero(n, n);
    want.diagonal() = k < r ? CVector(static_cast<double>(r - k) * fd.Q[k]) : fd.J;
    out.coefficient_error = std::max(out.coefficient_error, (S[k] - want).cwiseAbs().maxCoeff());
  }
  for (int i = 0; i < 8; ++i) {
    double rad = std::pow(10.0, 2.0 + 3.0 * i / 7.0);
    CoverPoint z(rad, arg);
    CMatrix F = fd.F_at(z, r);
    CMatrix E = F.partialPivLu().solve(sys.A_at(z) * F);
    for (int k = 0; k <= order; ++k) {
      CMatrix term = S[k];
      if (k <= r) {
        term.setZero();
        term.diagonal() = k < r ? CVector(static_cast<double>(r - k) * fd.Q[k]) : fd.J;
      }
      E -= term * z.pow(-static_cast<double>(k));
    }
    out.pointwise_error = std::max(out.pointwise_error, E.cwiseAbs().maxCoeff());
    out.radii.push_back(rad);
  }
  return out;
}

RAdequateResult r_adequate_sectors(const ExponentPolynomialDiagonal& Qz, int r, double eta, double lo, double hi) {
  RAdequateResult res;
  res.family = stokes_rays(Qz, eta);
  double width = pi / r;
  auto w = k_window_for_directions(res.family, lo - 2 * width, hi + 2 * width);
  auto tuples = adequate_tuples(res.family, width, w);
  for (auto& t : tuples) {
    Sector s = sector_of_tuple(t, width);
    double mid = s.mid();
    if (mid < lo - 1e-12 || mid > hi + 1e-12) continue;
    bool dup = false;
    for (auto& e : res.entries)
      if (std::abs(e.sector.arg_min - s.arg_min) < 1e-12 && std::abs(e.sector.arg_max - s.arg_max) < 1e-12) dup = true;
    if (!dup) res.entries.push_back({t, s});
  }
  std::sort(res.entries.begin(), res.entries.end(),
            [](const RAdequateEntry& a, const RAdequateEntry& b) { return a.sector.arg_min < b.sector.arg_min; });
  if (res.entries.empty()) res.diagnostic = "no adequate tuple: the ray families do not fit in an open arc of width pi/r";
  if (res.family.generic && res.family.mu() > 0) {
    long mu = res.family.mu();
    for (long nu = -4 * mu * r; nu <= 4 * mu * r; ++nu) {
      Sector s = generic_sector(res.family, nu);
      if (s.mid() >= lo - 1e-12 && s.mid() <= hi + 1e-12) res.generic.push_back(s);
    }
  }
  return res;
}

RAdequateResult r_adequate_sectors(const FormalData& fd, double eta, double lo, double hi) {
  return r_adequate_sectors(fd.q_diagonal(), fd.r, eta, lo, hi);
}

RAdequateResult r_adequate_sectors(const UserFormalData& fd, double eta, double lo, double hi) {
  return r_adequate_sectors(fd.Q, fd.r, eta, lo, hi);
}

WidenResult widen_to_stokes(const Sector& s, const StokesRayFamily& family, double search) {
  WidenResult out;
  out.sector = s;
  auto dirs = all_ray_directions(family, s.arg_min - search, s.arg_max + search, true);
  for (auto& d : dirs)
    if (std::abs(d.direction - s.arg_min) < 1e-12 || std::abs(d.direction - s.arg_max) < 1e-12) {
      out.on_ray = true;
      out.message = "boundary lies on a Stokes direction; sector unchanged";
      return out;
    }
  double lo = -INFINITY, hi = INFINITY;
  for (auto& d : dirs) {
    if (d.direction < s.arg_min) lo = std::max(lo, d.direction);
    if (d.direction > s.arg_max) hi = std::min(hi, d.direction);
  }
  std::ostringstream msg;
  if (!std::isfinite(lo)) {
    lo = s.arg_min - search;
    out.capped = true;
    msg << "no Stokes direction within the search window below; ";
  }
  if (!std::isfinite(hi)) {
    hi = s.arg_max + search;
    out.capped = true;
    msg << "no Stokes direction within the search window above; ";
  }
  out.message = msg.str();
  out.sector = Sector(lo, hi, s.radius.a);
  return out;
}

namespace {

struct TailData {
  int r = 1;
  int n = 0;
  CVector J;
  Series F;
  Series N;  // coefficients of A F - z^(1-r) F' - F B, orders <= M removed
};

CMatrix tail_remainder(const TailData& td, const CoverPoint& z) {
  CMatrix F = eval_series(td.F, z, -1);
  CMatrix N = eval_series(td.N, z, -1);
  CMatrix Rt = F.partialPivLu().solve(N) * z.pow(static_cast<double>(td.r - 1));
  // z^-J Rt z^J
  for (int i = 0; i < td.n; ++i)
    for (int j = 0; j < td.n; ++j) Rt(i, j) *= z.pow(td.J(j) - td.J(i));
  return Rt;
}

struct Fit {
  double delta = 0.0, C = 0.0;
  bool zero = false;
};

Fit fit_decay(const std::function<CMatrix(const CoverPoint&)>& Rp, const NormalizeOptions& opt) {
  std::vector<double> x, y;
  std::vector<std::pair<double, double>> pts;
  for (int a = 0; a < 3; ++a) {
    double th = opt.arg_lo + (opt.arg_hi - opt.arg_lo) * a / 2.0;
    for (int i = 0; i < 8; ++i) {
      double rad = opt.a * std::pow(64.0, i / 7.0);
      double v = inf_norm(Rp(CoverPoint(rad, th)));
      if (!std::isfinite(v)) throw solver_error("remainder evaluation overflow");
      pts.emplace_back(rad, v);
      if (v > 1e-300) {
        x.push_back(std::log(rad));
        y.push_back(std::log(v));
      }
    }
  }
  Fit f;
  if (x.size() < 3) {
    f.zero = true;
    return f;
  }
  f.delta = -1.0 - ols_slope(x, y);
  for (auto& p : pts) f.C = std::max(f.C, p.second * std::pow(p.first, 1.0 + f.delta));
  f.C *= 1.5;
  return f;
}

NormalizedSystem finish(int r, const ExponentPolynomialDiagonal& Lx, std::function<CMatrix(const CoverPoint&)> Rp,
                        int n, const NormalizeOptions& opt) {
  NormalizedSystem ns;
  ns.r = r;
  ns.Lambda = Lx;
  Fit f = fit_decay(Rp, opt);
  if (f.zero) {
    ns.R = Perturbation::zero(n);
    ns.delta_prime = INFINITY;
    return ns;
  }
  if (!(f.delta > opt.min_delta)) {
    std::ostringstream os;
    os << "fitted remainder decay " << f.delta << " is below " << opt.min_delta << "; use a larger truncation order";
    throw solver_error(os.str());
  }
  ns.delta_prime = f.delta;
  ns.C = f.C;
  BatchEvaluator ev = [Rp, r](const std::vector<CoverPoint>& xs, std::vector<CMatrix>& out) {
    out.resize(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) {
      CoverPoint z(std::pow(xs[k].modulus, 1.0 / r), xs[k].argument / r);
      out[k] = Rp(z) * (xs[k].pow(1.0 / r - 1.0) / static_cast<double>(r));
    }
  };
  ns.R = Perturbation::black_box(n, ev, {f.delta / r, f.C / r});
  return ns;
}

}  // namespace

NormalizedSystem normalize_variable(const FormalData& fd, const MeromorphicSystem& sys, const NormalizeOptions& opt) {
  if (fd.p != 1) throw input_error("the computed formal path has p = 1");
  int n = fd.dim(), r = fd.r, M = fd.M;
  if (sys.r != r) throw input_error("inconsistent exponents: formal data and system have different ranks");
  auto td = std::make_shared<TailData>();
  td->r = r;
  td->n = n;
  td->J = fd.J;
  td->F = fd.F;
  int KA = static_cast<int>(sys.A.size()) - 1;
  int top = std::max(KA + M, M + r);
  Series N(top + 1, CMatrix::Zero(n, n));
  Series AF = mul(sys.A, fd.F, top);
  Series Bs;
  for (int k = 0; k <= r; ++k) Bs.push_back(CMatrix(fd.Lambda[k].asDiagonal()));
  Series FB = mul(fd.F, Bs, top);
  for (int m = 0; m <= top; ++m) {
    N[m] = AF[m] - FB[m];
    if (m - r >= 1 && m - r <= M) N[m] += static_cast<double>(m - r) * fd.F[m - r];
  }
  double big = 1.0;
  for (auto& a : sys.A) big = std::max(big, a.cwiseAbs().maxCoeff());
  for (int m = 0; m <= M; ++m) {
    if (N[m].cwiseAbs().maxCoeff() > 1e-8 * big * std::max(1.0, fd.F.back().cwiseAbs().maxCoeff()))
      throw solver_error("formal data does not satisfy the gauge recursion");
    N[m].setZero();
  }
  td->N = N;
  std::vector<double> ex;
  for (int k = 0; k < r; ++k) ex.push_back(1.0 - static_cast<double>(k) / r);
  std::vector<Block> blocks;
  for (int i = 0; i < n; ++i) {
    Block b;
    for (int k = 0; k < r; ++k) b.lambda.push_back(fd.Q[k](i));
    blocks.push_back(b);
  }
  ExponentPolynomialDiagonal Lx(ex, blocks);
  return finish(r, Lx, [td](const CoverPoint& z) { return tail_remainder(*td, z); }, n, opt);
}

NormalizedSystem normalize_variable(const UserFormalData& fd, const MeromorphicSystem& sys, const NormalizeOptions& opt) {
  int n = static_cast<int>(fd.J.size()), r = fd.r;
  if (sys.r != r || sys.dim() != n || fd.U.rows() != n || fd.Q.dim() != n)
    throw input_error("inconsistent dimensions in the user formal data");
  for (double e : fd.Q.exponents()) {
    double k = (r - e) * fd.p;
    if (std::abs(k - std::round(k)) > 1e-12) throw input_error("inconsistent exponents: Q exponents must be r - k/p");
  }
  std::vector<double> ex;
  for (double e : fd.Q.exponents()) ex.push_back(e / r);
  ExponentPolynomialDiagonal Lx(ex, fd.Q.blocks());
  auto data = std::make_shared<UserFormalData>(fd);
  auto A = std::make_shared<MeromorphicSystem>(sys);
  auto Rp = [data, A](const CoverPoint& z) {
    const auto& d = *data;
    int n = static_cast<int>(d.J.size());
    CMatrix F = d.F_at(z);
    Eigen::PartialPivLU<CMatrix> lu(F);
    CMatrix Rt = lu.solve(A->A_at(z) * F) * z.pow(static_cast<double>(d.r - 1)) - lu.solve(d.dF_at(z));
    CMatrix zj = zJ(d.J, z, 1.0), zmj = zJ(d.J, z, -1.0);
    CMatrix Qp = d.Q.diagonal(z).asDiagonal();
    Rt -= zj * d.U * Qp * d.U.inverse() * zmj;
    for (int i = 0; i < n; ++i) Rt(i, i) -= d.J(i) / z.value();
    return CMatrix(d.U.inverse() * zmj * Rt * zj * d.U);
  };
  return finish(r, Lx, Rp, n, opt);
}

MeromorphicSolution solve_meromorphic(const MeromorphicSystem& sys, const FormalData& fd, const Sector& S, double a_z,
                                      int report_order, const std::vector<CoverPoint>& z_samples,
                                      const SolverConfig& cfg) {
  int r = fd.r;
  if (report_order < 0 || report_order > fd.M) throw input_error("report order must lie in [0, M]");
  NormalizeOptions no;
  no.a = a_z;
  no.arg_lo = S.arg_min + 0.25 * S.opening();
  no.arg_hi = S.arg_max - 0.25 * S.opening();
  MeromorphicSolution out;
  out.normalized = normalize_variable(fd, sys, no);
  out.report_order = report_order;
  const auto& ns = out.normalized;
  ColumnProblem prob;
  prob.phi_lo = r * S.arg_min + pi / 2;
  prob.phi_hi = r * S.arg_max - pi / 2;
  if (!(prob.phi_hi > prob.phi_lo)) throw domain_error("sector is too narrow for the normalized problem");
  prob.a = std::pow(a_z, r);
  for (auto& z : z_samples) prob.samples.push_back(ns.to_x(z));
  out.x_solution = solve_fundamental(ns.Lambda, ns.R, prob, cfg);
  const auto& xs = out.x_solution;
  std::vector<double> lx, ly;
  for (size_t k = 0; k < xs.sample_count; ++k) {
    CoverPoint z = ns.to_z(xs.points[k]);
    out.z_points.push_back(z);
    CMatrix Ys = fd.F_at(z) * zJ(fd.J, z, 1.0) * xs.Z(k) * zJ(fd.J, z, -1.0);
    out.Y_scaled.push_back(Ys);
    double res = inf_norm(Ys - fd.F_at(z, report_order));
    out.residual.push_back(res);
    out.scaled_residual.push_back(res * std::pow(z.modulus, report_order + 1.0));
    if (res > 0) {
      lx.push_back(std::log(z.modulus));
      ly.push_back(std::log(res));
    }
  }
  if (lx.size() >= 3) out.slope = ols_slope(lx, ly);
  return out;
}

Sector widen_subdominant_mero(const MeromorphicSystem& sys, const FormalData& fd, int j, const Sector& S) {
  (void)sys;
  int n = fd.dim();
  if (j < 0 || j >= n) throw input_error("column index out of range");
  auto fam = stokes_rays(fd.q_diagonal());
  auto dirs = all_ray_directions(fam, S.arg_min - 2 * pi, S.arg_max + 2 * pi, true);
  double lo = -INFINITY, hi = INFINITY;
  for (auto& d : dirs) {
    if (d.direction > S.arg_min + 1e-12 && d.direction < S.arg_max - 1e-12)
      throw domain_error("ray inside S: the sector contains a Stokes direction");
    if (d.direction <= S.arg_min + 1e-12) lo = std::max(lo, d.direction);
    if (d.direction >= S.arg_max - 1e-12) hi = std::min(hi, d.direction);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw domain_error("no Stokes directions around the sector");
  Complex zr = std::polar(1.0, fd.r * S.mid());
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    if (!(std::real((fd.Q[0](i) - fd.Q[0](j)) * zr) > 0))
      throw domain_error("dominance violation: column " + std::to_string(j) + " is not dominated on the sector");
  }
  return Sector(lo - pi / fd.r, hi + pi / fd.r, S.radius.a);
}

}  // namespace atlas
