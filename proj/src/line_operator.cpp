#include "atlas/detail/line_operator.hpp"

#include <cmath>

namespace atlas::detail {

namespace {

struct QPoint {
  CoverPoint t;
  double u;
  Complex w;  // quadrature weight times the kernel weight and dt/ds
  int slot;
};

struct Slot {
  std::vector<Complex>* dest;
  int row0, rows;
};

}  // namespace

LineOperator::LineOperator(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                           const std::vector<int>& block_sign, const CoverPoint& z, double tau, bool two_sided,
                           const QuadratureConfig& q)
    : n_(L.dim()), m_(q.nodes_per_panel), two_sided_(two_sided), z_(z), tau_(tau) {
  Complex d = std::polar(1.0, tau);
  Complex zv = z.value();
  s_f_ = -std::real(std::conj(d) * zv);
  double b = std::imag(std::conj(d) * zv);
  double clearance = (two_sided || s_f_ > 0) ? std::abs(b) : z.modulus;
  if (!(clearance > 0)) throw solver_error("integration contour passes through the origin");
  rho_ = two_sided ? std::abs(b) : std::max(std::abs(b), 0.25 * clearance);

  int jb = L.block_of(j_o);
  for (int blk = 0; blk < L.block_count(); ++blk) {
    Group g;
    g.block = blk;
    g.row0 = L.block_start(blk);
    g.rows = L.blocks()[blk].size;
    g.sign = block_sign.at(blk) > 0 ? 1 : -1;
    g.trivial_weight = blk == jb;
    if (!two_sided && g.sign > 0) throw solver_error("half-line contours carry only the operator toward +infinity");
    groups_.push_back(g);
  }

  // truncation in u from the declared decay of R
  double w = q.panel_width;
  double u_z = std::asinh(-s_f_ / rho_);
  double span = std::abs(z.argument) + pi;
  auto tail_ok = [&](double u) {
    if (R.is_zero()) return true;
    double S = std::max(std::hypot(b, rho_ * std::sinh(u)), clearance);
    return R.tail_bound(S, span) <= q.tail_threshold;
  };
  int k_hi = 1;
  while (!tail_ok(u_z + k_hi * w)) {
    if (++k_hi * w > 600) throw solver_error("tail truncation did not converge; perturbation decays too slowly");
  }
  int k_lo = 0;
  if (two_sided) {
    k_lo = -1;
    while (!tail_ok(u_z + k_lo * w)) {
      if (-(--k_lo) * w > 600) throw solver_error("tail truncation did not converge; perturbation decays too slowly");
    }
  }
  for (int k = k_lo; k <= k_hi; ++k) U_.push_back(u_z + k * w);
  z_boundary_ = -k_lo;

  const auto& gl = gauss_legendre(m_);
  local_nodes_ = gl.x;
  bary_ = barycentric_weights(local_nodes_);
  int P = static_cast<int>(U_.size()) - 1;
  for (int p = 0; p < P; ++p) {
    double mid = 0.5 * (U_[p] + U_[p + 1]), half = 0.5 * (U_[p + 1] - U_[p]);
    for (int j = 0; j < m_; ++j) {
      double u = mid + half * local_nodes_[j];
      node_u_.push_back(u);
      nodes_.push_back(at_u(u));
    }
  }
  build(L, R, j_o, q);
}

CoverPoint LineOperator::at_u(double u) const { return shift(z_, s_of_u(u) * std::polar(1.0, tau_)); }

void LineOperator::build(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                         const QuadratureConfig& q) {
  int P = static_cast<int>(U_.size()) - 1;
  int G = static_cast<int>(groups_.size());
  int jb = L.block_of(j_o);
  node_coeffs_.assign(G, std::vector<Coeffs>(nodes_.size()));
  panel_coeffs_.assign(G, std::vector<Coeffs>(P));
  node_transfer_.assign(G, std::vector<Complex>(nodes_.size(), 1.0));
  panel_transfer_.assign(G, std::vector<Complex>(P, 1.0));
  if (R.is_zero()) {
    for (int g = 0; g < G; ++g) {
      size_t sz = static_cast<size_t>(m_) * groups_[g].rows * n_;
      for (auto& c : node_coeffs_[g]) c.assign(sz, 0.0);
      for (auto& c : panel_coeffs_[g]) c.assign(sz, 0.0);
    }
    return;
  }

  const Complex d = std::polar(1.0, tau_);
  const auto& sub = gauss_legendre(q.sub_nodes);
  std::vector<Complex> Pb(U_.size());  // phase at the boundaries, per group below
  std::vector<QPoint> pts;
  std::vector<Slot> slots;
  std::vector<CoverPoint> tlist;
  std::vector<Complex> rbuf;
  std::vector<double> basis(m_);

  auto phase = [&](int g, const CoverPoint& t) -> Complex {
    return groups_[g].trivial_weight ? Complex(0.0) : L.q_difference(groups_[g].block, jb, t);
  };
  auto check = [&](Complex wv) {
    if (!std::isfinite(std::abs(wv))) throw solver_error("kernel weight overflow; the L-condition does not hold on this contour");
    max_weight_ = std::max(max_weight_, std::abs(wv));
  };

  // points of the integral from target (s_t) to end (s_e), weights relative to the target
  auto gen = [&](int g, double s_t, double s_e, const CoverPoint& t_t, int slot) {
    const Group& gr = groups_[g];
    Complex PT = phase(g, t_t);
    double u_t = std::asinh((s_t - s_f_) / rho_), u_e = std::asinh((s_e - s_f_) / rho_);
    double dir = u_e > u_t ? 1.0 : -1.0;
    double len = std::abs(u_e - u_t);
    // phase change per unit of u
    auto rate = [&](double u) {
      return std::abs(L.lambda_difference(gr.block, jb, at_u(u))) * rho_ * std::cosh(u);
    };
    double sig = 0.0;
    int count = 0;
    while (sig < len) {
      double u0 = u_t + dir * sig;
      double h = std::min(len - sig, q.panel_width);
      if (!gr.trivial_weight) {
        double r0 = rate(u0);
        if (r0 > 0) h = std::min(h, q.oscillation_cap / r0);
        double r1 = rate(u0 + dir * h);
        if (r1 > 0) h = std::min(h, q.oscillation_cap / r1);
      }
      double last_w = 1.0;
      for (int k = 0; k < q.sub_nodes; ++k) {
        double uk = u0 + dir * h * 0.5 * (sub.x[k] + 1.0);
        CoverPoint t = at_u(uk);
        Complex W = gr.trivial_weight ? Complex(1.0) : std::exp(PT - phase(g, t));
        check(W);
        last_w = std::abs(W);
        pts.push_back({t, uk, sub.w[k] * 0.5 * h * rho_ * std::cosh(uk) * d * W, slot});
      }
      sig += h;
      if (last_w < q.weight_floor) break;
      if (++count > q.max_panels) throw solver_error("kernel quadrature exceeded its panel budget");
    }
  };

  for (int p = 0; p < P; ++p) {
    pts.clear();
    slots.clear();
    double sp0 = s_of_u(U_[p]), sp1 = s_of_u(U_[p + 1]);
    CoverPoint tp0 = at_u(U_[p]), tp1 = at_u(U_[p + 1]);
    for (int g = 0; g < G; ++g) {
      const Group& gr = groups_[g];
      size_t sz = static_cast<size_t>(m_) * gr.rows * n_;
      Complex P0 = phase(g, tp0), P1 = phase(g, tp1);
      // boundary panel integral
      panel_coeffs_[g][p].assign(sz, 0.0);
      slots.push_back({&panel_coeffs_[g][p], gr.row0, gr.rows});
      if (gr.sign < 0) {
        panel_transfer_[g][p] = std::exp(P0 - P1);
        gen(g, sp0, sp1, tp0, static_cast<int>(slots.size()) - 1);
      } else {
        panel_transfer_[g][p] = std::exp(P1 - P0);
        gen(g, sp1, sp0, tp1, static_cast<int>(slots.size()) - 1);
      }
      check(panel_transfer_[g][p]);
      for (int j = 0; j < m_; ++j) {
        int k = p * m_ + j;
        node_coeffs_[g][k].assign(sz, 0.0);
        slots.push_back({&node_coeffs_[g][k], gr.row0, gr.rows});
        double sk = s_of_u(node_u_[k]);
        Complex Pk = phase(g, nodes_[k]);
        if (gr.sign < 0) {
          node_transfer_[g][k] = std::exp(Pk - P1);
          gen(g, sk, sp1, nodes_[k], static_cast<int>(slots.size()) - 1);
        } else {
          node_transfer_[g][k] = std::exp(Pk - P0);
          gen(g, sk, sp0, nodes_[k], static_cast<int>(slots.size()) - 1);
        }
        check(node_transfer_[g][k]);
      }
    }
    tlist.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) tlist[i] = pts[i].t;
    R.evaluate_flat(tlist, rbuf);
    qpoints_ += static_cast<long>(pts.size());
    double mid = 0.5 * (U_[p] + U_[p + 1]), half = 0.5 * (U_[p + 1] - U_[p]);
    size_t nn = static_cast<size_t>(n_) * n_;
    for (size_t i = 0; i < pts.size(); ++i) {
      const QPoint& qp = pts[i];
      const Slot& sl = slots[qp.slot];
      lagrange_basis(local_nodes_, bary_, (qp.u - mid) / half, basis.data());
      const Complex* Rm = rbuf.data() + i * nn;
      Complex* dst = sl.dest->data();
      for (int j = 0; j < m_; ++j) {
        Complex c = qp.w * basis[j];
        for (int r = 0; r < sl.rows; ++r) {
          const Complex* row = Rm + static_cast<size_t>(sl.row0 + r) * n_;
          Complex* out = dst + (static_cast<size_t>(j) * sl.rows + r) * n_;
          for (int col = 0; col < n_; ++col) out[col] += c * row[col];
        }
      }
    }
  }
}

CVector LineOperator::apply(const std::vector<CVector>& f, std::vector<CVector>& out, const CVector& e) const {
  int P = static_cast<int>(U_.size()) - 1;
  int N = node_count();
  out.assign(N, e);
  CVector at_z = e;
  for (size_t g = 0; g < groups_.size(); ++g) {
    const Group& gr = groups_[g];
    CVector acc = CVector::Zero(gr.rows);
    auto contract = [&](const Coeffs& c, int p, CVector& res) {
      res.setZero();
      for (int j = 0; j < m_; ++j) {
        const CVector& fj = f[p * m_ + j];
        for (int r = 0; r < gr.rows; ++r) {
          const Complex* row = c.data() + (static_cast<size_t>(j) * gr.rows + r) * n_;
          Complex s = 0.0;
          for (int col = 0; col < n_; ++col) s += row[col] * fj(col);
          res(r) += s;
        }
      }
    };
    CVector tmp(gr.rows);
    if (gr.sign < 0) {
      // acc holds the integral from boundary p+1 to +infinity
      if (z_boundary_ == P) at_z.segment(gr.row0, gr.rows) -= acc;
      for (int p = P - 1; p >= 0; --p) {
        for (int j = 0; j < m_; ++j) {
          int k = p * m_ + j;
          contract(node_coeffs_[g][k], p, tmp);
          out[k].segment(gr.row0, gr.rows) -= node_transfer_[g][k] * acc + tmp;
        }
        contract(panel_coeffs_[g][p], p, tmp);
        acc = panel_transfer_[g][p] * acc + tmp;
        if (p == z_boundary_) at_z.segment(gr.row0, gr.rows) -= acc;
      }
    } else {
      if (z_boundary_ == 0) at_z.segment(gr.row0, gr.rows) += acc;
      for (int p = 0; p < P; ++p) {
        for (int j = 0; j < m_; ++j) {
          int k = p * m_ + j;
          contract(node_coeffs_[g][k], p, tmp);
          out[k].segment(gr.row0, gr.rows) += node_transfer_[g][k] * acc + tmp;
        }
        contract(panel_coeffs_[g][p], p, tmp);
        acc = panel_transfer_[g][p] * acc + tmp;
        if (p + 1 == z_boundary_) at_z.segment(gr.row0, gr.rows) += acc;
      }
    }
  }
  return at_z;
}

CVector LineOperator::value_at_z(const std::vector<CVector>& f, const CVector& e) const {
  std::vector<CVector> scratch;
  return apply(f, scratch, e);
}

}  // namespace atlas::detail
