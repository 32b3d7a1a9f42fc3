#include "atlas/perturbation.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace atlas {

Perturbation Perturbation::zero(int n) {
  Perturbation p;
  p.n_ = n;
  p.kind_ = Kind::Zero;
  return p;
}

Perturbation Perturbation::expression(int n, std::vector<ExprTerm> terms) {
  for (size_t k = 0; k < terms.size(); ++k) {
    auto& t = terms[k];
    std::string at = "perturbation.terms[" + std::to_string(k) + "]";
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) throw input_error(at + ": row/col out of range");
    if (t.log_power < 0) throw input_error(at + ".log_power must be >= 0");
    if (!std::isfinite(t.exponent)) throw input_error(at + ".exponent must be finite");
  }
  Perturbation p;
  p.n_ = n;
  p.kind_ = Kind::Expr;
  p.terms_ = std::move(terms);
  return p;
}

Perturbation Perturbation::black_box(int n, BatchEvaluator f, DecayBound bound) {
  if (!(bound.delta > 0) || !(bound.C >= 0)) throw input_error("black-box perturbation needs delta > 0 and C >= 0");
  Perturbation p;
  p.n_ = n;
  p.kind_ = Kind::BlackBox;
  p.eval_ = std::make_shared<const BatchEvaluator>(std::move(f));
  p.bound_ = bound;
  return p;
}

Perturbation Perturbation::scaled(Complex s) const {
  Perturbation p = *this;
  if (kind_ == Kind::Expr)
    for (auto& t : p.terms_) t.coeff *= s;
  else if (kind_ == Kind::BlackBox) {
    p.scale_ *= s;
    p.bound_.C *= std::abs(s);
  }
  return p;
}

Perturbation Perturbation::plus(const Perturbation& other) const {
  if (other.n_ != n_) throw domain_error("perturbation dimensions differ");
  if (is_zero()) return other;
  if (other.is_zero()) return *this;
  if (kind_ == Kind::Expr && other.kind_ == Kind::Expr) {
    auto t = terms_;
    t.insert(t.end(), other.terms_.begin(), other.terms_.end());
    return expression(n_, t);
  }
  auto x = *this, y = other;
  BatchEvaluator f = [x, y](const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) {
    std::vector<CMatrix> tmp;
    x.evaluate(pts, out);
    y.evaluate(pts, tmp);
    for (size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
  };
  auto dx = x.decay(), dy = y.decay();
  return black_box(n_, f, {std::min(dx.delta, dy.delta), dx.C + dy.C});
}

CMatrix Perturbation::operator()(const CoverPoint& z) const {
  CMatrix m = CMatrix::Zero(n_, n_);
  if (kind_ == Kind::Expr) {
    Complex lz = z.log();
    for (auto& t : terms_) {
      Complex v = t.coeff * std::exp(t.exponent * lz);
      for (int k = 0; k < t.log_power; ++k) v *= lz;
      m(t.row, t.col) += v;
    }
  } else if (kind_ == Kind::BlackBox) {
    std::vector<CMatrix> out;
    (*eval_)({z}, out);
    m = out.at(0) * scale_;
  }
  return m;
}

void Perturbation::evaluate(const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) const {
  if (kind_ == Kind::BlackBox) {
    (*eval_)(pts, out);
    if (out.size() != pts.size()) throw solver_error("evaluator returned a wrong number of matrices");
    if (scale_ != 1.0)
      for (auto& m : out) m *= scale_;
    return;
  }
  out.resize(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = (*this)(pts[i]);
}

void Perturbation::evaluate_flat(const std::vector<CoverPoint>& pts, std::vector<Complex>& buf) const {
  size_t nn = static_cast<size_t>(n_) * n_;
  buf.assign(pts.size() * nn, Complex(0.0));
  if (is_zero()) return;
  if (kind_ == Kind::Expr) {
    for (size_t k = 0; k < pts.size(); ++k) {
      Complex lz = pts[k].log();
      Complex* m = buf.data() + k * nn;
      for (auto& t : terms_) {
        Complex v = t.coeff * std::exp(t.exponent * lz);
        for (int q = 0; q < t.log_power; ++q) v *= lz;
        m[t.row * n_ + t.col] += v;
      }
    }
    return;
  }
  std::vector<CMatrix> out;
  evaluate(pts, out);
  for (size_t k = 0; k < pts.size(); ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) buf[k * nn + i * n_ + j] = out[k](i, j);
}

Complex Perturbation::trace(const CoverPoint& z) const { return (*this)(z).trace(); }

DecayBound Perturbation::decay() const {
  if (kind_ == Kind::BlackBox) return bound_;
  if (is_zero()) return {1.0, 0.0};
  double delta = INFINITY;
  for (auto& t : terms_) delta = std::min(delta, -1.0 - t.exponent - (t.log_power > 0 ? 1e-3 : 0.0));
  // C from a radial scan, |arg| up to 2 pi
  double C = 0.0;
  for (double lr = 0.0; lr <= 30.0; lr += 0.25) {
    double r = std::exp(lr);
    std::vector<double> rows(n_, 0.0);
    for (auto& t : terms_) {
      double v = std::abs(t.coeff) * std::pow(r, t.exponent + 1 + delta);
      if (t.log_power) v *= std::pow(std::hypot(lr, 2 * pi), t.log_power);
      rows[t.row] += v;
    }
    for (double v : rows) C = std::max(C, v);
  }
  return {delta, C};
}

double Perturbation::norm_bound(const CoverPoint& z) const {
  if (is_zero()) return 0.0;
  if (kind_ == Kind::BlackBox) return bound_.C * std::pow(z.modulus, -1 - bound_.delta);
  std::vector<double> rows(n_, 0.0);
  double lm = std::abs(z.log());
  for (auto& t : terms_) rows[t.row] += std::abs(t.coeff) * std::pow(z.modulus, t.exponent) * std::pow(lm, t.log_power);
  double best = 0.0;
  for (double v : rows) best = std::max(best, v);
  return best;
}

double Perturbation::tail_bound(double S, double arg_span) const {
  if (is_zero()) return 0.0;
  double delta = bound_.delta;
  if (kind_ == Kind::Expr) {
    delta = INFINITY;
    for (auto& t : terms_) delta = std::min(delta, -1.0 - t.exponent - (t.log_power > 0 ? 1e-3 : 0.0));
  }
  if (!(delta > 0)) return INFINITY;
  CoverPoint p(S, arg_span);
  // norm_bound ~ c S^(-1-delta) so the tail integral is about S * bound / delta
  return norm_bound(p) * S / delta;
}

void Perturbation::spot_verify(double a, double arg_lo, double arg_hi, unsigned long long seed) const {
  if (kind_ != Kind::BlackBox) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lr(std::log(a), std::log(100 * a));
  std::uniform_real_distribution<double> ar(arg_lo, arg_hi);
  std::vector<CoverPoint> pts;
  for (int k = 0; k < 32; ++k) pts.emplace_back(std::exp(lr(rng)), ar(rng));
  std::vector<CMatrix> out;
  evaluate(pts, out);
  for (size_t k = 0; k < pts.size(); ++k) {
    double bound = norm_bound(pts[k]);
    double v = inf_norm(out[k]);
    if (!std::isfinite(v) || v > 2 * bound) {
      std::ostringstream os;
      os << "black-box perturbation violates its declared bound at modulus " << pts[k].modulus << " argument "
         << pts[k].argument << ": |R| = " << v << " > 2 * " << bound;
      throw input_error(os.str());
    }
  }
}

}  // namespace atlas
