#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "atlas/geometry.hpp"

namespace atlas {

// coeff * z^exponent * (log z)^log_power in entry (row, col)
struct ExprTerm {
  int row = 0;
  int col = 0;
  Complex coeff;
  double exponent = -2.0;
  int log_power = 0;
};

// |R(z)| <= C |z|^(-1-delta)
struct DecayBound {
  double delta = 1.0;
  double C = 1.0;
};

using BatchEvaluator = std::function<void(const std::vector<CoverPoint>&, std::vector<CMatrix>&)>;

class Perturbation {
 public:
  Perturbation() = default;
  static Perturbation zero(int n);
  static Perturbation expression(int n, std::vector<ExprTerm> terms);
  static Perturbation black_box(int n, BatchEvaluator f, DecayBound bound);

  int dim() const { return n_; }
  bool is_zero() const { return kind_ == Kind::Zero || (kind_ == Kind::Expr && terms_.empty()); }
  bool is_expression() const { return kind_ != Kind::BlackBox; }
  const std::vector<ExprTerm>& terms() const { return terms_; }

  Perturbation scaled(Complex s) const;
  Perturbation plus(const Perturbation& other) const;

  CMatrix operator()(const CoverPoint& z) const;
  void evaluate(const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) const;
  // row-major n*n block per point, appended contiguously into buf
  void evaluate_flat(const std::vector<CoverPoint>& pts, std::vector<Complex>& buf) const;
  Complex trace(const CoverPoint& z) const;

  // Effective decay exponent and constant valid for |z| >= 1. Log terms lose 1e-3 in delta.
  DecayBound decay() const;
  // Upper bound for the sup norm of R(z), used for tail truncation.
  double norm_bound(const CoverPoint& z) const;
  // Tail of the integral of norm_bound beyond modulus S along a straight contour.
  double tail_bound(double S, double arg_span) const;

  // Checks the declared bound on 32 seeded random probes in the given domain.
  void spot_verify(double a, double arg_lo, double arg_hi, unsigned long long seed = 12345) const;

 private:
  enum class Kind { Zero, Expr, BlackBox };
  Kind kind_ = Kind::Zero;
  int n_ = 0;
  std::vector<ExprTerm> terms_;
  std::shared_ptr<const BatchEvaluator> eval_;
  DecayBound bound_;
  Complex scale_ = 1.0;
};

}  // namespace atlas
