#pragma once

#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/perturbation.hpp"
#include "atlas/quadrature.hpp"
#include "atlas/spectral.hpp"

namespace atlas::detail {

// Nystrom discretization of the integral equation restricted to one straight contour through
// a sample point z. The unknown lives on Gauss-Legendre nodes of panels in the parameter
// u = asinh((s - s_f)/rho), s the arclength from z along the direction e^{i tau}.
// Full lines carry both operators; half-lines (Volterra case) start at z and only carry the
// integrals toward +infinity.
class LineOperator {
 public:
  struct Group {
    int block = 0;
    int row0 = 0;
    int rows = 0;
    int sign = -1;  // +1: integrate from the -infinity end, -1: toward +infinity
    bool trivial_weight = false;
  };

  LineOperator(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o, const std::vector<int>& block_sign,
               const CoverPoint& z, double tau, bool two_sided, const QuadratureConfig& q);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<CoverPoint>& nodes() const { return nodes_; }
  double max_weight() const { return max_weight_; }
  long quadrature_points() const { return qpoints_; }

  // one application f -> e + K+[f] - K-[f] on the nodes; returns the value at z
  CVector apply(const std::vector<CVector>& f, std::vector<CVector>& out, const CVector& e) const;
  CVector value_at_z(const std::vector<CVector>& f, const CVector& e) const;

 private:
  // one rows x n block per panel node, flat index (j * rows + r) * n + c
  using Coeffs = std::vector<Complex>;
  void build(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o, const QuadratureConfig& q);
  CoverPoint at_u(double u) const;
  double s_of_u(double u) const { return s_f_ + rho_ * std::sinh(u); }

  int n_ = 0;
  int m_ = 0;  // nodes per panel
  bool two_sided_ = true;
  CoverPoint z_;
  double tau_ = 0.0;
  double s_f_ = 0.0;
  double rho_ = 1.0;
  std::vector<double> U_;  // panel boundaries
  int z_boundary_ = 0;     // index of the boundary sitting at z
  std::vector<double> local_nodes_;  // reference nodes in [-1,1]
  std::vector<double> bary_;
  std::vector<CoverPoint> nodes_;
  std::vector<double> node_u_;
  std::vector<Group> groups_;
  // per group: node partial coefficients, boundary panel coefficients, transfer weights
  std::vector<std::vector<Coeffs>> node_coeffs_;      // [g][node]
  std::vector<std::vector<Coeffs>> panel_coeffs_;     // [g][panel]
  std::vector<std::vector<Complex>> node_transfer_;   // [g][node]
  std::vector<std::vector<Complex>> panel_transfer_;  // [g][panel]
  double max_weight_ = 1.0;
  long qpoints_ = 0;
};

}  // namespace atlas::detail
