#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "atlas/conditions.hpp"
#include "atlas/perturbation.hpp"
#include "atlas/quadrature.hpp"
#include "atlas/spectral.hpp"

namespace atlas {

struct SignPartition {
  int j_o = 0;                 // entry index of the column
  std::vector<int> block_sign;  // +1 for J_+, -1 for J_-, per block
  std::vector<int> plus_set, minus_set;  // entry indices
};

// Partition certified on the closed interval [phi_lo, phi_hi] of line directions.
SignPartition sign_partition(const ExponentPolynomialDiagonal& L, int j_o, double phi_lo, double phi_hi);

enum class WeightSign { Plus, Minus };

// exp(q_i(z) - q_i(t) - q_jo(z) + q_jo(t)) for entry i, or 0 when i is not in the requested set.
Complex weight(const ExponentPolynomialDiagonal& L, const SignPartition& part, int i, WeightSign s,
               const CoverPoint& t, const CoverPoint& z);
// Unrestricted weight exp of the integral of Lambda_ii - Lambda_jojo from t to z.
Complex weight(const ExponentPolynomialDiagonal& L, int j_o, int i, const CoverPoint& t, const CoverPoint& z);

struct SolverConfig {
  QuadratureConfig quad;
  int max_a_doublings = 8;
  double contraction_limit = 0.9;
  double f0_scale = 1.0;        // start of the iteration, f0 = f0_scale * e_jo
  double line_rotation = 0.0;   // fraction of |J| by which the line direction is rotated
  int jobs = 1;
  double shrink = 0.1;          // J = I shrunk by this fraction of |I| on each side
};

struct ColumnResult {
  int j_o = 0;
  std::vector<CVector> Z;       // one per solution point
  std::vector<double> trace;    // sup-norm deltas per iteration
  int iterations = 0;
  double C = 1.0;
  double M = 0.0;
  double contraction = 0.0;
  double measured_ratio = 0.0;  // max ratio of successive deltas
  SignPartition partition;
  long quadrature_points = 0;
};

struct AsymptoticSolution {
  ExponentPolynomialDiagonal L;
  Sector sector;                // certified domain H_{J,a}
  double phi_lo = 0.0, phi_hi = 0.0;  // closed interval J of line directions
  double a = 0.0;
  int a_doublings = 0;
  bool subdominant = false;
  std::vector<CoverPoint> points;    // samples followed by internal points (z0)
  size_t sample_count = 0;
  std::vector<bool> certified;       // sample lies in the certified domain
  std::optional<CoverPoint> z0;
  std::vector<ColumnResult> columns;

  // n x columns matrix of Z values at point k
  CMatrix Z(size_t k) const;
  // q_jo(z) - q_jo(z0) per column (or q_jo(z) without base point)
  CVector exponents(size_t k) const;
  // fundamental matrix value, exp applied; may overflow for large arguments
  CMatrix Y(size_t k) const;
  std::optional<size_t> z0_index() const;
};

struct ColumnProblem {
  double phi_lo = 0.0;  // interval I of line directions (open)
  double phi_hi = 0.0;
  double a = 10.0;
  std::vector<CoverPoint> samples;  // empty: default 5 rays x 12 radii
  bool normalize_at_z0 = true;
  std::optional<CoverPoint> z0;
};

// Default sample set: 5 rays at fractions 0.1..0.9 of the domain, 12 geometric radii from the
// boundary function to 64 times it.
std::vector<CoverPoint> default_samples(double arg_lo, double arg_hi, const RadiusProfile& rp);

AsymptoticSolution solve_column(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                                const ColumnProblem& prob, const SolverConfig& cfg = {});
AsymptoticSolution solve_fundamental(const ExponentPolynomialDiagonal& L, const Perturbation& R,
                                     const ColumnProblem& prob, const SolverConfig& cfg = {});
// Only the requested columns, over a common point set.
AsymptoticSolution solve_columns(const ExponentPolynomialDiagonal& L, const Perturbation& R,
                                 const std::vector<int>& cols, const ColumnProblem& prob, const SolverConfig& cfg = {});

// Fundamental matrix from solved columns; throws when singular at a sample.
struct FundamentalSamples {
  std::vector<CoverPoint> points;
  std::vector<CMatrix> Z;        // columns Z_j
  std::vector<CVector> E;        // exponents q_j(z) - q_j(z0)
  std::vector<CMatrix> Y;        // Z diag(exp E)
};
FundamentalSamples assemble_fundamental(const AsymptoticSolution& sol);

// Subdominant column via the Volterra equation on half-lines toward +infinity. I is the
// subdominance interval of line directions; the solution domain is H_{I~,a}, I~ = ]I_lo - pi, I_hi[.
AsymptoticSolution solve_subdominant(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                                     const ColumnProblem& prob, const SolverConfig& cfg = {});

struct ConnectionResult {
  CMatrix C;
  double residual = 0.0;
  int samples = 0;
};
// Constant C with Y_A C = Y_B over the common points, weighted least squares entrywise.
ConnectionResult connection_matrix(const AsymptoticSolution& A, const AsymptoticSolution& B);
ConnectionResult connection_matrix(const std::vector<CMatrix>& ZA, const std::vector<CVector>& EA,
                                   const std::vector<CMatrix>& ZB, const std::vector<CVector>& EB);

// Direct evaluation of K_+ or K_- on an analytic f along a straight contour through z with
// direction tau (full line), no discretization of f.
CVector k_operator(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
                   WeightSign s, const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z,
                   double tau, const QuadratureConfig& q = {});
CVector k_plus(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
               const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z, const OrientedLine& line,
               const QuadratureConfig& q = {});
CVector k_minus(const ExponentPolynomialDiagonal& L, const Perturbation& R, const SignPartition& part,
                const std::function<CVector(const CoverPoint&)>& f, const CoverPoint& z, const OrientedLine& line,
                const QuadratureConfig& q = {});

// sup over ordered pairs on probe lines of |W|, the constant C of the operator bound
double weight_constant(const ExponentPolynomialDiagonal& L, const SignPartition& part, double phi_lo, double phi_hi,
                       double a);

// Residual of dY/dz = (Lambda + R) Y at z by 5-point complex differences of Z, relative to
// |Z| |Lambda + R|. Solves the column at the stencil points.
double differential_check(const ExponentPolynomialDiagonal& L, const Perturbation& R, int j_o,
                          const ColumnProblem& prob, const CoverPoint& z, double h, const SolverConfig& cfg = {});

}  // namespace atlas
