#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlas/solver.hpp"
#include "atlas/spectral.hpp"

namespace atlas {

// dY/dz = z^(r-1) A(z) Y with A(z) = sum_k A_k z^-k
struct MeromorphicSystem {
  int r = 1;
  std::vector<CMatrix> A;

  int dim() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
  CMatrix A_at(const CoverPoint& z) const;
  void validate() const;
};

struct FormalData {
  int r = 1;
  int p = 1;
  int M = 1;
  std::vector<CVector> Q;   // diagonals of Q_0 .. Q_{r-1}
  CVector J;                // diagonal of J
  std::vector<CVector> Lambda;  // diagonals of Lambda_0 .. Lambda_r
  std::vector<CMatrix> F;   // F_0 .. F_M
  CMatrix U;

  int dim() const { return static_cast<int>(J.size()); }
  // Q(z) = sum Q_k z^(r-k) as an exponent polynomial in z
  ExponentPolynomialDiagonal q_diagonal() const;
  // F^(order)(z); order < 0 means M
  CMatrix F_at(const CoverPoint& z, int order = -1) const;
  CMatrix dF_at(const CoverPoint& z, int order = -1) const;
};

// Q, J, U, p and the truncation F supplied by the user; F_k multiplies z^(N - k/p).
struct UserFormalData {
  int r = 1;
  int p = 1;
  ExponentPolynomialDiagonal Q;  // exponents r - k/p
  CVector J;
  CMatrix U;
  std::vector<CMatrix> F;
  double N = 0.0;

  CMatrix F_at(const CoverPoint& z) const;
  CMatrix dF_at(const CoverPoint& z) const;
};

// F0 empty: computed from the eigenvectors of A_0, columns of unit norm with first nonzero entry
// positive real.
FormalData formal_reduce_distinct(const MeromorphicSystem& sys, const std::optional<CMatrix>& F0, int M);

struct GaugeCheck {
  double coefficient_error = 0.0;  // Laurent coefficients of order <= r against (r-k) Q_k and J
  double pointwise_error = 0.0;    // evaluated at probe radii, after removing the known higher orders
  std::vector<double> radii;
};
// F_a^(r)^-1 A F_a^(r) = sum (r-k) Q_k z^-k + J z^-r + O(z^(-r-1)), at 8 probe radii in [1e2, 1e5]
GaugeCheck gauge_identity_check(const MeromorphicSystem& sys, const FormalData& fd, double arg = 0.3);

struct RAdequateEntry {
  AdequateTuple tuple;
  Sector sector;
};

struct RAdequateResult {
  StokesRayFamily family;
  std::vector<RAdequateEntry> entries;
  std::vector<Sector> generic;  // the S_nu sectors in the generic case
  std::string diagnostic;
};

RAdequateResult r_adequate_sectors(const ExponentPolynomialDiagonal& Qz, int r, double eta, double window_lo = -2 * pi,
                                   double window_hi = 2 * pi);
RAdequateResult r_adequate_sectors(const FormalData& fd, double eta, double window_lo = -2 * pi,
                                   double window_hi = 2 * pi);
RAdequateResult r_adequate_sectors(const UserFormalData& fd, double eta, double window_lo = -2 * pi,
                                   double window_hi = 2 * pi);

struct WidenResult {
  Sector sector;
  bool on_ray = false;     // a boundary sits on a Stokes direction, sector returned unchanged
  bool capped = false;     // no ray within the search window, widened by the cap
  std::string message;
};

WidenResult widen_to_stokes(const Sector& s, const StokesRayFamily& family, double search = pi);

struct NormalizedSystem {
  int r = 1;
  ExponentPolynomialDiagonal Lambda;  // in x = z^r
  Perturbation R;                     // in x
  double delta_prime = 0.0;           // fitted decay of R' in z
  double C = 0.0;
  // z -> x and back on the cover
  CoverPoint to_x(const CoverPoint& z) const { return {std::pow(z.modulus, r), r * z.argument}; }
  CoverPoint to_z(const CoverPoint& x) const { return {std::pow(x.modulus, 1.0 / r), x.argument / r}; }
};

struct NormalizeOptions {
  double a = 10.0;               // radius in z for the decay fit
  double arg_lo = -0.3, arg_hi = 0.3;  // arguments in z for the fit
  double min_delta = 0.05;
};

NormalizedSystem normalize_variable(const FormalData& fd, const MeromorphicSystem& sys, const NormalizeOptions& opt = {});
NormalizedSystem normalize_variable(const UserFormalData& fd, const MeromorphicSystem& sys,
                                    const NormalizeOptions& opt = {});

struct MeromorphicSolution {
  NormalizedSystem normalized;
  AsymptoticSolution x_solution;
  std::vector<CoverPoint> z_points;
  std::vector<CMatrix> Y_scaled;  // Y(z) e^{-Q(z)} z^{-J}, exponentials removed
  int report_order = 0;           // M of the truncated asymptotics report
  std::vector<double> residual;   // |Y e^{-Q} z^{-J} - F^(M)| per sample
  std::vector<double> scaled_residual;  // times |z|^(M+1)
  double slope = 0.0;             // fitted log-log slope of the residual
};

// Solves on the z-sector S (a certified sector of the formal data). Samples are given in z; empty
// means the default grid of the normalized problem.
MeromorphicSolution solve_meromorphic(const MeromorphicSystem& sys, const FormalData& fd, const Sector& S,
                                      double a_z, int report_order, const std::vector<CoverPoint>& z_samples = {},
                                      const SolverConfig& cfg = {});

Sector widen_subdominant_mero(const MeromorphicSystem& sys, const FormalData& fd, int j, const Sector& S);

}  // namespace atlas
