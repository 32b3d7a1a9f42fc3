#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atlas/geometry.hpp"

namespace atlas {

struct Block {
  int size = 1;
  std::vector<Complex> lambda;  // coefficient of each exponent
  Complex log_coeff = 0.0;      // coefficient of 1/z in the block, i.e. of log z in the primitive
};

// Lambda(z) = sum_k sigma_k lambda^(k) z^(sigma_k - 1) (+ mu/z) on each block; q_i is its primitive.
// Exponents are strictly decreasing and positive. The normalized form has sigma_0 = 1;
// leading exponents other than 1 are accepted for geometry in the meromorphic z-plane.
class ExponentPolynomialDiagonal {
 public:
  ExponentPolynomialDiagonal() = default;
  ExponentPolynomialDiagonal(std::vector<double> exponents, std::vector<Block> blocks);

  static ExponentPolynomialDiagonal constant_diagonal(const std::vector<Complex>& d);

  const std::vector<double>& exponents() const { return exponents_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int dim() const { return dim_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_of(int entry) const { return entry_block_.at(entry); }
  int block_start(int block) const { return block_start_.at(block); }
  bool is_normalized() const { return !exponents_.empty() && exponents_[0] == 1.0; }
  bool has_log() const;

  Complex lambda(int block, const CoverPoint& z) const;
  Complex q(int block, const CoverPoint& z) const;
  Complex q_difference(int bi, int bj, const CoverPoint& z) const;
  // derivative of q_i - q_j, for step-size control along contours
  Complex lambda_difference(int bi, int bj, const CoverPoint& z) const;
  CVector diagonal(const CoverPoint& z) const;  // entry values of Lambda
  CVector q_entries(const CoverPoint& z) const;

 private:
  std::vector<double> exponents_;
  std::vector<Block> blocks_;
  std::vector<int> entry_block_;
  std::vector<int> block_start_;
  int dim_ = 0;
};

struct LeadingPair {
  int k = 0;
  Complex lambda;
  double sigma = 0.0;
};

LeadingPair leading_pair(const ExponentPolynomialDiagonal& L, int i, int j);

struct RayLabel {
  double tau = 0.0;
  double sigma = 1.0;
  std::vector<std::pair<int, int>> pairs;  // contributing ordered block pairs
};

struct StokesRayFamily {
  std::vector<RayLabel> rays;
  double eta = 0.0;
  bool generic = false;
  double leading_sigma = 1.0;
  int j_o = -1;  // set for subdominant families
  int mu() const { return static_cast<int>(rays.size()); }
};

inline constexpr double default_eta = pi / 2 + 1e-3;

// Throws an Input error tagged "eta-on-ray" when eta is not generic.
StokesRayFamily stokes_rays(const ExponentPolynomialDiagonal& L, double eta);
// Default eta with automatic perturbation.
StokesRayFamily stokes_rays(const ExponentPolynomialDiagonal& L);
bool eta_is_generic(const ExponentPolynomialDiagonal& L, double eta);

struct RayDirection {
  double direction = 0.0;
  int rho = 0;
  int k = 0;
};

// Directions in the open window ]lo, hi[, or the closed one when inclusive is set.
std::vector<RayDirection> all_ray_directions(const StokesRayFamily& f, double lo, double hi,
                                             bool inclusive = false);

struct AdequateTuple {
  std::vector<int> k;
  double a = 0.0;  // interval ]a, b[
  double b = 0.0;
};

struct KWindow {
  std::vector<int> kmin, kmax;
};

KWindow default_k_window(const StokesRayFamily& f, double center = 0.0);
// k range covering ray directions inside [lo, hi]
KWindow k_window_for_directions(const StokesRayFamily& f, double lo, double hi);

std::vector<AdequateTuple> adequate_tuples(const StokesRayFamily& f, double width, const KWindow& w);
std::vector<AdequateTuple> adequate_tuples(const StokesRayFamily& f, double width);

Sector sector_of_tuple(const AdequateTuple& t, double width, double a = 0.0);

bool generic_check(const ExponentPolynomialDiagonal& L);
double generic_tau(const StokesRayFamily& f, long nu);
Sector generic_sector(const StokesRayFamily& f, long nu, double a = 0.0);

StokesRayFamily subdominant_rays(const ExponentPolynomialDiagonal& L, int j_o, double eta);
StokesRayFamily subdominant_rays(const ExponentPolynomialDiagonal& L, int j_o);

struct SubdominantSector {
  std::optional<Sector> sector;
  std::optional<std::pair<double, double>> phi_interval;  // the interval I of line directions
  double spread = 0.0;
  double first = 0.0;
  double last = 0.0;
  std::string reason;
  bool ok() const { return sector.has_value(); }
};

SubdominantSector subdominant_sector(const StokesRayFamily& rays, long k);

// Raw intersection of the per-ray admissible tau intervals for a given k tuple, without the
// sector guarantee of the generic case. Empty optional when the intersection is empty.
std::optional<std::pair<double, double>> subdominant_interval_diagnostic(const StokesRayFamily& rays,
                                                                         const std::vector<int>& k);

}  // namespace atlas
