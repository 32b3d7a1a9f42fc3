#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/perturbation.hpp"
#include "atlas/quadrature.hpp"
#include "atlas/spectral.hpp"

namespace atlas {

enum class LClass { L1, L2, Fails };
const char* to_string(LClass c);

struct PhaseBoundData {
  int i = 0;
  int j = 0;
  double tau = 0.0;
  LClass classification = LClass::Fails;
  std::optional<int> witness;
};

// Re of the integral of Lambda_ii - Lambda_jj from w to z along the line (entry indices).
double phase_real_integral(const ExponentPolynomialDiagonal& L, int i, int j, const OrientedLine& line,
                           const CoverPoint& w, const CoverPoint& z);

// Classification of Re(lambda t^sigma) differences along lines of direction tau.
PhaseBoundData classify_direction(Complex lambda, double sigma, double tau);
// Same, from the ray direction tau_star = (3pi/2 - arg lambda) / sigma.
PhaseBoundData classify_tau_star(double tau_star, double sigma, double tau);
// Block pair (i, j) of Lambda; identical blocks give L2.
PhaseBoundData classify_pair(const ExponentPolynomialDiagonal& L, int bi, int bj, double tau);

// True when the direction tau satisfies the three monotonicity conditions that make block j_o
// subdominant along every iota curve of direction tau.
bool subdominant_condition(const ExponentPolynomialDiagonal& L, int j_o, double tau);

// L1 norm of R along the line, arclength measure.
double good_decay_norm(const Perturbation& R, const OrientedLine& line, const QuadratureConfig& q = {});
// L1 norm along an iota curve (straight part toward +infinity).
double iota_decay_norm(const Perturbation& R, const IotaCurve& c, const QuadratureConfig& q = {});

struct DecayReport {
  std::vector<std::pair<std::string, double>> norms;
  double M_RaJ = 0.0;
  double M_tilde = 0.0;
  double M_double_a = 0.0;  // M at 2a, for the monotone decrease report
  double delta = 0.0;
};

DecayReport decay_supremum(const Perturbation& R, double phi_lo, double phi_hi, double a, int probes = 5,
                           const QuadratureConfig& q = {}, bool with_iota = false);

}  // namespace atlas
