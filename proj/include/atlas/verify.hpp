#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlas/solver.hpp"

namespace atlas {

struct PathSegment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  CoverPoint from, to;

  CoverPoint at(double t) const;
  Complex velocity(double t) const;  // dz/dt
};

// Connected chain of straight segments and circular arcs on the cover.
class ContourPath {
 public:
  explicit ContourPath(const CoverPoint& start);

  ContourPath& line_to(const CoverPoint& p);
  ContourPath& arc_to(double argument);  // keeps the modulus
  ContourPath reversed() const;

  const std::vector<PathSegment>& segments() const { return segs_; }
  std::vector<CoverPoint> nodes() const;
  CoverPoint start() const { return start_; }
  CoverPoint end() const { return segs_.empty() ? start_ : segs_.back().to; }

 private:
  CoverPoint start_;
  std::vector<PathSegment> segs_;
};

struct OdeOptions {
  double tol = 1e-10;
  double h0 = 1e-3;  // initial step as a fraction of a segment
  long max_steps = 5000000;
  // integrate Y exp(-q_g) instead of Y for the entry g, removing that exponential factor
  std::optional<int> gauge_entry;
};

struct OdeResult {
  std::vector<CMatrix> at_nodes;  // value at every path node, index 0 is the start
  long steps = 0;
  long rejected = 0;
};

// Embedded Runge-Kutta 5(4) (Dormand-Prince) integration of dY/dz = (Lambda + R) Y along the path.
OdeResult integrate_ode(const ExponentPolynomialDiagonal& L, const Perturbation& R, const ContourPath& path,
                        const CMatrix& Y0, const OdeOptions& opt = {});

struct ResidualRay {
  double argument = 0.0;
  std::vector<double> radii;
  std::vector<double> residuals;
  double slope = 0.0;
  bool monotone = true;
};

enum class ScanStatus { Pass, Fail, Skipped, Inconclusive };
const char* to_string(ScanStatus s);

struct ResidualReport {
  std::vector<ResidualRay> rays;
  double expected_delta = 1.0;
  double slope_tolerance = 0.1;
  double slope = 0.0;  // mean of the per-ray slopes that were fitted
  ScanStatus status = ScanStatus::Skipped;
  std::string reason;
};

struct ScanOptions {
  double slope_tolerance = 0.1;
  double negligible = 1e-13;  // residuals below this count as exact and skip the fit
  double monotone_slack = 1e-12;
};

// Groups samples by ray, computes |Z - e_jo| (max over the solved columns), fits log-log slopes on
// the last two thirds of the radii.
ResidualReport residual_scan(const AsymptoticSolution& sol, double expected_delta, const ScanOptions& opt = {});
ResidualReport residual_scan(const std::vector<ResidualRay>& rays, double expected_delta, const ScanOptions& opt = {});

// max over samples of |det Y(z) / (det Y(z0) exp int tr(Lambda + R)) - 1|, the trace integral taken
// along the radial segment from z0 followed by an arc.
double liouville_check(const FundamentalSamples& fs, const ExponentPolynomialDiagonal& L, const Perturbation& R,
                       size_t base, const QuadratureConfig& q = {});

struct OracleOptions {
  double anchor_radius = 200.0;
  OdeOptions ode;
};

struct OracleReport {
  double max_deviation = 0.0;
  std::vector<std::pair<CoverPoint, double>> deviations;
  std::vector<std::string> notes;
};

// Solver against the ODE integrated from a solver value at the anchor radius on each sample ray,
// in the column frame. Rays where the competing exponentials decay outward are anchored at the
// smallest sample radius instead.
OracleReport oracle_compare(const ExponentPolynomialDiagonal& L, const Perturbation& R, const AsymptoticSolution& sol,
                            const ColumnProblem& prob, const SolverConfig& cfg, const OracleOptions& opt = {});

struct StressVariant {
  std::string name;
  SolverConfig cfg;
};

struct StressReport {
  double max_deviation = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::vector<std::string> ran;
  std::vector<std::string> not_applicable;
};

// default variants: base, rotated line family, looser tolerance, f0 = 1.5 e_jo
std::vector<StressVariant> default_variants(const SolverConfig& base);
StressReport uniqueness_stress(const ExponentPolynomialDiagonal& L, const Perturbation& R, const std::vector<int>& cols,
                               const ColumnProblem& prob, const std::vector<StressVariant>& variants);

struct DominationRay {
  double argument = 0.0;
  std::vector<double> radii;
  std::vector<double> log_ratio;  // log |y_jo| - log |y|
  bool bounded = true;
};

struct DominationReport {
  std::vector<DominationRay> rays;
  bool pass = true;
};

// |y_jo(z)| / |y(z)| along the common sample rays of the two solutions; y is the column `other`
// of the second solution.
DominationReport subdominant_domination_check(const AsymptoticSolution& sub, const AsymptoticSolution& others,
                                              int other_column, double slack = 1e-9);

}  // namespace atlas
