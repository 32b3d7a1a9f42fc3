#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atlas/meromorphic.hpp"
#include "atlas/solver.hpp"
#include "json.hpp"

namespace atlas {

enum class SystemKind { Normalized, Meromorphic, Rays };

struct SystemSpec {
  SystemKind kind = SystemKind::Normalized;
  ExponentPolynomialDiagonal L;     // normalized Lambda, possibly with a non-unit leading exponent
  Perturbation R;
  MeromorphicSystem mero;
  std::optional<CMatrix> F0;
  int M = 8;                        // truncation order of the computed formal solution
  std::optional<UserFormalData> user;
  StokesRayFamily rays;             // for kind Rays
  std::string perturbation_type = "zero";
};

struct DomainSpec {
  double a = 10.0;
  std::optional<double> eta;
  double window_lo = -2 * pi, window_hi = 2 * pi;
  std::optional<std::pair<double, double>> interval;  // line directions I
  std::optional<std::pair<double, double>> sector;    // arguments of the domain
  std::vector<int> columns;                           // empty: all
  int column = 0;                                     // subdominant column, entry index
  long k = 0;                                         // subdominant sector index
  std::optional<double> width;
  std::optional<int> rank;
};

struct OutputSpec {
  std::vector<double> radii;
  std::vector<double> arguments;
  int report_order = -1;  // meromorphic report order, -1 means min(M, 2)
};

struct VerifySpec {
  bool oracle = true;
  bool stress = false;
  double oracle_tol = 1e-7;
  double liouville_tol = 1e-8;
  double anchor_radius = 200.0;
};

struct SweepSpec {
  std::string parameter = "perturbation.scale";  // or domain.a
  std::vector<double> values;
};

struct ProblemSpec {
  SystemSpec system;
  DomainSpec domain;
  SolverConfig solver;
  OutputSpec outputs;
  VerifySpec verify;
  std::optional<SweepSpec> sweep;
  std::string source;

  int dim() const;
  double eta() const;
};

// Errors carry the JSON pointer of the offending field.
ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

Complex parse_complex(const nlohmann::json& j, const std::string& ptr);
CMatrix parse_matrix(const nlohmann::json& j, const std::string& ptr);

}  // namespace atlas
