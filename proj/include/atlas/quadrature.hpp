#pragma once

#include <functional>
#include <vector>

#include "atlas/common.hpp"

namespace atlas {

struct QuadratureConfig {
  double panel_tol = 1e-12;     // local tolerance for adaptive rules and the fixed-point iteration
  int max_panels = 4000;        // budget per integral
  double tail_threshold = 1e-14;
  int nodes_per_panel = 10;     // Gauss-Legendre nodes carrying the unknown on each line panel
  double panel_width = 1.0;     // panel width in the asinh parameter
  int sub_nodes = 16;           // Gauss-Legendre nodes on each kernel sub-panel
  double oscillation_cap = 16.0; // max change of the weight exponent across one kernel sub-panel
  double weight_floor = 1e-20;  // kernel contributions below this weight are dropped
  int max_iterations = 200;
};

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Cached Gauss-Legendre rule of order n.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  Complex value;
  double error = 0.0;
  int panels = 0;
};

// Adaptive 7/15 Gauss-Kronrod on [lo, hi].
QuadResult integrate_gk(const std::function<Complex(double)>& f, double lo, double hi, double abs_tol,
                        double rel_tol, int max_panels);

// Barycentric weights for Lagrange interpolation on the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);
// Lagrange basis values at x, written into out (size = nodes.size()).
void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x,
                    double* out);

}  // namespace atlas
