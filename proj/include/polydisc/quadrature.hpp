#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polydisc/coeff_fn.hpp"
#include "polydisc/torus.hpp"

namespace polydisc {

/// Nodes and positive weights. For rules on [0,1) `complements` holds 1 - node
/// computed without cancellation; boundary-weighted integrands must use it.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> complements;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^a (1+x)^b, a,b > -1.
QuadRule gauss_jacobi(int points, double a, double b);
QuadRule gauss_legendre(int points);

/// Rule on [0,1) for the weight (1-R)^gamma. Geometric panels
/// [1-2^-j, 1-2^-(j+1)], j < panels, carry Gauss-Legendre nodes with the weight
/// folded in; the terminal panel [1-2^-panels, 1) is Gauss-Jacobi with the
/// singular weight built in. panels = 0 gives a single Jacobi rule.
QuadRule radial_rule(double gamma, int points_per_panel, int panels);

/// Geometric boundary ladder r_i = 1 - 2^{-i/per_octave}, i = 0..per_octave*depth.
struct BoundaryLadder {
  int per_octave = 4;

  double radius(int i) const;
  double complement(int i) const;  // 1 - r_i, exact
  double level(int i) const { return static_cast<double>(i) / per_octave; }
  int rung_of_level(double level) const;
  int rungs(int depth) const { return depth * per_octave + 1; }
};

struct GridOptions {
  int torus_oversample = 4;  // M_j ~ oversample * (N_j + 1)
  int torus_min = 16;
  int radial_points = 12;    // nodes per radial panel
  int radial_panels = -1;    // -1: chosen from the degree
  int ladder_per_octave = 4;
  int ladder_min_depth = 4;
  int ladder_max_depth = 50;
  double sup_tol = 1e-6;     // sup-convergence target
  double inf_tol = 1e-8;     // p = infinity local refinement target
  // Torus means are also formed on the every-other-point subgrid; while the
  // two disagree by more than torus_tol (relative) the torus is doubled.
  double torus_tol = 1e-6;
  int torus_max_doublings = 7;

  /// Torus and radial grids scaled by `factor` (ladder untouched).
  GridOptions refined(int factor = 2) const;
};

/// Even sizes, so the every-other-point subgrid is a torus grid as well.
TorusSize torus_size(const Degree& degree, const GridOptions& opts);

/// Runs `run(grid_options, discrepancy)` with the torus doubled until the
/// reported fine/coarse discrepancy is within opts.torus_tol. The bool is
/// false when the doubling cap was hit first.
template <class Run>
auto with_torus_doubling(const GridOptions& opts, Run&& run) {
  GridOptions g = opts;
  for (int level = 0;; ++level) {
    double discrepancy = 0.0;
    auto result = run(static_cast<const GridOptions&>(g), discrepancy);
    const bool ok = discrepancy <= opts.torus_tol;
    if (ok || level >= opts.torus_max_doublings) return std::pair{std::move(result), ok};
    g.torus_oversample *= 2;
    g.torus_min *= 2;
  }
}
int auto_radial_panels(std::size_t max_degree);

/// Paired torus and radial grids for one weight exponent gamma = alpha q - 1.
struct QuadGrid {
  TorusSize torus;
  QuadRule radial;
  double weight_exponent = 0.0;
  BoundaryLadder ladder;

  static QuadGrid build(const Degree& degree, double weight_exponent, const GridOptions& opts);
};

}  // namespace polydisc
