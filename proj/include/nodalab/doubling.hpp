#pragma once

#include <vector>

#include "nodalab/frequency.hpp"

namespace nodalab {

// Doubling index M = log2(sup^2 on B_r / sup^2 on B_{r/2}) of the lifted
// field.  The outer sup is max-combined with the inner one, so M >= 0 holds
// by construction (ball inclusion).
struct DoublingEval {
  Vec3 center;
  double r = 0.0;
  double sup_outer = 0.0, sup_inner = 0.0;
  double sup_outer_err = 0.0, sup_inner_err = 0.0;
  double M = 0.0;
  double M_err = 0.0;
};
DoublingEval doubling_index(const SolutionField& f, const Vec3& z0, double r,
                            double pitch = 0.0);

// Bridge between M and N (two-sided):
//   M(z0,r) <= (1+log2(1+eta)) N(z0,(1+eta)r)       + C1 (1-log2 eta)
//   M(z0,r) >= (1-log2(1+eta)) N(z0,(1+eta)r/2)     - C2 (1-log2 eta)
// Returns the smallest constants making both hold at this evaluation.
struct BridgeReport {
  double r = 0.0, eta = 0.0;
  double M = 0.0;
  double N_outer = 0.0;  // N(z0, (1+eta) r)
  double N_mid = 0.0;    // N(z0, (1+eta) r / 2)
  double C1 = 0.0, C2 = 0.0;
};
BridgeReport check_bridge(const SolutionField& f, const Vec2& x0, double r,
                          double eta);

// Almost monotonicity M(r) <= C M(r0) + C: the smallest C over the grid is
// max M(r) / (M(r0) + 1).
struct AlmostMonotonicityReport {
  double r0 = 0.0;
  double M0 = 0.0;
  double C = 0.0;
  double worst_r = 0.0;
  int points = 0;
};
AlmostMonotonicityReport check_almost_monotonicity(
    const SolutionField& f, const Vec2& x0, const std::vector<double>& r_grid,
    double r0);

// Global bound M <= C (1 + sqrt(lambda)): the headline ratio is the max of
// M / (1 + sqrt(lambda)) over a center grid and a radius grid.  Centers are
// taken on the t = 0 slice (M is exactly invariant under t-translation of
// the center while the slab does not truncate, because the e^{s t0} factor
// cancels in the sup ratio).  Sups are memoized per center across the
// radius grid and max-combined so nested balls report nondecreasing sups.
struct GlobalBoundReport {
  double ratio = 0.0;  // max M / (1 + sqrt(lambda))
  double M_max = 0.0;
  Vec2 arg_center;
  double arg_r = 0.0;
  int centers = 0;
  int evaluations = 0;
};
GlobalBoundReport global_doubling_bound(const SolutionField& f,
                                        const std::vector<Vec2>& centers,
                                        const std::vector<double>& radii,
                                        bool require_star = false);

// Vanishing order from the base-plane mass: k is half the log-log slope of
// the ball average of u^2 against r.
struct VanishingOrderEstimate {
  Vec2 x0;
  double slope = 0.0;  // fitted k
  std::vector<double> radii;
  std::vector<double> mean_sq;  // average of u^2 over B_r ∩ Ω
  double residual = 0.0;        // max abs deviation from the fit (log space)
  bool reliable = false;
};
VanishingOrderEstimate vanishing_order(const SolutionField& f, const Vec2& x0,
                                       const std::vector<double>& radii);

// ---------------------------------------------------------------------------
// Chart-space doubling (cubes with one face on the flattened boundary).

// The straightened solution with odd reflection across y2 = 0: values for
// negative y2 are -u(Psi(y1, -y2)).  Valid points keep |y1|, |y2| within the
// chart radius and map into the closed domain.
class ChartField {
 public:
  ChartField(const SolutionField& f, const StraightenedChart& chart);
  double value(double y1, double y2) const;
  bool valid(double y1, double y2) const;
  double s() const { return s_; }
  double extent() const;  // usable half-width of the chart box
  const SolutionField& base() const { return *f_; }
  const StraightenedChart& chart() const { return *chart_; }

 private:
  const SolutionField* f_;
  const StraightenedChart* chart_;
  double s_;
};

// Deterministic sup of |u~| e^{s tau} over the chart-space ball about
// (y1, y2, 0); same absolute-lattice construction as the physical engine.
SupResult chart_sup(const ChartField& cf, const Vec3& y0, double r,
                    double pitch = 0.0);
DoublingEval chart_doubling_index(const ChartField& cf, const Vec3& y0,
                                  double r, double pitch = 0.0);

// Axis-aligned cube in straightened (y1, y2, t) coordinates.
struct ChartCube {
  Vec3 lo, hi;
  double side() const { return hi.x - lo.x; }
  Vec3 center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y),
                                0.5 * (lo.t + hi.t)}; }
  double diam() const;
};

// M(Q) = max over centers in Q and radii up to 10 (n+1) diam(Q) of M(y0, r),
// estimated on a lattice (spacing side/grid_step) restricted to the t = 0
// slice (exact, see above), a geometric radius grid, and one refinement
// pass around the argmax.  Radii are capped to keep balls in the slab.
struct CubeDoubling {
  ChartCube cube;
  double M_Q = 0.0;
  double M_err = 0.0;
  Vec3 arg_center;
  double arg_r = 0.0;
  int centers = 0;
  int radii = 0;
};
CubeDoubling cube_doubling(const ChartField& cf, const ChartCube& cube,
                           int grid_step = 8, int n_radii = 8);

// Same maximization for a cube in physical (x, y, t) coordinates away from
// the boundary, using the plain lifted sup (no reflection).
CubeDoubling cube_doubling_interior(const SolutionField& f,
                                    const ChartCube& cube, int grid_step = 8,
                                    int n_radii = 8);

}  // namespace nodalab
