#pragma once

#include <functional>
#include <vector>

#include "nodalab/geometry.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// Integrand over a base disk B_r(x0): receives the point x and the chord
// half-length tau(x) = sqrt(r^2 - |x - x0|^2).  The slab kernels K0/K1/Kw
// enter through tau; plain 2D integrals ignore it.
using BallIntegrand = std::function<double(const Vec2&, double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // difference between the two internal resolutions
  long evals = 0;
};

QuadResult operator+(const QuadResult& a, const QuadResult& b);

// Gauss-Legendre nodes/weights on [-1, 1] (cached per n).
const std::vector<double>& gauss_nodes(int n);
const std::vector<double>& gauss_weights(int n);

// Polar-spectral rule for a disk fully inside the domain.  The substitution
// rho = r sin(phi) turns tau = r cos(phi) into a smooth factor, so a
// Gauss-Legendre grid in phi crossed with a periodic trapezoid in theta
// converges spectrally for smooth integrands.
QuadResult integrate_disk(const Vec2& center, double r, const BallIntegrand& f,
                          int nphi = 48, int ntheta = 64);

// Adaptive cell rule for a disk clipped by the domain boundary.  Cells of a
// base grid over the bounding box are classified against the disk and the
// domain; certainly-inside cells get a tensor Gauss rule, certainly-outside
// cells are skipped, and straddling cells subdivide down to `depth` where a
// small indicator-weighted rule finishes the job.  The reported error is the
// difference against one extra level of depth.
QuadResult integrate_clipped_disk(const DomainSpec& dom, const Vec2& center,
                                  double r, const BallIntegrand& f,
                                  int base = 16, int depth = 5);

// Dispatch on whether B_r(center) stays inside the domain.  boost >= 1
// sharpens both rules (more phi/theta nodes, deeper clipped subdivision)
// for identity audits that must run at the finest quadrature; the default
// keeps the standard study resolution.
QuadResult integrate_ball(const DomainSpec& dom, const Vec2& center, double r,
                          const BallIntegrand& f, int boost = 0);

// Area of B_r(center) ∩ Ω via the same rules (exact pi r^2 for interior).
QuadResult clipped_ball_area(const DomainSpec& dom, const Vec2& center,
                             double r);

}  // namespace nodalab
