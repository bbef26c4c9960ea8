#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nodalab/vec.hpp"

namespace nodalab {

enum class DomainKind { UnitDisk, Rectangle, PerturbedDisk };

std::string to_string(DomainKind k);

// One boundary sample: position, outward unit normal, signed curvature
// (positive for a convex boundary), and the arclength coordinate.
struct BoundarySample {
  Vec2 p;
  Vec2 normal;
  double curvature = 0.0;
  double s = 0.0;
  bool corner = false;
};

// Planar domain with a closed-form boundary parametrization.
//  - unit_disk:       |x| < radius (radius fixed to 1)
//  - rectangle:       (0,w) x (0,h)
//  - perturbed_disk:  polar radius rho(theta) = radius + eps*cos(mode*theta)
//
// The boundary parameter runs over [0, 2*pi) for the disk kinds and over
// arclength [0, perimeter) for the rectangle (corners at multiples of the
// side lengths).
class DomainSpec {
 public:
  // Empty placeholder (resolution 0, no samples); assign a factory-built
  // spec before use.
  DomainSpec() = default;

  static DomainSpec unit_disk(int resolution = 1024);
  static DomainSpec rectangle(double w, double h, int resolution = 1024);
  static DomainSpec perturbed_disk(double radius, double eps, int mode,
                                   int resolution = 1024);

  DomainKind kind() const { return kind_; }
  int resolution() const { return resolution_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double radius() const { return radius_; }
  double eps() const { return eps_; }
  int perturbation_mode() const { return pmode_; }

  double perimeter() const { return perimeter_; }
  double area() const;
  Vec2 centroid() const;
  double param_max() const;  // upper end of the boundary parameter range

  bool contains(const Vec2& p) const;
  // Unsigned distance to the boundary curve (valid inside and outside).
  double boundary_distance(const Vec2& p) const;
  // Negative inside, positive outside.
  double signed_distance(const Vec2& p) const;
  // Distance below which |signed_distance| is guaranteed smaller than the
  // clearance, used to certify that a box does not meet the boundary.
  double boundary_clearance(const Vec2& p) const { return boundary_distance(p); }

  Vec2 boundary_point(double param) const;
  Vec2 boundary_derivative(double param) const;   // dP/dparam
  Vec2 boundary_second_derivative(double param) const;
  Vec2 boundary_normal(double param) const;       // outward unit normal
  double boundary_curvature(double param) const;

  // Cached equal-arclength samples at the construction resolution.
  const std::vector<BoundarySample>& boundary_samples() const;
  double max_curvature() const;

  nlohmann::json to_json() const;
  static DomainSpec from_json(const nlohmann::json& j);

 private:
  void build_samples();

  DomainKind kind_ = DomainKind::UnitDisk;
  double width_ = 0.0, height_ = 0.0;
  double radius_ = 1.0, eps_ = 0.0;
  int pmode_ = 0;
  int resolution_ = 0;
  double perimeter_ = 0.0;
  std::vector<BoundarySample> samples_;
  std::vector<Vec2> dense_boundary_;  // for numeric distance on perturbed disks
};

// Collar parameters: delta = width on which the inward normal map stays
// injective, r0 = certified working radius for the star-shape lemma,
// C0 = admissibility constant in dist(x0, boundary) >= C0 r^2.
struct CollarParams {
  double delta = 0.0;
  double r0 = 0.0;
  double C0 = 0.0;
  int certification_samples = 0;
};

CollarParams collar_params(const DomainSpec& dom);

// Certificate that B_r(x0) ∩ Ω is star-shaped with respect to x0: checks
// nu(x) . (x - x0) >= 0 on boundary samples inside the ball (with local
// refinement around the worst sample).
struct StarCertificate {
  bool ok = false;
  double min_dot = 0.0;   // worst nu.(x-x0) over scanned boundary points
  Vec2 worst_point;
  int samples = 0;
};

StarCertificate is_star_shaped(const DomainSpec& dom, const Vec2& x0, double r,
                               int samples = 0);

// Boundary-straightening chart anchored at boundary parameter param0.
// Local frame: e1 = unit tangent, e2 = inward normal; the boundary becomes
// the graph y2 = gamma(y1) with gamma(0) = 0, gamma'(0) = 0, and the chart
// map is
//   Phi(x, t) = (y1, y2 - gamma(y1), t),  y = (x - anchor) in frame coords.
// Interior points have positive straightened y2.
class StraightenedChart {
 public:
  StraightenedChart(const DomainSpec& dom, double param0, double chart_radius);

  const DomainSpec& domain() const { return *dom_; }
  Vec2 anchor() const { return anchor_; }
  double chart_radius() const { return chart_radius_; }

  double gamma(double xi) const;
  double dgamma(double xi) const;
  double d2gamma(double xi) const;

  Vec2 to_chart(const Vec2& x) const;    // Phi on the base
  Vec2 from_chart(const Vec2& y) const;  // Psi on the base
  Vec3 to_chart(const Vec3& z) const;    // t passes through unchanged
  Vec3 from_chart(const Vec3& y) const;

  // Fitted chart constants: |grad gamma(y')| <= grad_bound_C * |y'| on the
  // chart, and bi-Lipschitz bounds tau1 <= |Phi(z)-Phi(z0)|/|z-z0| <= tau2.
  double grad_bound_C() const { return grad_bound_C_; }
  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }

 private:
  double solve_param(double xi) const;  // boundary param with xi(param) = xi

  const DomainSpec* dom_;
  double param0_;
  double chart_radius_;
  Vec2 anchor_, e1_, e2_;
  bool flat_ = false;  // rectangle edge: gamma identically zero
  double grad_bound_C_ = 0.0, tau1_ = 1.0, tau2_ = 1.0;
};

StraightenedChart straighten(const DomainSpec& dom, double param0,
                             double chart_radius);

// Second-order coefficient matrix of the straightened operator, and its
// reflected version (off-diagonal n-th row/column entries flipped in sign
// across y2 < 0).  Row/column order: (y1, y2, t).
struct CoefficientMatrix {
  double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double min_eigenvalue() const;
  double max_eigenvalue() const;
};

CoefficientMatrix coefficient_matrix(const StraightenedChart& chart,
                                     const Vec3& y, bool reflected);

}  // namespace nodalab
