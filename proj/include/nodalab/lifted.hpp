#pragma once

#include "nodalab/field.hpp"
#include "nodalab/quadrature.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// Half-width of the t-slab: the lift lives on Ω × (-2, 2) and every ball we
// measure must keep |t0| + r inside it so chords never truncate.
inline constexpr double kSlabHalfWidth = 2.0;

// The lift u_bar(x, t) = u(x) e^{sqrt(lambda) t} solves the potential-free
// divergence equation on the slab when Delta u + V u = 0; its squared
// gradient is (|grad u|^2 + lambda u^2) e^{2 sqrt(lambda) t}.
class LiftedSolution {
 public:
  explicit LiftedSolution(const SolutionField& f);
  double value(const Vec3& z) const;
  double sq_gradient(const Vec3& z) const;
  double s() const { return s_; }
  const SolutionField& base() const { return *f_; }

 private:
  const SolutionField* f_;
  double s_;  // sqrt(lambda)
};

// The three ball quantities of the frequency pair at z0 = (x0, t0), all
// reduced to base-disk integrals through the slab kernels:
//   H     = ∫ u_bar^2
//   I_def = ∫ (|grad u_bar|^2 - (V - lambda) u_bar^2) (r^2 - |z - z0|^2)
//   I_ibp = 2 ∫ u_bar  grad u_bar · (z - z0)
struct LiftedIntegrals {
  double H = 0.0, H_err = 0.0;
  double I_def = 0.0, I_def_err = 0.0;
  double I_ibp = 0.0, I_ibp_err = 0.0;
  long evals = 0;
};
// boost forwards to integrate_ball for finest-quadrature identity audits.
LiftedIntegrals lifted_integrals(const SolutionField& f, const Vec3& z0,
                                 double r, int boost = 0);

// sup |u_bar| over B_r(z0) ∩ (Ω × slab); the t maximization is exact along
// each chord (top end), leaving a 2D scan for the deterministic sup engine.
SupResult lifted_sup(const SolutionField& f, const Vec3& z0, double r,
                     double pitch = 0.0);

// sup-vs-mean interior estimate: ratio = sup_{B_{theta r}} |u_bar| *
// ((1 - theta) r)^{3/2} / sqrt(H(r)) stays bounded for solutions.
struct DeGiorgiReport {
  double theta = 0.0;
  double sup_inner = 0.0;
  double H_outer = 0.0;
  double ratio = 0.0;
};
DeGiorgiReport check_de_giorgi(const SolutionField& f, const Vec3& z0, double r,
                               double theta = 0.5);

// Derivative identity: H'(r) = (n+1) H(r)/r + I(r)/r with n+1 = 3, checked
// by a central finite difference of H against the integrals at r.
struct DerivativeIdentityReport {
  double r = 0.0, dr = 0.0;
  double lhs_fd = 0.0;   // (H(r+dr) - H(r-dr)) / (2 dr)
  double rhs = 0.0;      // (3 H(r) + I(r)) / r
  double rel_gap = 0.0;  // |lhs - rhs| / |rhs|
};
DerivativeIdentityReport check_h_derivative(const SolutionField& f,
                                            const Vec3& z0, double r,
                                            double dr = 0.0);

// Sampled certificate of the lift's sign conventions: max over a dense grid
// of V - lambda and (V - lambda) + |grad V| (both must be <= 0).
struct VbarReport {
  double max_vbar = 0.0;
  double max_vbar_plus_grad = 0.0;
  bool ok = false;
};
VbarReport check_vbar(const SolutionField& f, int grid = 128);

}  // namespace nodalab
