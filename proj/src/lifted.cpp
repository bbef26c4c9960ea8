#include "nodalab/lifted.hpp"

#include <cmath>
#include <stdexcept>

#include "nodalab/kernels.hpp"

namespace nodalab {

namespace {
void check_ball(const Vec3& z0, double r) {
  if (r <= 0.0) throw std::invalid_argument("lifted ball: r must be > 0");
  if (std::abs(z0.t) + r >= kSlabHalfWidth)
    throw std::invalid_argument("lifted ball: |t0| + r must stay in the slab");
}
}  // namespace

LiftedSolution::LiftedSolution(const SolutionField& f)
    : f_(&f), s_(std::sqrt(f.lambda)) {}

double LiftedSolution::value(const Vec3& z) const {
  return f_->value(z.base()) * std::exp(s_ * z.t);
}

double LiftedSolution::sq_gradient(const Vec3& z) const {
  const Vec2 g = f_->gradient(z.base());
  const double u = f_->value(z.base());
  return (g.dot(g) + s_ * s_ * u * u) * std::exp(2.0 * s_ * z.t);
}

LiftedIntegrals lifted_integrals(const SolutionField& f, const Vec3& z0,
                                 double r, int boost) {
  check_ball(z0, r);
  const double lam = f.lambda;
  const double s = std::sqrt(lam);
  const Vec2 x0 = z0.base();
  const double lift = std::exp(2.0 * s * z0.t);

  const QuadResult h = integrate_ball(
      f.domain, x0, r, [&](const Vec2& x, double tau) {
        const double u = f.value(x);
        return u * u * kernel_K0(s, tau);
      },
      boost);
  const QuadResult idef = integrate_ball(
      f.domain, x0, r, [&](const Vec2& x, double tau) {
        const double u = f.value(x);
        const Vec2 g = f.gradient(x);
        const double vbar = f.V.value(x) - lam;  // <= 0 by construction
        return (g.dot(g) + lam * u * u - vbar * u * u) * kernel_Kw(s, tau);
      },
      boost);
  const QuadResult iibp = integrate_ball(
      f.domain, x0, r, [&](const Vec2& x, double tau) {
        const double u = f.value(x);
        const Vec2 g = f.gradient(x);
        const double radial = g.x * (x.x - x0.x) + g.y * (x.y - x0.y);
        return 2.0 * (u * radial * kernel_K0(s, tau) +
                      s * u * u * kernel_K1(s, tau));
      },
      boost);

  LiftedIntegrals out;
  out.H = lift * h.value;
  out.H_err = lift * h.error;
  out.I_def = lift * idef.value;
  out.I_def_err = lift * idef.error;
  out.I_ibp = lift * iibp.value;
  out.I_ibp_err = lift * iibp.error;
  out.evals = h.evals + idef.evals + iibp.evals;
  return out;
}

SupResult lifted_sup(const SolutionField& f, const Vec3& z0, double r,
                     double pitch) {
  check_ball(z0, r);
  const double s = std::sqrt(f.lambda);
  const Vec2 x0 = z0.base();
  const double r2 = r * r;
  auto score = [&](const Vec2& x) {
    const double d2 = (x.x - x0.x) * (x.x - x0.x) + (x.y - x0.y) * (x.y - x0.y);
    const double tau = std::sqrt(std::max(r2 - d2, 0.0));
    return std::abs(f.value(x)) * std::exp(s * (z0.t + tau));
  };
  return sup_scan(f.domain, {x0, r}, score, pitch);
}

DerivativeIdentityReport check_h_derivative(const SolutionField& f,
                                            const Vec3& z0, double r,
                                            double dr) {
  check_ball(z0, r);
  if (dr <= 0.0) dr = 1e-4 * r;
  DerivativeIdentityReport rep;
  rep.r = r;
  rep.dr = dr;
  const LiftedIntegrals at = lifted_integrals(f, z0, r);
  const double hp = lifted_integrals(f, z0, r + dr).H;
  const double hm = lifted_integrals(f, z0, r - dr).H;
  rep.lhs_fd = (hp - hm) / (2.0 * dr);
  rep.rhs = (3.0 * at.H + at.I_ibp) / r;
  rep.rel_gap = std::abs(rep.lhs_fd - rep.rhs) / std::abs(rep.rhs);
  return rep;
}

VbarReport check_vbar(const SolutionField& f, int grid) {
  VbarReport rep;
  rep.max_vbar = -1e300;
  rep.max_vbar_plus_grad = -1e300;
  const auto& bs = f.domain.boundary_samples();
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& b : bs) {
    x0 = std::min(x0, b.p.x);
    x1 = std::max(x1, b.p.x);
    y0 = std::min(y0, b.p.y);
    y1 = std::max(y1, b.p.y);
  }
  for (int j = 0; j <= grid; ++j)
    for (int i = 0; i <= grid; ++i) {
      const Vec2 p{x0 + (x1 - x0) * i / grid, y0 + (y1 - y0) * j / grid};
      if (!f.domain.contains(p)) continue;
      const double vbar = f.V.value(p) - f.lambda;
      const double g = f.V.gradient(p).norm();
      rep.max_vbar = std::max(rep.max_vbar, vbar);
      rep.max_vbar_plus_grad = std::max(rep.max_vbar_plus_grad, vbar + g);
    }
  rep.ok = rep.max_vbar <= 1e-9 && rep.max_vbar_plus_grad <= 1e-9;
  return rep;
}

DeGiorgiReport check_de_giorgi(const SolutionField& f, const Vec3& z0, double r,
                               double theta) {
  check_ball(z0, r);
  if (theta <= 0.0 || theta >= 1.0)
    throw std::invalid_argument("check_de_giorgi: theta in (0, 1)");
  DeGiorgiReport rep;
  rep.theta = theta;
  rep.sup_inner = lifted_sup(f, z0, theta * r).value;
  rep.H_outer = lifted_integrals(f, z0, r).H;
  rep.ratio = rep.sup_inner * std::pow((1.0 - theta) * r, 1.5) /
              std::sqrt(std::max(rep.H_outer, 1e-300));
  return rep;
}

}  // namespace nodalab
