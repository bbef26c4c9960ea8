#include "nodalab/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nodalab {

namespace {
constexpr double kTrivialH = 1e-250;
constexpr double kLog2e = 1.4426950408889634;  // 1/ln 2
}  // namespace

FrequencyEval frequency_eval(const SolutionField& f, const Vec3& z0, double r) {
  const LiftedIntegrals li = lifted_integrals(f, z0, r);
  if (!(li.H > kTrivialH))
    throw std::runtime_error("frequency_eval: trivial field (H ~ 0)");
  FrequencyEval ev;
  ev.center = z0;
  ev.r = r;
  ev.H = li.H;
  ev.I_def = li.I_def;
  ev.I_ibp = li.I_ibp;
  ev.I = li.I_ibp;
  ev.N = ev.I / ev.H;
  ev.N_def = ev.I_def / ev.H;
  ev.ibp_gap = std::abs(li.I_def - li.I_ibp) /
               std::max({std::abs(li.I_def), std::abs(li.I_ibp), 1e-300});
  // Propagate the numeric quadrature estimates only.  The disagreement
  // between the two forms of I is reported separately (N_def, ibp_gap): for
  // genuine solutions it is itself quadrature-sized, while for inputs that
  // do not satisfy the equation it grows to O(1) and must not widen the
  // error bars, or the downstream checkers would excuse every violation.
  ev.quadrature_error = std::abs(ev.N) * li.H_err / li.H +
                        (li.I_ibp_err + li.I_def_err) / li.H;
  return ev;
}

RadiusProfile frequency_profile(const SolutionField& f, const Vec2& x0,
                                const std::vector<double>& radii) {
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("frequency_profile: radii must increase");
  if (!radii.empty() && !(radii.back() < 1.0))
    throw std::invalid_argument("frequency_profile: radii must stay below 1");

  RadiusProfile prof;
  prof.center = {x0.x, x0.y, 0.0};
  prof.radii = radii;
  const CollarParams cp = collar_params(f.domain);
  const double d = f.domain.boundary_distance(x0);
  for (double r : radii) {
    RadiusEntry e;
    e.eval = frequency_eval(f, prof.center, r);
    e.distance_gate = d >= cp.C0 * r * r;
    if (d > r) {
      e.admissible = true;  // interior ball, trivially star-shaped
      e.star_min_dot = r;
    } else {
      const StarCertificate cert = is_star_shaped(f.domain, x0, r);
      e.admissible = cert.ok;
      e.star_min_dot = cert.min_dot;
    }
    prof.entries.push_back(e);
  }
  return prof;
}

MonotonicityReport check_monotonicity(const RadiusProfile& profile,
                                      double extra_slack) {
  MonotonicityReport rep;
  const RadiusEntry* prev = nullptr;
  for (const auto& e : profile.entries) {
    if (!e.admissible) continue;
    if (prev) {
      ++rep.checked;
      const double err = prev->eval.quadrature_error +
                         e.eval.quadrature_error + extra_slack;
      const double slack = e.eval.N - prev->eval.N + err;
      if (slack < 0.0) {
        ++rep.violations;
        rep.worst_gap = std::min(rep.worst_gap, slack);
      }
    }
    prev = &e;
  }
  rep.ok = rep.violations == 0;
  return rep;
}

DoublingReport check_doubling(const SolutionField& f, const Vec2& x0, double r1,
                              double r2) {
  if (!(0.0 < r1 && r1 < r2 && r2 < 1.0))
    throw std::invalid_argument("check_doubling: need 0 < r1 < r2 < 1");
  const Vec3 z0{x0.x, x0.y, 0.0};
  const FrequencyEval e1 = frequency_eval(f, z0, r1);
  const FrequencyEval e2 = frequency_eval(f, z0, r2);
  DoublingReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.H1 = e1.H;
  rep.H2 = e2.H;
  const double lg = std::log2(r2 / r1);
  rep.log_ratio = std::log2(e2.H / e1.H);
  rep.bound_lo = (e1.N + 3.0) * lg;
  rep.bound_hi = (e2.N + 3.0) * lg;
  rep.slack_lo = rep.log_ratio - rep.bound_lo;
  rep.slack_hi = rep.bound_hi - rep.log_ratio;
  const LiftedIntegrals l1 = lifted_integrals(f, z0, r1);
  const LiftedIntegrals l2 = lifted_integrals(f, z0, r2);
  rep.error = kLog2e * (l1.H_err / l1.H + l2.H_err / l2.H) +
              lg * (e1.quadrature_error + e2.quadrature_error);
  rep.ok = rep.slack_lo >= -rep.error && rep.slack_hi >= -rep.error;
  return rep;
}

ChangingCenterReport check_changing_center(const SolutionField& f,
                                           const Vec2& x0, const Vec2& x1,
                                           double r, double rho) {
  const double a = dist(x0, x1);
  if (a > r / 4.0)
    throw std::invalid_argument("check_changing_center: need z1 in B_{r/4}(z0)");
  if (!(rho <= r / 2.0))
    throw std::invalid_argument("check_changing_center: need rho <= r/2");
  const CollarParams cp = collar_params(f.domain);
  if (f.domain.boundary_distance(x0) < cp.C0 * r * r)
    throw std::invalid_argument(
        "check_changing_center: dist(x0, boundary) < C0 r^2");
  if (f.domain.boundary_distance(x1) < cp.C0 * (r - a) * (r - a))
    throw std::invalid_argument(
        "check_changing_center: dist(x1, boundary) < C0 (r-a)^2");

  ChangingCenterReport rep;
  rep.a = a;
  rep.r = r;
  rep.rho = rho;
  rep.N0 = frequency_eval(f, {x0.x, x0.y, 0.0}, r).N;
  rep.N1 = frequency_eval(f, {x1.x, x1.y, 0.0}, rho).N;
  if (a <= 1e-14 * r) {
    rep.reduces_to_monotonicity = true;
    rep.fitted_C = 0.0;
    return rep;
  }
  rep.fitted_C =
      std::max(0.0, (rep.N1 - rep.N0) / ((a / r) * (rep.N0 + 1.0)));
  return rep;
}

}  // namespace nodalab
