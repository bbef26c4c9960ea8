#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nodalab/geometry.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// Closed-form potential V(x) = c0 + a * sin(kx * x) * sin(ky * y).
// Covers the zero potential, constants, sine-product wells W, and the
// shifted potentials V = mu - W that make a computed eigenfunction solve
// Delta u + V u = 0.  Gradients are exact.
struct Potential {
  double c0 = 0.0;
  double a = 0.0;
  double kx = 0.0;
  double ky = 0.0;

  static Potential zero() { return {}; }
  static Potential constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static Potential sine_product(double amp, double kx_, double ky_) {
    return {0.0, amp, kx_, ky_};
  }
  // V = mu - W
  static Potential shifted(double mu, const Potential& W) {
    return {mu - W.c0, -W.a, W.kx, W.ky};
  }

  double value(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;

  // dense sampled sup norms over the domain (refined around the max);
  // exact for the zero/constant cases
  double sup_norm(const DomainSpec& dom) const;
  double grad_sup_norm(const DomainSpec& dom) const;
  // lifting constant: ||V||_inf + ||grad V||_inf
  double lambda(const DomainSpec& dom) const;

  bool is_analytic() const { return true; }

  nlohmann::json to_json() const;
  static Potential from_json(const nlohmann::json& j);
};

}  // namespace nodalab
