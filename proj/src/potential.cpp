#include "nodalab/potential.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace nodalab {

double Potential::value(const Vec2& p) const {
  if (a == 0.0) return c0;
  return c0 + a * std::sin(kx * p.x) * std::sin(ky * p.y);
}

Vec2 Potential::gradient(const Vec2& p) const {
  if (a == 0.0) return {0.0, 0.0};
  return {a * kx * std::cos(kx * p.x) * std::sin(ky * p.y),
          a * ky * std::sin(kx * p.x) * std::cos(ky * p.y)};
}

namespace {

// dense grid max over the domain bounding box with one refinement pass
template <typename F>
double dense_max(const DomainSpec& dom, F f) {
  double x0 = -dom.radius(), x1 = dom.radius();
  double y0 = -dom.radius(), y1 = dom.radius();
  if (dom.kind() == DomainKind::Rectangle) {
    x0 = 0.0; x1 = dom.width();
    y0 = 0.0; y1 = dom.height();
  } else if (dom.kind() == DomainKind::PerturbedDisk) {
    const double r = dom.radius() + std::abs(dom.eps());
    x0 = -r; x1 = r; y0 = -r; y1 = r;
  }
  const int n = 256;
  double best = 0.0;
  Vec2 argmax{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec2 p{x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n};
      if (!dom.contains(p)) continue;
      const double v = f(p);
      if (v > best) {
        best = v;
        argmax = p;
      }
    }
  }
  // local refinement around the best grid point
  double step = (x1 - x0) / n;
  for (int pass = 0; pass < 30; ++pass) {
    bool moved = false;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const Vec2 p{argmax.x + di * step, argmax.y + dj * step};
        if (!dom.contains(p)) continue;
        const double v = f(p);
        if (v > best) {
          best = v;
          argmax = p;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-12) break;
  }
  return best;
}

}  // namespace

double Potential::sup_norm(const DomainSpec& dom) const {
  if (a == 0.0) return std::abs(c0);
  return dense_max(dom, [this](const Vec2& p) { return std::abs(value(p)); });
}

double Potential::grad_sup_norm(const DomainSpec& dom) const {
  if (a == 0.0) return 0.0;
  return dense_max(dom, [this](const Vec2& p) { return gradient(p).norm(); });
}

double Potential::lambda(const DomainSpec& dom) const {
  return sup_norm(dom) + grad_sup_norm(dom);
}

nlohmann::json Potential::to_json() const {
  return nlohmann::json{{"c0", c0}, {"a", a}, {"kx", kx}, {"ky", ky}};
}

Potential Potential::from_json(const nlohmann::json& j) {
  Potential v;
  v.c0 = j.value("c0", 0.0);
  v.a = j.value("a", 0.0);
  v.kx = j.value("kx", 0.0);
  v.ky = j.value("ky", 0.0);
  return v;
}

}  // namespace nodalab
