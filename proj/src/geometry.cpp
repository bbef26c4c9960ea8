#include "nodalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nodalab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::UnitDisk: return "unit_disk";
    case DomainKind::Rectangle: return "rectangle";
    case DomainKind::PerturbedDisk: return "perturbed_disk";
  }
  return "unknown";
}

DomainSpec DomainSpec::unit_disk(int resolution) {
  DomainSpec d;
  d.kind_ = DomainKind::UnitDisk;
  d.radius_ = 1.0;
  d.resolution_ = resolution;
  d.perimeter_ = 2.0 * kPi;
  d.build_samples();
  return d;
}

DomainSpec DomainSpec::rectangle(double w, double h, int resolution) {
  if (w <= 0.0 || h <= 0.0)
    throw std::invalid_argument("rectangle: sides must be positive");
  DomainSpec d;
  d.kind_ = DomainKind::Rectangle;
  d.width_ = w;
  d.height_ = h;
  d.resolution_ = resolution;
  d.perimeter_ = 2.0 * (w + h);
  d.build_samples();
  return d;
}

DomainSpec DomainSpec::perturbed_disk(double radius, double eps, int mode,
                                      int resolution) {
  if (radius <= 0.0)
    throw std::invalid_argument("perturbed_disk: radius must be positive");
  if (std::abs(eps) * mode * mode >= radius / 4.0)
    throw std::invalid_argument(
        "perturbed_disk: perturbation too large (|eps|*mode^2 < radius/4)");
  DomainSpec d;
  d.kind_ = DomainKind::PerturbedDisk;
  d.radius_ = radius;
  d.eps_ = eps;
  d.pmode_ = mode;
  d.resolution_ = resolution;
  // perimeter by composite Simpson on |P'(theta)|
  const int panels = 8192;
  double per = 0.0;
  auto speed = [&](double th) { return d.boundary_derivative(th).norm(); };
  const double hstep = 2.0 * kPi / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = i * hstep;
    per += hstep / 6.0 *
           (speed(a) + 4.0 * speed(a + 0.5 * hstep) + speed(a + hstep));
  }
  d.perimeter_ = per;
  d.build_samples();
  return d;
}

double DomainSpec::area() const {
  switch (kind_) {
    case DomainKind::UnitDisk: return kPi * radius_ * radius_;
    case DomainKind::Rectangle: return width_ * height_;
    case DomainKind::PerturbedDisk:
      // (1/2) int rho^2 dtheta with rho = R + eps cos(m theta)
      return kPi * radius_ * radius_ + 0.5 * kPi * eps_ * eps_;
  }
  return 0.0;
}

Vec2 DomainSpec::centroid() const {
  if (kind_ == DomainKind::Rectangle) return {0.5 * width_, 0.5 * height_};
  return {0.0, 0.0};
}

double DomainSpec::param_max() const {
  return kind_ == DomainKind::Rectangle ? perimeter_ : 2.0 * kPi;
}

bool DomainSpec::contains(const Vec2& p) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return p.norm2() < radius_ * radius_;
    case DomainKind::Rectangle:
      return p.x > 0.0 && p.x < width_ && p.y > 0.0 && p.y < height_;
    case DomainKind::PerturbedDisk: {
      const double rho = radius_ + eps_ * std::cos(pmode_ * std::atan2(p.y, p.x));
      return p.norm2() < rho * rho;
    }
  }
  return false;
}

double DomainSpec::signed_distance(const Vec2& p) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return p.norm() - radius_;
    case DomainKind::Rectangle: {
      if (contains(p)) {
        return -std::min(std::min(p.x, width_ - p.x),
                         std::min(p.y, height_ - p.y));
      }
      const double dx = std::max({-p.x, p.x - width_, 0.0});
      const double dy = std::max({-p.y, p.y - height_, 0.0});
      if (dx == 0.0) return dy;
      if (dy == 0.0) return dx;
      return std::hypot(dx, dy);
    }
    case DomainKind::PerturbedDisk: {
      // distance to the cached dense polyline, then sign from contains()
      double best = 1e300;
      const auto& pts = dense_boundary_;
      const int n = static_cast<int>(pts.size());
      for (int i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        const Vec2 ab = b - a;
        double tproj = (p - a).dot(ab) / ab.norm2();
        tproj = std::clamp(tproj, 0.0, 1.0);
        best = std::min(best, dist(p, a + tproj * ab));
      }
      return contains(p) ? -best : best;
    }
  }
  return 0.0;
}

double DomainSpec::boundary_distance(const Vec2& p) const {
  return std::abs(signed_distance(p));
}

Vec2 DomainSpec::boundary_point(double param) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return {radius_ * std::cos(param), radius_ * std::sin(param)};
    case DomainKind::PerturbedDisk: {
      const double rho = radius_ + eps_ * std::cos(pmode_ * param);
      return {rho * std::cos(param), rho * std::sin(param)};
    }
    case DomainKind::Rectangle: {
      double s = std::fmod(param, perimeter_);
      if (s < 0.0) s += perimeter_;
      if (s < width_) return {s, 0.0};
      s -= width_;
      if (s < height_) return {width_, s};
      s -= height_;
      if (s < width_) return {width_ - s, height_};
      s -= width_;
      return {0.0, height_ - s};
    }
  }
  return {};
}

Vec2 DomainSpec::boundary_derivative(double param) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return {-radius_ * std::sin(param), radius_ * std::cos(param)};
    case DomainKind::PerturbedDisk: {
      const double c = std::cos(param), s = std::sin(param);
      const double rho = radius_ + eps_ * std::cos(pmode_ * param);
      const double drho = -eps_ * pmode_ * std::sin(pmode_ * param);
      return {drho * c - rho * s, drho * s + rho * c};
    }
    case DomainKind::Rectangle: {
      double s = std::fmod(param, perimeter_);
      if (s < 0.0) s += perimeter_;
      if (s < width_) return {1.0, 0.0};
      s -= width_;
      if (s < height_) return {0.0, 1.0};
      s -= height_;
      if (s < width_) return {-1.0, 0.0};
      return {0.0, -1.0};
    }
  }
  return {};
}

Vec2 DomainSpec::boundary_second_derivative(double param) const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return {-radius_ * std::cos(param), -radius_ * std::sin(param)};
    case DomainKind::PerturbedDisk: {
      const double c = std::cos(param), s = std::sin(param);
      const double rho = radius_ + eps_ * std::cos(pmode_ * param);
      const double drho = -eps_ * pmode_ * std::sin(pmode_ * param);
      const double d2rho = -eps_ * pmode_ * pmode_ * std::cos(pmode_ * param);
      return {d2rho * c - 2.0 * drho * s - rho * c,
              d2rho * s + 2.0 * drho * c - rho * s};
    }
    case DomainKind::Rectangle:
      return {0.0, 0.0};
  }
  return {};
}

Vec2 DomainSpec::boundary_normal(double param) const {
  // boundary runs counter-clockwise, so the outward normal is the tangent
  // rotated by -90 degrees
  const Vec2 d = boundary_derivative(param).normalized();
  return {d.y, -d.x};
}

double DomainSpec::boundary_curvature(double param) const {
  if (kind_ == DomainKind::Rectangle) return 0.0;
  const Vec2 d1 = boundary_derivative(param);
  const Vec2 d2 = boundary_second_derivative(param);
  const double sp = d1.norm();
  return (d1.x * d2.y - d1.y * d2.x) / (sp * sp * sp);
}

void DomainSpec::build_samples() {
  samples_.clear();
  const int n = resolution_;
  if (kind_ == DomainKind::Rectangle) {
    // distribute samples edge by edge so that the four corners are samples
    const double lens[4] = {width_, height_, width_, height_};
    const double starts[4] = {0.0, width_, width_ + height_,
                              2.0 * width_ + height_};
    int counts[4];
    int total = 0;
    for (int e = 0; e < 4; ++e) {
      counts[e] = std::max(1, static_cast<int>(std::lround(n * lens[e] / perimeter_)));
      total += counts[e];
    }
    counts[0] += n - total;  // absorb rounding drift
    for (int e = 0; e < 4; ++e) {
      for (int i = 0; i < counts[e]; ++i) {
        const double s = starts[e] + lens[e] * i / counts[e];
        BoundarySample b;
        b.p = boundary_point(s);
        b.normal = boundary_normal(s + 1e-12);  // normal of this edge
        b.curvature = 0.0;
        b.s = s;
        b.corner = (i == 0);
        samples_.push_back(b);
      }
    }
  } else {
    // disk kinds: invert the arclength table for equal spacing
    const int fine = std::max(4 * n, 4096);
    std::vector<double> cum(fine + 1, 0.0);
    const double dth = 2.0 * kPi / fine;
    for (int i = 0; i < fine; ++i) {
      const double a = i * dth;
      cum[i + 1] = cum[i] + dth / 6.0 *
                                (boundary_derivative(a).norm() +
                                 4.0 * boundary_derivative(a + 0.5 * dth).norm() +
                                 boundary_derivative(a + dth).norm());
    }
    const double total = cum[fine];
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      const double target = total * i / n;
      while (idx < fine - 1 && cum[idx + 1] < target) ++idx;
      const double frac = (target - cum[idx]) / std::max(cum[idx + 1] - cum[idx], 1e-300);
      const double th = (idx + frac) * dth;
      BoundarySample b;
      b.p = boundary_point(th);
      b.normal = boundary_normal(th);
      b.curvature = boundary_curvature(th);
      b.s = target;
      samples_.push_back(b);
    }
  }
  if (kind_ == DomainKind::PerturbedDisk) {
    dense_boundary_.clear();
    const int dn = 4096;
    dense_boundary_.reserve(dn);
    for (int i = 0; i < dn; ++i)
      dense_boundary_.push_back(boundary_point(2.0 * kPi * i / dn));
  }
}

const std::vector<BoundarySample>& DomainSpec::boundary_samples() const {
  return samples_;
}

double DomainSpec::max_curvature() const {
  double m = 0.0;
  for (const auto& b : samples_) m = std::max(m, std::abs(b.curvature));
  return m;
}

nlohmann::json DomainSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  j["resolution"] = resolution_;
  switch (kind_) {
    case DomainKind::UnitDisk:
      break;
    case DomainKind::Rectangle:
      j["width"] = width_;
      j["height"] = height_;
      break;
    case DomainKind::PerturbedDisk:
      j["radius"] = radius_;
      j["eps"] = eps_;
      j["mode"] = pmode_;
      break;
  }
  return j;
}

DomainSpec DomainSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int res = j.value("resolution", 1024);
  if (kind == "unit_disk") return unit_disk(res);
  if (kind == "rectangle")
    return rectangle(j.at("width").get<double>(), j.at("height").get<double>(), res);
  if (kind == "perturbed_disk")
    return perturbed_disk(j.at("radius").get<double>(), j.at("eps").get<double>(),
                          j.at("mode").get<int>(), res);
  throw std::invalid_argument("unknown domain kind: " + kind);
}

// ---------------------------------------------------------------------------
// star-shape certificate

StarCertificate is_star_shaped(const DomainSpec& dom, const Vec2& x0, double r,
                               int samples) {
  if (r <= 0.0) throw std::invalid_argument("is_star_shaped: r must be > 0");
  StarCertificate cert;
  cert.min_dot = 1e300;
  const auto& bs = dom.boundary_samples();
  const int n = static_cast<int>(bs.size());
  const int stride = (samples > 0 && samples < n) ? n / samples : 1;
  int scanned = 0;
  int worst = -1;
  for (int i = 0; i < n; i += stride) {
    const Vec2 d = bs[i].p - x0;
    if (d.norm() > r) continue;
    ++scanned;
    const double dot = bs[i].normal.dot(d);
    if (dot < cert.min_dot) {
      cert.min_dot = dot;
      cert.worst_point = bs[i].p;
      worst = i;
    }
    if (bs[i].corner && i > 0) {
      // corner samples carry one edge normal; check the other edge too
      const double dot2 = bs[i - 1].normal.dot(d);
      if (dot2 < cert.min_dot) {
        cert.min_dot = dot2;
        cert.worst_point = bs[i].p;
        worst = i;
      }
    }
  }
  // refine around the worst sample on smooth boundaries
  if (worst >= 0 && dom.kind() != DomainKind::Rectangle) {
    const double span = dom.param_max() / n * stride;
    const double p0 = dom.param_max() * worst / n;
    for (int k = -8; k <= 8; ++k) {
      const double th = p0 + span * k / 8.0;
      const Vec2 p = dom.boundary_point(th);
      const Vec2 d = p - x0;
      if (d.norm() > r) continue;
      const double dot = dom.boundary_normal(th).dot(d);
      if (dot < cert.min_dot) {
        cert.min_dot = dot;
        cert.worst_point = p;
      }
    }
  }
  cert.samples = scanned;
  if (scanned == 0) cert.min_dot = 0.0;  // interior ball: nothing to certify
  cert.ok = cert.min_dot >= -1e-10 * (1.0 + r);
  return cert;
}

// ---------------------------------------------------------------------------
// collar parameters

CollarParams collar_params(const DomainSpec& dom) {
  CollarParams cp;
  const auto& bs = dom.boundary_samples();
  const int n = static_cast<int>(bs.size());

  double kmax_pos = 0.0, kmax_abs = 0.0;
  for (const auto& b : bs) {
    kmax_pos = std::max(kmax_pos, b.curvature);
    kmax_abs = std::max(kmax_abs, std::abs(b.curvature));
  }
  cp.C0 = std::max(1.0, 2.0 * kmax_abs);

  switch (dom.kind()) {
    case DomainKind::UnitDisk:
      cp.delta = dom.radius();
      break;
    case DomainKind::Rectangle:
      // convex with flat edges: the inward distance map is well defined up
      // to half the smaller side (corner wedges are excluded from charts)
      cp.delta = 0.5 * std::min(dom.width(), dom.height());
      break;
    case DomainKind::PerturbedDisk: {
      // focal bound from curvature plus half the minimal width between
      // well-separated boundary points (sampled injectivity of the normal map)
      double focal = kmax_pos > 0.0 ? 1.0 / kmax_pos : 1e300;
      double min_width = 1e300;
      const double min_sep = dom.perimeter() / 6.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          double ds = bs[j].s - bs[i].s;
          ds = std::min(ds, dom.perimeter() - ds);
          if (ds < min_sep) continue;
          min_width = std::min(min_width, dist(bs[i].p, bs[j].p));
        }
      }
      cp.delta = std::min(focal, 0.5 * min_width);
      break;
    }
  }

  // shrink r0 from delta/10 until a certification grid of star-shape
  // checks passes for admissible centers
  double r0 = 0.999 * cp.delta / 10.0;
  int used = 0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    bool ok = true;
    for (int i = 0; i < n && ok; i += std::max(1, n / 64)) {
      for (double frac : {1.0, 0.5, 0.25}) {
        const double r = r0 * frac;
        for (double depth : {cp.C0 * r * r, 2.0 * cp.C0 * r * r, 0.25 * cp.delta,
                             0.5 * cp.delta}) {
          const double d = std::max(depth, cp.C0 * r * r);
          const Vec2 x0 = bs[i].p - d * bs[i].normal;
          if (!dom.contains(x0)) continue;
          ++used;
          if (!is_star_shaped(dom, x0, r).ok) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
    }
    if (ok) break;
    r0 *= 0.85;
  }
  cp.r0 = r0;
  cp.certification_samples = used;
  return cp;
}

// ---------------------------------------------------------------------------
// straightening charts

StraightenedChart::StraightenedChart(const DomainSpec& dom, double param0,
                                     double chart_radius)
    : dom_(&dom), param0_(param0), chart_radius_(chart_radius) {
  if (chart_radius <= 0.0)
    throw std::invalid_argument("straighten: chart_radius must be > 0");
  anchor_ = dom.boundary_point(param0);
  e1_ = dom.boundary_derivative(param0).normalized();
  e2_ = Vec2{0, 0} - dom.boundary_normal(param0);  // inward
  if (dom.kind() == DomainKind::Rectangle) {
    // anchors must keep clear of the corners
    double s = std::fmod(param0, dom.perimeter());
    if (s < 0.0) s += dom.perimeter();
    const double lens[4] = {dom.width(), dom.height(), dom.width(), dom.height()};
    double acc = 0.0, corner_dist = 1e300;
    for (int e = 0; e < 4; ++e) {
      if (s >= acc && s <= acc + lens[e])
        corner_dist = std::min(s - acc, acc + lens[e] - s);
      acc += lens[e];
    }
    if (corner_dist < chart_radius)
      throw std::invalid_argument(
          "straighten: rectangle anchor too close to a corner");
    flat_ = true;
  }

  // fitted constants
  if (flat_) {
    grad_bound_C_ = 0.0;
    tau1_ = tau2_ = 1.0;
  } else {
    double c = 0.0;
    for (int i = -40; i <= 40; ++i) {
      if (i == 0) continue;
      const double xi = chart_radius_ * i / 40.0;
      c = std::max(c, std::abs(dgamma(xi)) / std::abs(xi));
    }
    grad_bound_C_ = std::max(c, std::abs(d2gamma(0.0)));
    std::vector<Vec2> pts;
    for (int ix = -3; ix <= 3; ++ix)
      for (int iy = 0; iy <= 4; ++iy)
        pts.push_back(anchor_ + (chart_radius_ * ix / 3.0) * e1_ +
                      (chart_radius_ * iy / 4.0) * e2_);
    double t1 = 1e300, t2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double den = dist(pts[i], pts[j]);
        if (den < 1e-12) continue;
        const double num = dist(to_chart(pts[i]), to_chart(pts[j]));
        t1 = std::min(t1, num / den);
        t2 = std::max(t2, num / den);
      }
    }
    tau1_ = t1;
    tau2_ = t2;
  }
}

double StraightenedChart::solve_param(double xi) const {
  // Newton on f(p) = (P(p) - anchor) . e1 - xi with bisection fallback
  double p = param0_ + xi / dom_->boundary_derivative(param0_).norm();
  for (int it = 0; it < 50; ++it) {
    const double f = (dom_->boundary_point(p) - anchor_).dot(e1_) - xi;
    const double fp = dom_->boundary_derivative(p).dot(e1_);
    if (std::abs(fp) < 1e-14) break;
    const double step = f / fp;
    p -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(p))) return p;
  }
  // fallback: expand a bracket around param0 and bisect
  double lo = param0_, hi = param0_;
  double span = std::abs(xi) / dom_->boundary_derivative(param0_).norm() + 1e-6;
  auto f = [&](double q) {
    return (dom_->boundary_point(q) - anchor_).dot(e1_) - xi;
  };
  for (int it = 0; it < 60; ++it) {
    lo = param0_ - span;
    hi = param0_ + span;
    if (f(lo) < 0.0 && f(hi) > 0.0) break;
    span *= 1.5;
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double StraightenedChart::gamma(double xi) const {
  if (flat_) return 0.0;
  const double p = solve_param(xi);
  return (dom_->boundary_point(p) - anchor_).dot(e2_);
}

double StraightenedChart::dgamma(double xi) const {
  if (flat_) return 0.0;
  const double p = solve_param(xi);
  const Vec2 d1 = dom_->boundary_derivative(p);
  return d1.dot(e2_) / d1.dot(e1_);
}

double StraightenedChart::d2gamma(double xi) const {
  if (flat_) return 0.0;
  const double p = solve_param(xi);
  const Vec2 d1 = dom_->boundary_derivative(p);
  const Vec2 d2 = dom_->boundary_second_derivative(p);
  const double xip = d1.dot(e1_), zetap = d1.dot(e2_);
  const double xipp = d2.dot(e1_), zetapp = d2.dot(e2_);
  return (zetapp * xip - zetap * xipp) / (xip * xip * xip);
}

Vec2 StraightenedChart::to_chart(const Vec2& x) const {
  const Vec2 d = x - anchor_;
  const double xi = d.dot(e1_);
  const double eta = d.dot(e2_);
  return {xi, eta - gamma(xi)};
}

Vec2 StraightenedChart::from_chart(const Vec2& y) const {
  const double eta = y.y + gamma(y.x);
  return anchor_ + y.x * e1_ + eta * e2_;
}

Vec3 StraightenedChart::to_chart(const Vec3& z) const {
  const Vec2 b = to_chart(z.base());
  return {b.x, b.y, z.t};
}

Vec3 StraightenedChart::from_chart(const Vec3& y) const {
  const Vec2 b = from_chart(y.base());
  return {b.x, b.y, y.t};
}

StraightenedChart straighten(const DomainSpec& dom, double param0,
                             double chart_radius) {
  return StraightenedChart(dom, param0, chart_radius);
}

// ---------------------------------------------------------------------------
// straightened operator coefficients

double CoefficientMatrix::min_eigenvalue() const {
  // block structure: [[a00, a01], [a01, a11]] ++ [a22]
  const double tr = a[0][0] + a[1][1];
  const double det = a[0][0] * a[1][1] - a[0][1] * a[0][1];
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  return std::min(0.5 * (tr - disc), a[2][2]);
}

double CoefficientMatrix::max_eigenvalue() const {
  const double tr = a[0][0] + a[1][1];
  const double det = a[0][0] * a[1][1] - a[0][1] * a[0][1];
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  return std::max(0.5 * (tr + disc), a[2][2]);
}

CoefficientMatrix coefficient_matrix(const StraightenedChart& chart,
                                     const Vec3& y, bool reflected) {
  const double R = chart.chart_radius();
  if (std::abs(y.x) > R * (1.0 + 1e-9))
    throw std::out_of_range("coefficient_matrix: y1 outside chart");
  if (!reflected && y.y < -1e-12)
    throw std::out_of_range(
        "coefficient_matrix: negative y2 requires the reflected matrix");
  if (std::abs(y.y) > R * (1.0 + 1e-9))
    throw std::out_of_range("coefficient_matrix: y2 outside chart");

  const double g = chart.dgamma(y.x);
  const double sign = (reflected && y.y < 0.0) ? -1.0 : 1.0;
  CoefficientMatrix m;
  m.a[0][0] = 1.0;
  m.a[0][1] = m.a[1][0] = -g * sign;
  m.a[1][1] = 1.0 + g * g;
  m.a[2][2] = 1.0;
  return m;
}

}  // namespace nodalab
