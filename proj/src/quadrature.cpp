#include "nodalab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nodalab {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct GaussRule {
  std::vector<double> x, w;
};

// Newton iteration on Legendre polynomials; standard Golub-Welsch-free route
// that is plenty for the node counts used here.
GaussRule make_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& gauss(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
  return it->second;
}

double polar_pass(const Vec2& c, double r, const BallIntegrand& f, int nphi,
                  int ntheta, long& evals) {
  const GaussRule& g = gauss(nphi);
  double total = 0.0;
  for (int i = 0; i < nphi; ++i) {
    const double phi = 0.25 * kPi * (g.x[i] + 1.0);  // [0, pi/2]
    const double wphi = 0.25 * kPi * g.w[i];
    const double rho = r * std::sin(phi);
    const double tau = r * std::cos(phi);
    const double jac = r * rho * std::cos(phi);  // rho drho = rho * r cos(phi) dphi
    double ring = 0.0;
    for (int j = 0; j < ntheta; ++j) {
      const double th = 2.0 * kPi * j / ntheta;
      ring += f({c.x + rho * std::cos(th), c.y + rho * std::sin(th)}, tau);
      ++evals;
    }
    total += wphi * jac * ring * (2.0 * kPi / ntheta);
  }
  return total;
}

enum class CellClass { Inside, Outside, Mixed };

// Conservative classification of an axis-aligned cell against B_r(c) ∩ Ω.
CellClass classify(const DomainSpec& dom, const Vec2& c, double r, double x0,
                   double y0, double hx, double hy) {
  // against the disk: nearest / farthest corner distances
  const double cx = std::clamp(c.x, x0, x0 + hx);
  const double cy = std::clamp(c.y, y0, y0 + hy);
  const double dnear = std::hypot(cx - c.x, cy - c.y);
  if (dnear > r) return CellClass::Outside;
  const double fx = std::max(std::abs(x0 - c.x), std::abs(x0 + hx - c.x));
  const double fy = std::max(std::abs(y0 - c.y), std::abs(y0 + hy - c.y));
  const double dfar = std::hypot(fx, fy);
  const bool disk_in = dfar <= r;
  // against the domain: signed distance at the center vs the half-diagonal
  const double half_diag = 0.5 * std::hypot(hx, hy);
  const double sd = dom.signed_distance({x0 + 0.5 * hx, y0 + 0.5 * hy});
  if (sd > half_diag) return CellClass::Outside;
  const bool dom_in = sd < -half_diag;
  return (disk_in && dom_in) ? CellClass::Inside : CellClass::Mixed;
}

double tau_of(const Vec2& p, const Vec2& c, double r) {
  const double d2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
  return std::sqrt(std::max(r * r - d2, 0.0));
}

// Tensor Gauss over a cell known to lie inside the region.
double cell_gauss(const Vec2& c, double r, const BallIntegrand& f, double x0,
                  double y0, double hx, double hy, int n, long& evals) {
  const GaussRule& g = gauss(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 p{x0 + 0.5 * hx * (g.x[i] + 1.0), y0 + 0.5 * hy * (g.x[j] + 1.0)};
      total += g.w[i] * g.w[j] * f(p, tau_of(p, c, r));
      ++evals;
    }
  return total * 0.25 * hx * hy;
}

// Indicator-weighted low-order rule for an unresolvable leaf.
double cell_indicator(const DomainSpec& dom, const Vec2& c, double r,
                      const BallIntegrand& f, double x0, double y0, double hx,
                      double hy, long& evals) {
  const GaussRule& g = gauss(2);
  double total = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vec2 p{x0 + 0.5 * hx * (g.x[i] + 1.0), y0 + 0.5 * hy * (g.x[j] + 1.0)};
      ++evals;
      if (std::hypot(p.x - c.x, p.y - c.y) > r || !dom.contains(p)) continue;
      total += g.w[i] * g.w[j] * f(p, tau_of(p, c, r));
    }
  return total * 0.25 * hx * hy;
}

double cell_recurse(const DomainSpec& dom, const Vec2& c, double r,
                    const BallIntegrand& f, double x0, double y0, double hx,
                    double hy, int depth, long& evals) {
  const CellClass cls = classify(dom, c, r, x0, y0, hx, hy);
  if (cls == CellClass::Outside) return 0.0;
  if (cls == CellClass::Inside) return cell_gauss(c, r, f, x0, y0, hx, hy, 4, evals);
  if (depth == 0) return cell_indicator(dom, c, r, f, x0, y0, hx, hy, evals);
  const double hx2 = 0.5 * hx, hy2 = 0.5 * hy;
  return cell_recurse(dom, c, r, f, x0, y0, hx2, hy2, depth - 1, evals) +
         cell_recurse(dom, c, r, f, x0 + hx2, y0, hx2, hy2, depth - 1, evals) +
         cell_recurse(dom, c, r, f, x0, y0 + hy2, hx2, hy2, depth - 1, evals) +
         cell_recurse(dom, c, r, f, x0 + hx2, y0 + hy2, hx2, hy2, depth - 1, evals);
}

double clipped_pass(const DomainSpec& dom, const Vec2& c, double r,
                    const BallIntegrand& f, int base, int depth, long& evals) {
  const double h = 2.0 * r / base;
  double total = 0.0;
  for (int j = 0; j < base; ++j)
    for (int i = 0; i < base; ++i)
      total += cell_recurse(dom, c, r, f, c.x - r + i * h, c.y - r + j * h, h,
                            h, depth, evals);
  return total;
}

}  // namespace

QuadResult operator+(const QuadResult& a, const QuadResult& b) {
  return {a.value + b.value, a.error + b.error, a.evals + b.evals};
}

const std::vector<double>& gauss_nodes(int n) { return gauss(n).x; }
const std::vector<double>& gauss_weights(int n) { return gauss(n).w; }

QuadResult integrate_disk(const Vec2& center, double r, const BallIntegrand& f,
                          int nphi, int ntheta) {
  if (r <= 0.0) throw std::invalid_argument("integrate_disk: r must be > 0");
  QuadResult res;
  const double coarse = polar_pass(center, r, f, nphi, ntheta, res.evals);
  const double fine =
      polar_pass(center, r, f, nphi + nphi / 2, ntheta + ntheta / 2, res.evals);
  res.value = fine;
  res.error = std::abs(fine - coarse);
  return res;
}

QuadResult integrate_clipped_disk(const DomainSpec& dom, const Vec2& center,
                                  double r, const BallIntegrand& f, int base,
                                  int depth) {
  if (r <= 0.0) throw std::invalid_argument("integrate_clipped_disk: r > 0");
  QuadResult res;
  const double coarse = clipped_pass(dom, center, r, f, base, depth, res.evals);
  const double fine = clipped_pass(dom, center, r, f, base, depth + 1, res.evals);
  res.value = fine;
  res.error = std::abs(fine - coarse);
  return res;
}

QuadResult integrate_ball(const DomainSpec& dom, const Vec2& center, double r,
                          const BallIntegrand& f, int boost) {
  if (dom.boundary_clearance(center) > r && dom.contains(center))
    return integrate_disk(center, r, f, 48 + 32 * boost, 64 + 48 * boost);
  // Clipped-cell error is dominated by the boundary cut: each extra depth
  // level halves the cut-cell width, each base doubling halves it again.
  return integrate_clipped_disk(dom, center, r, f, 16 << std::min(boost, 2),
                                5 + boost);
}

QuadResult clipped_ball_area(const DomainSpec& dom, const Vec2& center,
                             double r) {
  if (dom.boundary_clearance(center) > r && dom.contains(center))
    return {kPi * r * r, 0.0, 0};
  return integrate_clipped_disk(dom, center, r,
                                [](const Vec2&, double) { return 1.0; });
}

}  // namespace nodalab
