#include "nodalab/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nodalab/parallel.hpp"

namespace nodalab {

namespace {
constexpr double kLog2e = 1.4426950408889634;
constexpr double kRadiusCap = 0.95;  // keeps every ball inside slab and r < 1

DoublingEval combine(const Vec3& z0, double r, const SupResult& outer,
                     const SupResult& inner) {
  DoublingEval ev;
  ev.center = z0;
  ev.r = r;
  ev.sup_inner = inner.value;
  ev.sup_inner_err = inner.error;
  // ball inclusion: never let the discrete outer sup fall below the inner one
  ev.sup_outer = std::max(outer.value, inner.value);
  ev.sup_outer_err = outer.error;
  if (!(ev.sup_inner > 0.0))
    throw std::runtime_error("doubling_index: trivial field on inner ball");
  ev.M = 2.0 * std::log2(ev.sup_outer / ev.sup_inner);
  ev.M_err = 2.0 * kLog2e *
             (ev.sup_outer_err / ev.sup_outer + ev.sup_inner_err / ev.sup_inner);
  return ev;
}
}  // namespace

DoublingEval doubling_index(const SolutionField& f, const Vec3& z0, double r,
                            double pitch) {
  const SupResult outer = lifted_sup(f, z0, r, pitch);
  const SupResult inner = lifted_sup(f, z0, 0.5 * r, pitch);
  return combine(z0, r, outer, inner);
}

BridgeReport check_bridge(const SolutionField& f, const Vec2& x0, double r,
                          double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("check_bridge: eta in (0,1)");
  const Vec3 z0{x0.x, x0.y, 0.0};
  const StarCertificate cert = is_star_shaped(f.domain, x0, 2.0 * r);
  if (!cert.ok && f.domain.boundary_distance(x0) <= 2.0 * r)
    throw std::runtime_error("check_bridge: star certificate failed at 2r");
  BridgeReport rep;
  rep.r = r;
  rep.eta = eta;
  rep.M = doubling_index(f, z0, r).M;
  rep.N_outer = frequency_eval(f, z0, (1.0 + eta) * r).N;
  rep.N_mid = frequency_eval(f, z0, 0.5 * (1.0 + eta) * r).N;
  const double lever = 1.0 - std::log2(eta);  // > 1 for eta < 1
  const double upper_gap =
      rep.M - (1.0 + std::log2(1.0 + eta)) * rep.N_outer;
  const double lower_gap =
      (1.0 - std::log2(1.0 + eta)) * rep.N_mid - rep.M;
  rep.C1 = std::max(0.0, upper_gap / lever);
  rep.C2 = std::max(0.0, lower_gap / lever);
  return rep;
}

AlmostMonotonicityReport check_almost_monotonicity(
    const SolutionField& f, const Vec2& x0, const std::vector<double>& r_grid,
    double r0) {
  AlmostMonotonicityReport rep;
  rep.r0 = r0;
  const Vec3 z0{x0.x, x0.y, 0.0};
  rep.M0 = doubling_index(f, z0, r0).M;
  for (double r : r_grid) {
    if (!(r > 0.0 && r <= r0)) continue;
    const double m = doubling_index(f, z0, r).M;
    const double c = m / (rep.M0 + 1.0);
    if (c > rep.C) {
      rep.C = c;
      rep.worst_r = r;
    }
    ++rep.points;
  }
  return rep;
}

GlobalBoundReport global_doubling_bound(const SolutionField& f,
                                        const std::vector<Vec2>& centers,
                                        const std::vector<double>& radii,
                                        bool require_star) {
  GlobalBoundReport rep;
  const double denom = 1.0 + std::sqrt(f.lambda);

  // all sup radii needed: every grid radius and its half
  std::vector<double> need;
  for (double r : radii) {
    need.push_back(r);
    need.push_back(0.5 * r);
  }
  std::sort(need.begin(), need.end());
  need.erase(std::unique(need.begin(), need.end()), need.end());

  struct Local {
    double M_max = -1.0;
    Vec2 center;
    double r = 0.0;
    int evals = 0;
  };
  std::vector<Local> slots(centers.size());
  parallel_for(centers.size(), [&](size_t ci) {
    const Vec2& x0 = centers[ci];
    if (!f.domain.contains(x0)) return;
    if (require_star) {
      const double d = f.domain.boundary_distance(x0);
      for (double r : radii)
        if (d <= r && !is_star_shaped(f.domain, x0, r).ok) return;
    }
    const Vec3 z0{x0.x, x0.y, 0.0};
    std::map<double, double> sup;
    double running = 0.0;
    for (double r : need) {
      running = std::max(running, lifted_sup(f, z0, r).value);
      sup[r] = running;  // enforce monotone sups across nested balls
    }
    Local& loc = slots[ci];
    for (double r : radii) {
      ++loc.evals;
      if (!(sup[0.5 * r] > 0.0)) continue;
      const double m = 2.0 * std::log2(sup[r] / sup[0.5 * r]);
      if (m > loc.M_max) {
        loc.M_max = m;
        loc.center = x0;
        loc.r = r;
      }
    }
  });

  for (const auto& loc : slots) {
    rep.evaluations += loc.evals;
    if (loc.evals > 0) ++rep.centers;
    if (loc.M_max > rep.M_max) {
      rep.M_max = loc.M_max;
      rep.arg_center = loc.center;
      rep.arg_r = loc.r;
    }
  }
  rep.ratio = rep.M_max / denom;
  return rep;
}

VanishingOrderEstimate vanishing_order(const SolutionField& f, const Vec2& x0,
                                       const std::vector<double>& radii) {
  if (radii.size() < 3)
    throw std::invalid_argument("vanishing_order: need at least 3 radii");
  if (!(radii.back() / radii.front() >= 9.99))
    throw std::invalid_argument("vanishing_order: radii must span a decade");
  VanishingOrderEstimate est;
  est.x0 = x0;
  est.radii = radii;
  for (double r : radii) {
    const double mass =
        integrate_ball(f.domain, x0, r,
                       [&](const Vec2& p, double) {
                         const double u = f.value(p);
                         return u * u;
                       })
            .value;
    const double area = clipped_ball_area(f.domain, x0, r).value;
    est.mean_sq.push_back(mass / area);
  }
  // least squares in log-log; slope = 2k
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(radii.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(radii[i]);
    const double ly = std::log(std::max(est.mean_sq[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  est.slope = 0.5 * slope;
  for (int i = 0; i < n; ++i) {
    const double dev = std::log(std::max(est.mean_sq[i], 1e-300)) -
                       (slope * std::log(radii[i]) + icept);
    est.residual = std::max(est.residual, std::abs(dev));
  }
  est.reliable = est.residual < 0.5;
  return est;
}

// ---------------------------------------------------------------------------
// chart-space machinery

ChartField::ChartField(const SolutionField& f, const StraightenedChart& chart)
    : f_(&f), chart_(&chart), s_(std::sqrt(f.lambda)) {}

double ChartField::value(double y1, double y2) const {
  const double sign = y2 < 0.0 ? -1.0 : 1.0;
  return sign * f_->value(chart_->from_chart(Vec2{y1, std::abs(y2)}));
}

bool ChartField::valid(double y1, double y2) const {
  const double a = std::abs(y2);
  if (std::abs(y1) > chart_->chart_radius() || a > chart_->chart_radius())
    return false;
  return f_->domain.contains(chart_->from_chart(Vec2{y1, a}));
}

double ChartField::extent() const { return chart_->chart_radius(); }

SupResult chart_sup(const ChartField& cf, const Vec3& y0, double r,
                    double pitch) {
  if (r <= 0.0) throw std::invalid_argument("chart_sup: r must be > 0");
  if (std::abs(y0.t) + r >= kSlabHalfWidth)
    throw std::invalid_argument("chart_sup: ball leaves the slab");
  if (pitch <= 0.0) pitch = r / 32.0;
  const double s = cf.s();
  const double r2 = r * r;
  auto score = [&](double y1, double y2) {
    const double d2 = (y1 - y0.x) * (y1 - y0.x) + (y2 - y0.y) * (y2 - y0.y);
    const double tau = std::sqrt(std::max(r2 - d2, 0.0));
    return std::abs(cf.value(y1, y2)) * std::exp(s * (y0.t + tau));
  };
  auto in_region = [&](double y1, double y2) {
    const double d2 = (y1 - y0.x) * (y1 - y0.x) + (y2 - y0.y) * (y2 - y0.y);
    return d2 <= r2 && cf.valid(y1, y2);
  };

  auto run = [&](double pt) {
    SupResult res;
    res.value = -1.0;
    const long i0 = static_cast<long>(std::floor((y0.x - r) / pt));
    const long i1 = static_cast<long>(std::ceil((y0.x + r) / pt));
    const long j0 = static_cast<long>(std::floor((y0.y - r) / pt));
    const long j1 = static_cast<long>(std::ceil((y0.y + r) / pt));
    for (long j = j0; j <= j1; ++j)
      for (long i = i0; i <= i1; ++i) {
        const double y1 = i * pt, y2 = j * pt;
        if (!in_region(y1, y2)) continue;
        ++res.candidates;
        const double v = score(y1, y2);
        if (v > res.value) {
          res.value = v;
          res.argmax = {y1, y2};
        }
      }
    if (res.value < 0.0) {
      res.value = in_region(y0.x, y0.y) ? score(y0.x, y0.y) : 0.0;
      res.argmax = {y0.x, y0.y};
      res.candidates = 1;
      return res;
    }
    // fixed compass ascent from the best lattice point
    Vec2 cur = res.argmax;
    double step = 0.5 * pt;
    for (int it = 0; it < 60; ++it) {
      Vec2 best = cur;
      double bestv = cf.valid(cur.x, cur.y) ? score(cur.x, cur.y) : -1.0;
      for (int d = 0; d < 8; ++d) {
        const double ang = 0.25 * 3.14159265358979323846 * d;
        const Vec2 q{cur.x + step * std::cos(ang), cur.y + step * std::sin(ang)};
        const double v = cf.valid(q.x, q.y) ? score(q.x, q.y) : -1.0;
        if (v > bestv) {
          bestv = v;
          best = q;
        }
      }
      if (best.x == cur.x && best.y == cur.y) {
        step *= 0.5;
        if (step < 1e-13 * r) break;
      } else {
        cur = best;
        const double d2 =
            (cur.x - y0.x) * (cur.x - y0.x) + (cur.y - y0.y) * (cur.y - y0.y);
        if (d2 <= r2 && bestv > res.value) {
          res.value = bestv;
          res.argmax = cur;
        }
      }
    }
    return res;
  };

  SupResult coarse = run(pitch);
  SupResult fine = run(0.5 * pitch);
  SupResult out = fine.value >= coarse.value ? fine : coarse;
  out.error = std::abs(fine.value - coarse.value) + 1e-13 * std::abs(out.value);
  out.candidates = coarse.candidates + fine.candidates;
  return out;
}

DoublingEval chart_doubling_index(const ChartField& cf, const Vec3& y0,
                                  double r, double pitch) {
  const SupResult outer = chart_sup(cf, y0, r, pitch);
  const SupResult inner = chart_sup(cf, y0, 0.5 * r, pitch);
  return combine(y0, r, outer, inner);
}

double ChartCube::diam() const {
  const double dx = hi.x - lo.x, dy = hi.y - lo.y, dt = hi.t - lo.t;
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

namespace {

using SupFn = std::function<SupResult(const Vec3&, double)>;

CubeDoubling cube_doubling_core(const SupFn& sup_fn, const ChartCube& cube,
                                int grid_step, int n_radii) {
  CubeDoubling out;
  out.cube = cube;
  const double r_hi = std::min(10.0 * (kBaseDim + 1) * cube.diam(), kRadiusCap);
  const double r_lo = std::min(0.25 * cube.side(), r_hi);
  out.radii = n_radii;

  std::vector<double> radii;
  for (int i = 0; i < n_radii; ++i)
    radii.push_back(r_lo * std::pow(r_hi / r_lo, n_radii <= 1
                                                     ? 0.0
                                                     : static_cast<double>(i) /
                                                           (n_radii - 1)));

  // centers: cube lattice at spacing side/grid_step, collapsed to the t = 0
  // slice (exact under t-translation invariance of M)
  std::vector<Vec3> centers;
  for (int j = 0; j <= grid_step; ++j)
    for (int i = 0; i <= grid_step; ++i)
      centers.push_back({cube.lo.x + cube.side() * i / grid_step,
                         cube.lo.y + cube.side() * j / grid_step, 0.0});
  out.centers = static_cast<int>(centers.size());

  struct Best {
    double M = -1.0;
    double M_err = 0.0;
    Vec3 center;
    double r = 0.0;
  };
  std::vector<Best> slots(centers.size());
  parallel_for(centers.size(), [&](size_t ci) {
    // memoized monotone sups along the merged radius chain
    std::map<double, double> sup;
    std::map<double, double> sup_err;
    std::vector<double> need;
    for (double r : radii) {
      need.push_back(r);
      need.push_back(0.5 * r);
    }
    std::sort(need.begin(), need.end());
    need.erase(std::unique(need.begin(), need.end()), need.end());
    double running = 0.0;
    for (double r : need) {
      const SupResult sr = sup_fn(centers[ci], r);
      running = std::max(running, sr.value);
      sup[r] = running;
      sup_err[r] = sr.error;
    }
    Best& b = slots[ci];
    for (double r : radii) {
      if (!(sup[0.5 * r] > 0.0)) continue;
      const double m = 2.0 * std::log2(sup[r] / sup[0.5 * r]);
      if (m > b.M) {
        b.M = m;
        b.M_err = 2.0 * 1.4426950408889634 *
                  (sup_err[r] / sup[r] + sup_err[0.5 * r] / sup[0.5 * r]);
        b.center = centers[ci];
        b.r = r;
      }
    }
  });

  Best best;
  for (const auto& b : slots)
    if (b.M > best.M) best = b;

  // one refinement pass around the argmax (centers halfway to neighbors,
  // radii nudged geometrically, all capped to the legal range)
  const double h = 0.5 * cube.side() / grid_step;
  std::vector<Vec3> refine;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      Vec3 c{best.center.x + di * h, best.center.y + dj * h, 0.0};
      c.x = std::clamp(c.x, cube.lo.x, cube.hi.x);
      c.y = std::clamp(c.y, cube.lo.y, cube.hi.y);
      refine.push_back(c);
    }
  for (const Vec3& c : refine)
    for (double fac : {0.8, 1.0, 1.25}) {
      const double r = std::clamp(best.r * fac, r_lo, r_hi);
      const SupResult so = sup_fn(c, r);
      const SupResult si = sup_fn(c, 0.5 * r);
      const DoublingEval ev = combine(c, r, so, si);
      if (ev.M > best.M) {
        best.M = ev.M;
        best.M_err = ev.M_err;
        best.center = c;
        best.r = r;
      }
    }

  out.M_Q = best.M;
  out.M_err = best.M_err;
  out.arg_center = best.center;
  out.arg_r = best.r;
  return out;
}

}  // namespace

CubeDoubling cube_doubling(const ChartField& cf, const ChartCube& cube,
                           int grid_step, int n_radii) {
  return cube_doubling_core(
      [&cf](const Vec3& c, double r) { return chart_sup(cf, c, r); }, cube,
      grid_step, n_radii);
}

CubeDoubling cube_doubling_interior(const SolutionField& f,
                                    const ChartCube& cube, int grid_step,
                                    int n_radii) {
  return cube_doubling_core(
      [&f](const Vec3& c, double r) { return lifted_sup(f, c, r); }, cube,
      grid_step, n_radii);
}

}  // namespace nodalab
