#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nodalab/potential.hpp"

namespace oracle {

double bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: m >= 0");
  if (x < 0.0) return (m % 2 ? -1.0 : 1.0) * bessel_j(m, -x);
  // J_m(x) = sum_k (-1)^k (x/2)^{m+2k} / (k! (m+k)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / double(i);  // (x/2)^m / m!
  double sum = term;
  for (int k = 1; k <= 80; ++k) {
    term *= -half * half / (double(k) * double(m + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && k > m) break;
  }
  return sum;
}

double bessel_zero(int m, int k) {
  if (k < 1) throw std::invalid_argument("bessel_zero: k >= 1");
  // March outward in small steps collecting sign changes, then bisect.
  int found = 0;
  double x0 = 0.05, f0 = bessel_j(m, x0);
  for (double x = x0 + 0.05; x < 60.0; x += 0.05) {
    const double fx = bessel_j(m, x);
    if (f0 == 0.0) f0 = -fx;  // grazed a zero exactly
    if (f0 * fx < 0.0) {
      ++found;
      if (found == k) {
        double lo = x - 0.05, hi = x, flo = f0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = bessel_j(m, mid);
          if (flo * fm <= 0.0)
            hi = mid;
          else
            lo = mid, flo = fm;
        }
        return 0.5 * (lo + hi);
      }
    }
    f0 = fx;
    x0 = x;
  }
  throw std::runtime_error("bessel_zero: not found below 60");
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n < 2 || n % 2) throw std::invalid_argument("simpson: n even >= 2");
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

McResult ball_mc(const std::function<double(const nodalab::Vec3&)>& g,
                 const nodalab::Vec3& c, double r, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    // Isotropic direction times cbrt(U) radius = uniform in the ball.
    double dx = gauss(rng), dy = gauss(rng), dt = gauss(rng);
    const double nrm = std::sqrt(dx * dx + dy * dy + dt * dt);
    const double rad = r * std::cbrt(unif(rng));
    const double s = nrm > 0 ? rad / nrm : 0.0;
    const nodalab::Vec3 p{c.x + dx * s, c.y + dy * s, c.t + dt * s};
    const double v = g(p);
    sum += v;
    sum2 += v * v;
  }
  const double vol = 4.0 / 3.0 * M_PI * r * r * r;
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  McResult out;
  out.value = mean * vol;
  out.stderr_ = vol * std::sqrt(var / n);
  return out;
}

double grid_sup(const nodalab::Field& u, const nodalab::DomainSpec& dom,
                const nodalab::Vec2& x0, double r, int n) {
  double best = 0.0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const nodalab::Vec2 p{x0.x - r + 2.0 * r * i / n,
                            x0.y - r + 2.0 * r * j / n};
      if ((p - x0).norm() > r || !dom.contains(p)) continue;
      best = std::max(best, std::abs(u.value(p)));
    }
  }
  return best;
}

std::vector<double> rect_eigs(double w, double h, int count) {
  std::vector<double> all;
  for (int k = 1; k <= 40; ++k)
    for (int m = 1; m <= 40; ++m)
      all.push_back(M_PI * M_PI * (k * k / (w * w) + m * m / (h * h)));
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need matched samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

nodalab::SolutionField synthetic_field(
    const nodalab::DomainSpec& dom, std::function<double(nodalab::Vec2)> v,
    std::function<nodalab::Vec2(nodalab::Vec2)> g, const std::string& name) {
  nodalab::SolutionField f;
  f.u = std::make_shared<nodalab::AnalyticField>(std::move(v), std::move(g));
  f.domain = dom;
  f.V = nodalab::Potential::zero();
  f.mu = 0.0;
  f.lambda = 0.0;
  f.dirichlet = false;
  f.name = name;
  return f;
}

}  // namespace oracle
