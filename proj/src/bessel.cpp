#include "nodalab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace nodalab {

double bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
  if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
  return std::cyl_bessel_j(static_cast<double>(m), x);
}

double bessel_j_prime(int m, double x) {
  // J_m' = (J_{m-1} - J_{m+1}) / 2, with J_0' = -J_1.
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

double bessel_zero(int m, int k) {
  if (k < 1) throw std::invalid_argument("bessel_zero: k must be >= 1");
  // March in small steps to bracket the k-th sign change, then bisect.
  // Zeros of J_m are separated by more than 2.4, so a 0.05 step cannot
  // skip one; start past x=0 where J_m (m>0) merely touches zero.
  const double step = 0.05;
  double x0 = (m == 0) ? step : std::max(step, 0.5 * m);
  double f0 = bessel_j(m, x0);
  int found = 0;
  for (int iter = 0; iter < 200000; ++iter) {
    const double x1 = x0 + step;
    const double f1 = bessel_j(m, x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      ++found;
      if (found == k) {
        double lo = x0, hi = x1;
        for (int b = 0; b < 200; ++b) {
          const double mid = 0.5 * (lo + hi);
          const double fm = bessel_j(m, mid);
          if ((fm < 0.0) == (f0 < 0.0)) lo = mid; else hi = mid;
          if (hi - lo < 1e-15 * hi) break;
        }
        return 0.5 * (lo + hi);
      }
    }
    x0 = x1;
    f0 = f1;
  }
  throw std::runtime_error("bessel_zero: bracketing failed");
}

}  // namespace nodalab
