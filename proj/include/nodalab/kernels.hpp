#pragma once

#include <cmath>

namespace nodalab {

// Closed-form t-kernels for the dimensional reduction of integrals over
// lifted balls.  With s = sqrt(lambda), the lifted weight e^{2 s t} is
// integrated exactly over the t-section [-tau, tau] of a ball, so every
// 3d integral used here reduces to a 2d one:
//
//   K0(tau)  = int_{-tau}^{tau} e^{2 s t} dt
//   K1(tau)  = int_{-tau}^{tau} t e^{2 s t} dt
//   Kw(tau)  = int_{-tau}^{tau} (tau^2 - t^2) e^{2 s t} dt
//
// All three have removable singularities at s -> 0; a truncated power series
// is used for small s*tau to avoid catastrophic cancellation.

namespace detail {
inline constexpr double kKernelSeriesCut = 0.5;  // threshold on 2*s*tau
}

inline double kernel_K0(double s, double tau) {
  const double a = 2.0 * s * tau;
  if (a < detail::kKernelSeriesCut) {
    // 2*tau * sum_j a^{2j} / (2j+1)!
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < 12; ++j) {
      sum += term;
      term *= a * a / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
      if (term < 1e-18 * sum) break;
    }
    return 2.0 * tau * sum;
  }
  return std::sinh(a) / s;
}

inline double kernel_K1(double s, double tau) {
  if (s == 0.0) return 0.0;
  const double a = 2.0 * s * tau;
  if (a < detail::kKernelSeriesCut) {
    // 2 * sum_j (2s)^{2j+1} tau^{2j+3} / ((2j+1)! (2j+3))
    double sum = 0.0;
    double term = 2.0 * s * tau * tau * tau / 3.0;  // j = 0
    for (int j = 0; j < 12; ++j) {
      sum += term;
      const double jj = 2.0 * j;
      term *= (2.0 * s * tau) * (2.0 * s * tau) * (jj + 3.0) /
              ((jj + 2.0) * (jj + 3.0) * (jj + 5.0));
      if (term < 1e-18 * sum) break;
    }
    return 2.0 * sum;
  }
  return tau * std::cosh(a) / s - std::sinh(a) / (2.0 * s * s);
}

inline double kernel_Kw(double s, double tau) {
  const double a = 2.0 * s * tau;
  if (a < detail::kKernelSeriesCut) {
    // 2 tau^3 * sum_j a^{2j} / (2j)! * 2 / ((2j+1)(2j+3))
    double sum = 0.0;
    double term = 2.0 / 3.0;  // j = 0
    for (int j = 0; j < 12; ++j) {
      sum += term;
      const double jj = 2.0 * j;
      term *= a * a * (jj + 1.0) /
              ((jj + 1.0) * (jj + 2.0)) * (jj + 3.0) / ((jj + 3.0) * (jj + 5.0));
      if (term < 1e-18 * sum) break;
    }
    return 2.0 * tau * tau * tau * sum;
  }
  return tau * std::cosh(a) / (s * s) - std::sinh(a) / (2.0 * s * s * s);
}

}  // namespace nodalab
