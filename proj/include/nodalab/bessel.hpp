#pragma once

namespace nodalab {

// Bessel function of the first kind J_m and its derivative.
double bessel_j(int m, double x);
double bessel_j_prime(int m, double x);

// k-th positive zero j_{m,k} of J_m (k >= 1), found by bracketing and
// bisection; accurate to ~1e-13 relative.
double bessel_zero(int m, int k);

}  // namespace nodalab
