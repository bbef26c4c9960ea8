// Independent reference implementations used to derive expected values.
// Everything here is deliberately primitive (series, bisection, composite
// Simpson, seeded Monte-Carlo, dense lattice scans): slow but transparent,
// sharing no code with the library under test.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nodalab/field.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/vec.hpp"

namespace oracle {

// Bessel J_m by ascending power series (reliable for x <~ 25 in double).
double bessel_j(int m, double x);

// k-th positive zero of J_m: coarse scan for a sign change, then bisection.
double bessel_zero(int m, int k);

// Composite Simpson on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

// Seeded Monte-Carlo integral of g over the 3d ball B_r(c).  Returns the
// estimate and its standard error (both already scaled by the ball volume).
struct McResult {
  double value = 0.0;
  double stderr_ = 0.0;
};
McResult ball_mc(const std::function<double(const nodalab::Vec3&)>& g,
                 const nodalab::Vec3& c, double r, int n, std::uint64_t seed);

// Dense-lattice sup of |u| over B_r(x0) ∩ Ω (2d), n points per axis.
double grid_sup(const nodalab::Field& u, const nodalab::DomainSpec& dom,
                const nodalab::Vec2& x0, double r, int n);

// First `count` Dirichlet eigenvalues of the (w x h)-rectangle Laplacian,
// pi^2 (k^2/w^2 + m^2/h^2), sorted with multiplicity.
std::vector<double> rect_eigs(double w, double h, int count);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Wrap an analytic (value, gradient) pair as a SolutionField with V = 0.
// Used for synthetic inputs that are not solutions of anything.
nodalab::SolutionField synthetic_field(const nodalab::DomainSpec& dom,
                                       std::function<double(nodalab::Vec2)> v,
                                       std::function<nodalab::Vec2(nodalab::Vec2)> g,
                                       const std::string& name);

}  // namespace oracle
