#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "nodalab/geometry.hpp"
#include "oracles.hpp"

using namespace nodalab;

TEST_SUITE("geometry") {

TEST_CASE("unit disk: exact area, perimeter, distances") {
  const DomainSpec disk = DomainSpec::unit_disk();
  CHECK(disk.area() == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(disk.perimeter() == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
  CHECK(disk.contains({0.0, 0.0}));
  CHECK(disk.contains({0.9, 0.0}));
  CHECK(!disk.contains({1.01, 0.0}));
  CHECK(disk.boundary_distance({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(disk.boundary_distance({0.5, 0.0}) == doctest::Approx(0.5));
  // signed distance: negative inside, positive outside
  CHECK(disk.signed_distance({0.5, 0.0}) < 0.0);
  CHECK(disk.signed_distance({1.5, 0.0}) > 0.0);
  CHECK(disk.max_curvature() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unit square: exact area, perimeter, corner flags") {
  const DomainSpec sq = DomainSpec::rectangle(1.0, 1.0);
  CHECK(sq.area() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sq.perimeter() == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(sq.param_max() == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(sq.contains({0.5, 0.5}));
  CHECK(!sq.contains({-0.01, 0.5}));
  CHECK(sq.boundary_distance({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(sq.boundary_distance({0.1, 0.5}) == doctest::Approx(0.1));
  // bottom edge runs first: param 0.25 is the point (0.25, 0)
  const Vec2 p = sq.boundary_point(0.25);
  CHECK(p.x == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(p.y == doctest::Approx(0.0).epsilon(1e-9));
  const Vec2 nu = sq.boundary_normal(0.25);
  CHECK(nu.x == doctest::Approx(0.0));
  CHECK(nu.y == doctest::Approx(-1.0));
  int corners = 0;
  for (const BoundarySample& b : sq.boundary_samples())
    if (b.corner) ++corners;
  CHECK(corners >= 4);
}

TEST_CASE("boundary parametrization consistent with samples") {
  for (const DomainSpec& dom :
       {DomainSpec::unit_disk(), DomainSpec::rectangle(1.0, 0.7)}) {
    for (const BoundarySample& b : dom.boundary_samples()) {
      const Vec2 p = dom.boundary_point(b.s);
      CHECK((p - b.p).norm() <= 1e-7);
    }
  }
}

TEST_CASE("normals point outward on convex domains") {
  for (const DomainSpec& dom :
       {DomainSpec::unit_disk(), DomainSpec::rectangle(1.0, 1.0)}) {
    const Vec2 c = dom.centroid();
    for (const BoundarySample& b : dom.boundary_samples())
      CHECK(b.normal.dot(b.p - c) > 0.0);
  }
}

TEST_CASE("convex domains are star-shaped about interior points") {
  // Every clipped ball in a convex domain is star-shaped about its center;
  // this is the hypothesis behind the whole monotonicity machinery.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  const DomainSpec disk = DomainSpec::unit_disk();
  const DomainSpec sq = DomainSpec::rectangle(1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const Vec2 pd{u(rng), u(rng)};
    const StarCertificate cd = is_star_shaped(disk, pd, 0.6);
    CHECK(cd.ok);
    CHECK(cd.min_dot >= 0.0);
    const Vec2 ps{0.5 + 0.4 * u(rng), 0.5 + 0.4 * u(rng)};
    const StarCertificate cs = is_star_shaped(sq, ps, 0.45);
    CHECK(cs.ok);
  }
}

TEST_CASE("perturbed disk: area shift and curvature bound") {
  const DomainSpec pd = DomainSpec::perturbed_disk(1.0, 0.02, 3);
  // area of rho = 1 + eps cos(m theta): pi (1 + eps^2 / 2)
  CHECK(pd.area() ==
        doctest::Approx(M_PI * (1.0 + 0.5 * 0.02 * 0.02)).epsilon(1e-4));
  CHECK(pd.max_curvature() >= 1.0);
  CHECK(pd.contains({0.0, 0.0}));
  CHECK(!pd.contains({1.2, 0.0}));
}

TEST_CASE("collar parameters are positive and curvature-limited") {
  for (const DomainSpec& dom :
       {DomainSpec::unit_disk(), DomainSpec::rectangle(1.0, 1.0),
        DomainSpec::perturbed_disk(1.0, 0.02, 3)}) {
    const CollarParams cp = collar_params(dom);
    CHECK(cp.delta > 0.0);
    CHECK(cp.r0 > 0.0);
    CHECK(cp.r0 <= cp.delta + 1e-12);
    CHECK(cp.C0 >= 0.0);
    if (dom.max_curvature() > 0.0)
      CHECK(cp.delta <= 1.0 / dom.max_curvature() + 1e-9);
  }
}

TEST_CASE("straightened chart: round trip and boundary flattening") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const DomainSpec& dom :
       {DomainSpec::unit_disk(), DomainSpec::rectangle(1.0, 1.0),
        DomainSpec::perturbed_disk(1.0, 0.012, 4)}) {
    const double p0 = dom.kind() == DomainKind::Rectangle ? 0.5 : 1.1;
    const StraightenedChart chart = straighten(dom, p0, 0.3);
    // gamma(0) = 0 and gamma'(0) = 0 by construction
    CHECK(std::abs(chart.gamma(0.0)) <= 1e-10);
    CHECK(std::abs(chart.dgamma(0.0)) <= 1e-8);
    for (int i = 0; i < 60; ++i) {
      const Vec2 y{0.25 * u(rng), 0.125 * (u(rng) + 1.0)};
      const Vec2 x = chart.from_chart(y);
      const Vec2 back = chart.to_chart(x);
      CHECK((back - y).norm() <= 1e-8);
      // points with y2 > 0 map into the domain near the anchor
      if (y.y > 1e-3) CHECK(dom.contains(x));
    }
    // the boundary maps to {y2 = 0}; the measured distance carries the
    // boundary polyline's chord-sag resolution (~3e-7 at resolution 1024)
    for (double dxi : {-0.2, -0.05, 0.05, 0.2}) {
      const Vec2 xb = chart.from_chart({dxi, 0.0});
      CHECK(dom.boundary_distance(xb) <= 1e-6);
    }
    CHECK(chart.tau1() > 0.0);
    CHECK(chart.tau2() >= chart.tau1());
    CHECK(chart.tau2() <= 4.0);
  }
}

TEST_CASE("flat chart on a rectangle edge is the identity frame") {
  const DomainSpec sq = DomainSpec::rectangle(1.0, 1.0);
  const StraightenedChart chart = straighten(sq, 0.5, 0.3);  // bottom edge
  CHECK(chart.grad_bound_C() == doctest::Approx(0.0));
  const Vec2 y = chart.to_chart(Vec2{0.6, 0.2});
  CHECK(y.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(y.y == doctest::Approx(0.2).epsilon(1e-12));
  const Vec3 z = chart.to_chart(Vec3{0.6, 0.2, 0.33});
  CHECK(z.t == doctest::Approx(0.33));
}

TEST_CASE("json round trip preserves the domain") {
  for (const DomainSpec& dom :
       {DomainSpec::unit_disk(), DomainSpec::rectangle(0.8, 1.3),
        DomainSpec::perturbed_disk(1.0, 0.008, 5)}) {
    const DomainSpec back = DomainSpec::from_json(dom.to_json());
    CHECK(back.kind() == dom.kind());
    CHECK(back.area() == doctest::Approx(dom.area()).epsilon(1e-12));
    CHECK(back.perimeter() ==
          doctest::Approx(dom.perimeter()).epsilon(1e-12));
  }
}

}  // TEST_SUITE
