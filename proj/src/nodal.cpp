#include "nodalab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nodalab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateFrac = 1e-12;  // of the global value scale

struct MarchAccum {
  std::vector<NodalSegment> segments;
  int degenerate = 0;
};

// Zero segment of the linear interpolant on one triangle.  The sign map
// sends exact zeros to +, so every cell yields zero or one segment and
// adjacent cells agree on shared edges.
void march_triangle(const Vec2& pa, const Vec2& pb, const Vec2& pc, double va,
                    double vb, double vc, double scale, MarchAccum& acc) {
  // Snap sub-resolution values to exact zero: evaluation roundoff at a
  // Dirichlet boundary is +-1e-16 with random sign, and without the snap it
  // seeds noise crossings along boundary edges.
  if (std::abs(va) <= kDegenerateFrac * scale) va = 0.0;
  if (std::abs(vb) <= kDegenerateFrac * scale) vb = 0.0;
  if (std::abs(vc) <= kDegenerateFrac * scale) vc = 0.0;
  if (va == 0.0 && vb == 0.0 && vc == 0.0) {
    ++acc.degenerate;
    return;
  }
  const bool sa = va >= 0.0, sb = vb >= 0.0, sc = vc >= 0.0;
  if (sa == sb && sb == sc) return;
  // lone vertex whose sign differs from the other two
  Vec2 p[3] = {pa, pb, pc};
  double v[3] = {va, vb, vc};
  int lone = sa == sb ? 2 : (sa == sc ? 1 : 0);
  const int o1 = (lone + 1) % 3, o2 = (lone + 2) % 3;
  const double t1 = v[lone] / (v[lone] - v[o1]);
  const double t2 = v[lone] / (v[lone] - v[o2]);
  const Vec2 q1 = p[lone] + t1 * (p[o1] - p[lone]);
  const Vec2 q2 = p[lone] + t2 * (p[o2] - p[lone]);
  if (dist(q1, q2) > 0.0) acc.segments.push_back({q1, q2});
}

// March every triangle of a mesh carrying vertex values.
MarchAccum march_mesh(const TriMesh& mesh, const std::vector<double>& vals) {
  double scale = 0.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  MarchAccum acc;
  if (scale == 0.0) {
    acc.degenerate = mesh.triangle_count();
    return acc;
  }
  for (const Tri& t : mesh.triangles())
    march_triangle(mesh.vertices()[t.v[0]], mesh.vertices()[t.v[1]],
                   mesh.vertices()[t.v[2]], vals[t.v[0]], vals[t.v[1]],
                   vals[t.v[2]], scale, acc);
  return acc;
}

// March a shifted rectangle lattice (used for cube windows).
MarchAccum march_rect(const std::function<double(double, double)>& val,
                      double x0, double x1, double y0, double y1, int nx,
                      int ny) {
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  std::vector<double> v((nx + 1) * (ny + 1));
  double scale = 0.0;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      v[j * (nx + 1) + i] = val(x0 + i * hx, y0 + j * hy);
      scale = std::max(scale, std::abs(v[j * (nx + 1) + i]));
    }
  MarchAccum acc;
  if (scale == 0.0) {
    acc.degenerate = 2 * nx * ny;
    return acc;
  }
  auto at = [&](int i, int j) { return v[j * (nx + 1) + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 p00{x0 + i * hx, y0 + j * hy};
      const Vec2 p10{x0 + (i + 1) * hx, y0 + j * hy};
      const Vec2 p01{x0 + i * hx, y0 + (j + 1) * hy};
      const Vec2 p11{x0 + (i + 1) * hx, y0 + (j + 1) * hy};
      march_triangle(p00, p10, p11, at(i, j), at(i + 1, j), at(i + 1, j + 1),
                     scale, acc);
      march_triangle(p00, p11, p01, at(i, j), at(i + 1, j + 1), at(i, j + 1),
                     scale, acc);
    }
  return acc;
}

NodalSet finish(MarchAccum&& acc, double h) {
  NodalSet set;
  set.segments = std::move(acc.segments);
  set.degenerate_cells = acc.degenerate;
  set.mesh_h = h;
  for (const auto& s : set.segments) set.total_length += s.length();
  return set;
}
}  // namespace

double NodalSegment::length() const { return dist(a, b); }
Vec2 NodalSegment::mid() const { return 0.5 * (a + b); }

NodalSet extract_nodal(const Field& u, const DomainSpec& dom, double h) {
  if (h <= 0.0) throw std::invalid_argument("extract_nodal: h must be > 0");
  std::shared_ptr<TriMesh> mesh;
  if (dom.kind() == DomainKind::Rectangle) {
    const int nx = std::max(2, static_cast<int>(std::lround(dom.width() / h)));
    const int ny = std::max(2, static_cast<int>(std::lround(dom.height() / h)));
    mesh = std::make_shared<TriMesh>(
        TriMesh::rectangle(dom.width(), dom.height(), nx, ny));
  } else {
    const int nr = std::max(4, static_cast<int>(std::lround(dom.radius() / h)));
    int ntheta = std::max(16, static_cast<int>(std::lround(2.0 * kPi * nr)));
    ntheta = 4 * ((ntheta + 3) / 4);
    mesh = std::make_shared<TriMesh>(TriMesh::disk(dom, nr, ntheta));
  }
  std::vector<double> vals(mesh->vertex_count());
  for (int i = 0; i < mesh->vertex_count(); ++i)
    vals[i] = u.value(mesh->vertices()[i]);
  MarchAccum acc = march_mesh(*mesh, vals);
  // The target is the interior nodal set.  Dirichlet data makes every
  // boundary mesh edge an exact zero edge, and the march dutifully emits
  // those as segments; drop segments with both endpoints on the boundary.
  // Interior lines keep at least one endpoint strictly inside (the
  // tolerance covers the polyline resolution of the numeric distance).
  constexpr double kBoundaryDrop = 1e-6;
  std::vector<NodalSegment> keep;
  keep.reserve(acc.segments.size());
  for (const NodalSegment& s : acc.segments)
    if (dom.boundary_distance(s.a) > kBoundaryDrop ||
        dom.boundary_distance(s.b) > kBoundaryDrop)
      keep.push_back(s);
  acc.segments = std::move(keep);
  return finish(std::move(acc), h);
}

NodalSet extract_nodal(const SolutionField& f, double h) {
  return extract_nodal(*f.u, f.domain, h);
}

InteriorBoundReport interior_bound_study(const std::vector<SolutionField>& fam,
                                         double r, double mesh_h) {
  if (r <= 0.0) throw std::invalid_argument("interior_bound_study: r > 0");
  InteriorBoundReport rep;
  rep.r = r;
  for (const auto& f : fam) {
    const NodalSet set = extract_nodal(f, mesh_h);
    InteriorBoundRow row;
    row.name = f.name;
    row.lambda = f.lambda;
    for (const auto& s : set.segments)
      if (f.domain.boundary_distance(s.mid()) > r)
        row.interior_length += s.length();
    row.ratio = row.interior_length * r / (1.0 + std::sqrt(f.lambda));
    rep.fitted_C = std::max(rep.fitted_C, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

CollarReport collar_decomposition_study(const SolutionField& f, double mesh_h,
                                        double R0) {
  CollarReport rep;
  const CollarParams cp = collar_params(f.domain);
  const double grad = f.V.grad_sup_norm(f.domain);
  rep.R_requested = grad > 1e-12 ? R0 / std::sqrt(grad)
                                 : std::numeric_limits<double>::infinity();
  rep.R = std::min(rep.R_requested, cp.r0 / 8.0);
  const double deep = 0.5 * cp.r0;  // everything beyond is interior

  // dyadic bands (2^j - 1) R < dist <= (2^{j+1} - 1) R clipped at deep
  for (int j = 0;; ++j) {
    CollarBand band;
    band.j = j;
    band.d_in = (std::pow(2.0, j) - 1.0) * rep.R;
    band.d_out = std::min((std::pow(2.0, j + 1) - 1.0) * rep.R, deep);
    rep.bands.push_back(band);
    if (band.d_out >= deep) break;
  }

  const NodalSet set = extract_nodal(f, mesh_h);
  rep.total_length = set.total_length;
  for (const auto& s : set.segments) {
    const double d = f.domain.boundary_distance(s.mid());
    if (d > deep) {
      rep.interior_length += s.length();
      continue;
    }
    for (auto& band : rep.bands)
      if (d > band.d_in && d <= band.d_out) {
        band.length += s.length();
        break;
      }
  }
  const double sqr = std::sqrt(f.lambda) + 1.0;
  for (auto& band : rep.bands) {
    band.ratio = band.length / sqr;
    rep.band_ratio_max = std::max(rep.band_ratio_max, band.ratio);
    rep.collar_length += band.length;
  }
  const double denom = (1.0 + std::log(grad + 1.0)) * sqr;
  rep.theorem_ratio = rep.collar_length / denom;
  rep.total_ratio = rep.total_length / denom;
  return rep;
}

BoundaryCubeReport boundary_cube_nodal(const ChartField& cf,
                                       const ChartCube& cube, double mesh_h,
                                       double gate_exponent) {
  if (std::abs(cube.lo.y) > 1e-9 * cube.side())
    throw std::invalid_argument(
        "boundary_cube_nodal: cube must sit on the flattened boundary");
  BoundaryCubeReport rep;
  rep.cube = cube;
  const CubeDoubling cd = cube_doubling(cf, cube);
  rep.M_Q = cd.M_Q;
  rep.M_err = cd.M_err;

  const double side = cube.side();
  const int n = std::max(8, static_cast<int>(std::lround(side / mesh_h)));
  MarchAccum acc = march_rect(
      [&](double y1, double y2) { return cf.value(y1, y2); }, cube.lo.x,
      cube.hi.x, 0.0, cube.hi.y, n, n);
  rep.degenerate_cells = acc.degenerate;
  for (const auto& s : acc.segments) {
    // the Γ face is handled separately; drop interpolant pieces lying on it
    if (s.mid().y > 1e-12 * side) rep.length_in_cube += s.length();
  }
  rep.length_union = 2.0 * rep.length_in_cube;
  rep.face_length = side;
  rep.measure3 = rep.length_union * (cube.hi.t - cube.lo.t);
  rep.ratio = rep.measure3 / (std::max(rep.M_Q, 1e-9) * side * side);

  const double grad = cf.base().V.grad_sup_norm(cf.base().domain);
  const double m = std::max(rep.M_Q, 1.0 + 1e-9);
  rep.gate_side_max = grad > 1e-12
                          ? std::pow(m, -gate_exponent * m) / std::sqrt(grad)
                          : std::numeric_limits<double>::infinity();
  rep.gate_ok = side <= rep.gate_side_max;

  // construction check of the odd extension on a deterministic sample
  for (int i = 0; i < 48; ++i) {
    const double y1 = cube.lo.x + side * (i % 7) / 6.0;
    const double y2 = 1e-3 + (cube.hi.y - 1e-3) * (i % 11) / 10.0;
    if (!cf.valid(y1, y2) || !cf.valid(y1, -y2)) continue;
    rep.odd_extension_gap = std::max(
        rep.odd_extension_gap, std::abs(cf.value(y1, -y2) + cf.value(y1, y2)));
  }
  return rep;
}

InteriorCubeReport interior_cube_nodal(const SolutionField& f,
                                       const ChartCube& cube, double mesh_h) {
  InteriorCubeReport rep;
  rep.cube = cube;
  const CubeDoubling cd = cube_doubling_interior(f, cube);
  rep.M_Q = cd.M_Q;

  const double side = cube.side();
  const int n = std::max(8, static_cast<int>(std::lround(side / mesh_h)));
  MarchAccum acc =
      march_rect([&](double x, double y) { return f.value({x, y}); },
                 cube.lo.x, cube.hi.x, cube.lo.y, cube.hi.y, n, n);
  for (const auto& s : acc.segments) rep.length_in_cube += s.length();
  rep.measure3 = rep.length_in_cube * (cube.hi.t - cube.lo.t);
  rep.ratio = rep.measure3 / (std::max(rep.M_Q, 1e-9) * side * side);

  double dmin = std::numeric_limits<double>::infinity();
  const Vec2 corners[4] = {{cube.lo.x, cube.lo.y},
                           {cube.hi.x, cube.lo.y},
                           {cube.lo.x, cube.hi.y},
                           {cube.hi.x, cube.hi.y}};
  for (const Vec2& c : corners)
    dmin = std::min(dmin, f.domain.boundary_distance(c));
  rep.boundary_gap = dmin - 10.0 * (kBaseDim + 1) * side;
  return rep;
}

}  // namespace nodalab
