#include "nodalab/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace nodalab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TriMesh TriMesh::rectangle(double w, double h, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("mesh: nx, ny >= 2");
  TriMesh m;
  m.layout_ = Layout::Rect;
  m.w_ = w;
  m.hgt_ = h;
  m.nx_ = nx;
  m.ny_ = ny;
  m.h_ = std::max(w / nx, h / ny);
  m.verts_.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.verts_.push_back({w * i / nx, h * j / ny});
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // lower-left and upper-right triangles of the cell
      m.tris_.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
      m.tris_.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  m.boundary_.assign(m.verts_.size(), false);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || j == 0 || i == nx || j == ny) m.boundary_[vid(i, j)] = true;
  return m;
}

TriMesh TriMesh::disk(const DomainSpec& dom, int nr, int ntheta) {
  if (dom.kind() == DomainKind::Rectangle)
    throw std::invalid_argument("mesh: disk builder needs a disk kind");
  if (nr < 2 || ntheta < 8) throw std::invalid_argument("mesh: nr>=2, ntheta>=8");
  TriMesh m;
  m.layout_ = Layout::Polar;
  m.nr_ = nr;
  m.ntheta_ = ntheta;
  m.h_ = std::max(dom.radius() / nr, 2.0 * kPi * dom.radius() / ntheta);
  // vertex 0 at the center; ring i (1..nr) holds ntheta vertices
  m.verts_.push_back({0.0, 0.0});
  for (int i = 1; i <= nr; ++i) {
    const double f = static_cast<double>(i) / nr;
    for (int k = 0; k < ntheta; ++k) {
      const double th = 2.0 * kPi * k / ntheta;
      // scale the boundary curve radially so the outer ring lies on it
      const Vec2 bp = dom.boundary_point(th);
      m.verts_.push_back(f * bp);
    }
  }
  auto vid = [ntheta](int ring, int k) {
    return 1 + (ring - 1) * ntheta + (k % ntheta);
  };
  for (int k = 0; k < ntheta; ++k)
    m.tris_.push_back({0, vid(1, k), vid(1, k + 1)});
  for (int i = 1; i < nr; ++i) {
    for (int k = 0; k < ntheta; ++k) {
      m.tris_.push_back({vid(i, k), vid(i + 1, k), vid(i + 1, k + 1)});
      m.tris_.push_back({vid(i, k), vid(i + 1, k + 1), vid(i, k + 1)});
    }
  }
  m.boundary_.assign(m.verts_.size(), false);
  for (int k = 0; k < ntheta; ++k) m.boundary_[vid(nr, k)] = true;
  return m;
}

double TriMesh::area(int tri) const {
  const Tri& t = tris_[tri];
  const Vec2 a = verts_[t.v[0]], b = verts_[t.v[1]], c = verts_[t.v[2]];
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

bool TriMesh::try_bary(int tri, const Vec2& p, std::array<double, 3>& bary) const {
  const Tri& t = tris_[tri];
  const Vec2 a = verts_[t.v[0]], b = verts_[t.v[1]], c = verts_[t.v[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  const double l0 = 1.0 - l1 - l2;
  bary = {l0, l1, l2};
  const double tol = -1e-11;
  return l0 >= tol && l1 >= tol && l2 >= tol;
}

int TriMesh::locate(const Vec2& p, std::array<double, 3>& bary) const {
  if (layout_ == Layout::Rect) {
    int i = static_cast<int>(std::floor(p.x / w_ * nx_));
    int j = static_cast<int>(std::floor(p.y / hgt_ * ny_));
    i = std::min(std::max(i, 0), nx_ - 1);
    j = std::min(std::max(j, 0), ny_ - 1);
    const int base = 2 * (j * nx_ + i);
    if (try_bary(base, p, bary)) return base;
    try_bary(base + 1, p, bary);
    return base + 1;
  }
  // polar layout: ring band from an approximate inverse of the radial scaling
  double th = std::atan2(p.y, p.x);
  if (th < 0.0) th += 2.0 * kPi;
  int k = static_cast<int>(th / (2.0 * kPi) * ntheta_) % ntheta_;
  // radial fraction relative to the boundary radius along this direction
  const double rr = p.norm();
  const double seg = 2.0 * kPi / ntheta_;
  const double brad0 = verts_[1 + (nr_ - 1) * ntheta_ + k].norm();
  const double frac = brad0 > 0 ? rr / brad0 : 0.0;
  int ring = static_cast<int>(std::floor(frac * nr_));
  ring = std::min(std::max(ring, 0), nr_ - 1);
  (void)seg;
  // candidate triangles in the (ring, ring+1) band near sector k, with a
  // small search over neighbors to absorb the curve scaling
  for (int dr = 0; dr <= 2; ++dr) {
    for (int sr = -1; sr <= 1; sr += 2) {
      const int r0 = ring + (sr < 0 ? -dr : dr);
      if (r0 < 0 || r0 >= nr_) continue;
      for (int dk = -2; dk <= 2; ++dk) {
        int kk = (k + dk + ntheta_) % ntheta_;
        if (r0 == 0) {
          if (try_bary(kk, p, bary)) return kk;
        } else {
          const int base = ntheta_ + 2 * ((r0 - 1) * ntheta_ + kk);
          if (try_bary(base, p, bary)) return base;
          if (try_bary(base + 1, p, bary)) return base + 1;
        }
      }
      if (dr == 0) break;  // r0 identical for both signs
    }
  }
  // fall back to the nearest boundary-band triangle
  const int base = ntheta_ + 2 * ((std::min(ring, nr_ - 2)) * ntheta_ + k);
  try_bary(base, p, bary);
  return base;
}

}  // namespace nodalab
