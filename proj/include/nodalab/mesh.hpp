#pragma once

#include <array>
#include <vector>

#include "nodalab/geometry.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// P1 triangulation with O(1) point location.  Two structured builders:
//  - rectangle: uniform (nx+1)*(ny+1) grid, each cell split along its
//    up-diagonal into two triangles;
//  - disk kinds: polar tensor grid (center vertex + nr rings of ntheta
//    vertices), annulus quads split into two triangles, boundary vertices
//    exactly on the curve.
struct Tri {
  int v[3];
};

class TriMesh {
 public:
  static TriMesh rectangle(double w, double h, int nx, int ny);
  static TriMesh disk(const DomainSpec& dom, int nr, int ntheta);

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int triangle_count() const { return static_cast<int>(tris_.size()); }
  const std::vector<Vec2>& vertices() const { return verts_; }
  const std::vector<Tri>& triangles() const { return tris_; }
  const std::vector<bool>& on_boundary() const { return boundary_; }
  double mesh_h() const { return h_; }
  double area(int tri) const;

  // triangle containing p (clamped to the nearest cell for points marginally
  // outside), plus barycentric coordinates
  int locate(const Vec2& p, std::array<double, 3>& bary) const;

 private:
  enum class Layout { Rect, Polar } layout_ = Layout::Rect;
  std::vector<Vec2> verts_;
  std::vector<Tri> tris_;
  std::vector<bool> boundary_;
  double h_ = 0.0;
  // rect layout
  double w_ = 0, hgt_ = 0;
  int nx_ = 0, ny_ = 0;
  // polar layout
  int nr_ = 0, ntheta_ = 0;

  bool try_bary(int tri, const Vec2& p, std::array<double, 3>& bary) const;
};

}  // namespace nodalab
