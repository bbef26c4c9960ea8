#pragma once

#include <string>
#include <vector>

#include "nodalab/doubling.hpp"

namespace nodalab {

// One zero-crossing segment of the linear interpolant inside a mesh cell.
struct NodalSegment {
  Vec2 a, b;
  double length() const;
  Vec2 mid() const;
};

// The traced zero set of a field sampled on a structured mesh of pitch h.
// Cells where the field vanishes identically are counted and excluded.
struct NodalSet {
  std::vector<NodalSegment> segments;
  double total_length = 0.0;
  int degenerate_cells = 0;
  double mesh_h = 0.0;
};
NodalSet extract_nodal(const Field& u, const DomainSpec& dom, double h);
NodalSet extract_nodal(const SolutionField& f, double h);

// Interior bound: length of the nodal set in Omega_r = {dist > r} against
// (C/r)(1 + sqrt(lambda)); the fitted C is the max of length * r / (1+sqrt)
// over the family.
struct InteriorBoundRow {
  std::string name;
  double lambda = 0.0;
  double interior_length = 0.0;
  double ratio = 0.0;
};
struct InteriorBoundReport {
  double r = 0.0;
  std::vector<InteriorBoundRow> rows;
  double fitted_C = 0.0;
};
InteriorBoundReport interior_bound_study(const std::vector<SolutionField>& fam,
                                         double r, double mesh_h);

// Collar decomposition into dyadic distance bands (2^j - 1) R < dist <=
// (2^{j+1} - 1) R, clipped at r0/2; everything deeper is interior.  The
// theorem-shaped denominators use the natural logarithm.
struct CollarBand {
  int j = 0;
  double d_in = 0.0, d_out = 0.0;
  double length = 0.0;
  double ratio = 0.0;  // length / (sqrt(lambda) + 1)
};
struct CollarReport {
  double R = 0.0;            // band width after clamping
  double R_requested = 0.0;  // R0 * grad_sup^{-1/2} before clamping
  std::vector<CollarBand> bands;
  double collar_length = 0.0;
  double interior_length = 0.0;
  double total_length = 0.0;
  double band_ratio_max = 0.0;
  double theorem_ratio = 0.0;  // collar / ((1+log(grad+1)) (sqrt(lambda)+1))
  double total_ratio = 0.0;    // total  / same
};
CollarReport collar_decomposition_study(const SolutionField& f, double mesh_h,
                                        double R0 = 1.0);

// Nodal measure of the odd-extended straightened field inside a boundary
// cube (one face on the flattened boundary).  Lengths are base-plane; the
// 3D measure multiplies by the t-extent since the zero set is a cylinder in
// t.  The flattened face itself is nodal for the extension and is reported
// separately, not counted in the lengths.
struct BoundaryCubeReport {
  ChartCube cube;
  double M_Q = 0.0;
  double M_err = 0.0;
  double length_in_cube = 0.0;  // base nodal length in Q (y2 > 0)
  double length_union = 0.0;    // 2x by odd symmetry (Q ∪ Q')
  double face_length = 0.0;     // |Γ ∩ Q| (always nodal for the extension)
  double measure3 = 0.0;        // length_union × t-extent
  double ratio = 0.0;           // measure3 / (M_Q side^2)
  bool gate_ok = false;         // side <= grad^{-1/2} M^{-c M}
  double gate_side_max = 0.0;
  int degenerate_cells = 0;
  double odd_extension_gap = 0.0;  // sampled |u~(y1,-y2) + u~(y1,y2)|
};
BoundaryCubeReport boundary_cube_nodal(const ChartField& cf,
                                       const ChartCube& cube, double mesh_h,
                                       double gate_exponent = 1.0);

// Interior-cube counterpart in physical coordinates (no reflection).
struct InteriorCubeReport {
  ChartCube cube;
  double M_Q = 0.0;
  double length_in_cube = 0.0;
  double measure3 = 0.0;
  double ratio = 0.0;
  double boundary_gap = 0.0;  // dist(cube, boundary) - 10 (n+1) side
};
InteriorCubeReport interior_cube_nodal(const SolutionField& f,
                                       const ChartCube& cube, double mesh_h);

}  // namespace nodalab
