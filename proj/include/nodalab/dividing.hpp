#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nodalab/nodal.hpp"

namespace nodalab {

// Doubling-index oracle for cubes: field mode wraps the chart machinery,
// synthetic modes supply closed-form values to exercise deep recursion.
struct MEval {
  double M = 0.0;
  double err = 0.0;
};
using MOracle = std::function<MEval(const ChartCube&, int generation)>;

MOracle halving_oracle(double M_root);             // M = M_root 2^{-gen}
MOracle stuck_oracle(double M_root);               // M never decays
MOracle field_oracle(const ChartField& cf, int grid_step = 4, int n_radii = 6);

// Subdivision bookkeeping.  A is odd; layers count 1..A from the top (the
// farthest slab from the flattened boundary).  Only the bottom
// 10*(kBaseDim+1) layers keep subdividing; at desk scale that margin
// exceeds every A we run, so descending_layers() == A and the whole cube
// recurses.
struct DividingConfig {
  int A = 3;
  double M0 = 1.5;
  double R = 0.1;                  // root cube side
  Vec3 origin{-0.05, 0.0, -0.05};  // root lo corner
  int max_generations = 6;
  bool keep_nodes = true;
  double gate_C = 1.0;  // exponent slot in the A0 gate A >= M0^{C M0}

  double kappa() const;      // 1 - A^{-n}/2
  int k0(double M_Q) const;  // floor(log2(M_Q / M0)) + 1, 0 when M_Q <= M0
  int descending_layers() const;  // min(A, 10 (n+1)), counted from the bottom
  bool gate_satisfied() const;
  void validate() const;  // throws on invalid A / M0 / R
};

// Per-layer minima of the A^n subcubes in each of the A layers of one
// subdivision step.  The doubling index of a cube is invariant under
// t-translation, so the A^n = A x A (y1, t) subcubes of a layer carry only
// A distinct values; we evaluate the central t-slab of each y1 column.
struct LayerRow {
  int layer = 0;  // 1 = top
  double min_M = 0.0;
  double min_err = 0.0;
  Vec3 argmin_lo;  // lo corner of the minimizing subcube
  bool pass = false;
};
struct DividingLemmaReport {
  double M_Q = 0.0;
  double M_err = 0.0;
  double threshold = 0.0;  // M_Q/2 + its error bar
  std::vector<LayerRow> layers;
  bool pass = false;
};
// Throws when M(Q) < M0: the lemma hypothesis fails and the check is not
// applicable.
DividingLemmaReport check_dividing_lemma(const MOracle& oracle,
                                         const ChartCube& Q,
                                         const DividingConfig& cfg);

// Recursion-tree node classes:
//  - Halved / Carried: subdivided further (M <= M_parent/2 or not);
//  - ChargedInterior: top-layer cube charged (M+1) side^n at its own
//    generation and dropped from the recursion (empty at desk-scale A);
//  - TerminalSmall / TerminalBoundary: M <= M0, charged A M0 side^n;
//  - Unresolved: hit max_generations while still above M0.
enum class CubeClass {
  Halved,
  Carried,
  ChargedInterior,
  TerminalSmall,
  TerminalBoundary,
  Unresolved,
};
const char* to_string(CubeClass c);

// The t direction is collapsed in storage: the doubling index is invariant
// under t-translation of a cube, so one stored node stands for t_mult
// congruent t-slabs and counts/charges multiply accordingly.
struct CubeNode {
  int gen = 0;
  std::int64_t ix = 0, iy = 0;  // base-plane A-adic indices at this generation
  std::int64_t t_mult = 1;      // congruent t-slabs represented
  int layer = 0;                // within the parent subdivision, 1..A
  int parent = -1;              // index into CubeTree::nodes, -1 for the root
  double M = 0.0;
  CubeClass cls = CubeClass::Carried;
};

struct GenerationRow {
  int generation = 0;
  std::int64_t processed = 0;  // cubes evaluated at this generation (t_mult in)
  std::int64_t charged_interior = 0;
  std::int64_t terminal_small = 0;
  std::int64_t terminal_boundary = 0;
  std::int64_t descended = 0;  // halved + carried
  std::int64_t unresolved = 0;
  double charge = 0.0;  // nodal-measure bound contribution
};

struct AccountingReport {
  std::vector<GenerationRow> rows;
  double recursion_total = 0.0;    // sum of per-generation charges
  double closed_form_total = 0.0;  // S1 + S2 series bound
  double series_S1 = 0.0;
  double series_S2 = 0.0;
  bool recursion_le_series = false;
  bool complete = false;  // no unresolved cubes
};

struct CubeTree {
  DividingConfig config;
  double M_root = 0.0;
  int k0 = 0;
  std::vector<CubeNode> nodes;  // empty when keep_nodes = false
  AccountingReport accounting;
};
CubeTree run_dividing(const MOracle& oracle, const DividingConfig& cfg);

// Closed-form series:
//   S1        = A R^n M kappa/(1-kappa)       (carried-mass generations)
//   S2_exact  = A^{n+2} R^n M0                (negative-binomial terminal sum)
//   S2_kappa  = A^2 R^n M kappa^{k0}/(1-kappa)
//   final     = R^n A^{n+2} M
// with the chain S2_exact <= S2_kappa checked numerically and
// (S1 + S2_exact)/final recorded as the fitted constant.
struct SeriesBound {
  double kappa = 0.0;
  int k0 = 0;
  double S1 = 0.0;
  double S2_exact = 0.0;
  double S2_kappa = 0.0;
  double total = 0.0;        // S1 + S2_exact
  double final_bound = 0.0;  // R^n A^{n+2} M
  double fitted_C = 0.0;     // total / final_bound
  bool chain_ok = false;
};
SeriesBound series_bound(const DividingConfig& cfg, double M_Q);
SeriesBound series_bound(const DividingConfig& cfg, double M_Q, double R);

// Worst-case per-layer class counts: c_k(j) = number of generation-k cubes
// in one layer line halved j times, with class k0 absorbing.  Recursion
// c_{k+1}(j) += (A^n - 1) c_k(j) for all j and c_{k+1}(j+1) += c_k(j) for
// j < k0; closed form c_k(j) = C(k, j) (A^n - 1)^{k-j} for every j
// including the absorbed class.  Throws std::overflow_error if a count
// leaves the uint64 range.
std::vector<std::vector<std::uint64_t>> worst_case_class_counts(int A, int k0,
                                                                int k_max);
std::uint64_t binomial_u64(int n, int k);

// Term-by-term comparison of the terminal tail against the geometric
// envelope: C(k, k0) (A^{-n}/2)^{k0} (1 - A^{-n})^{k-k0} vs kappa^k.
struct TailCheck {
  std::vector<double> lhs, rhs;  // index 0 <-> k = k0
  double max_ratio = 0.0;
  bool ok = false;
};
TailCheck counting_tail_check(int A, int k0, int k_max);

// Verified greedy covering of the collar band (boundary)_R x (-R/2, R/2) by
// straightened chart boxes of side R placed at equal arclength strides
// (per edge on rectangles, so no box straddles a corner).
struct CoveringReport {
  double R = 0.0;
  int count = 0;
  double beta = 0.0;      // stride fraction actually used
  bool covered = false;   // dense collar sample fully covered
  bool gate_ok = false;   // R <= r0/8 (recorded, not enforced)
  double fitted_C = 0.0;  // count * R^{n-1}
};
CoveringReport collar_covering_count(const DomainSpec& dom, double R,
                                     double beta = 0.8);

}  // namespace nodalab
