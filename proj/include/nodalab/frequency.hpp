#pragma once

#include <vector>

#include "nodalab/lifted.hpp"

namespace nodalab {

// Frequency pair N = I/H at a slice center z0 = (x0, 0).  The consensus I is
// the first-order (integration-by-parts) form; the defect form is the
// cross-check and their gap feeds the error bar.
struct FrequencyEval {
  Vec3 center;
  double r = 0.0;
  double H = 0.0;
  double I_def = 0.0;
  double I_ibp = 0.0;
  double I = 0.0;                 // consensus (= I_ibp)
  double N = 0.0;                 // I / H
  double N_def = 0.0;             // I_def / H
  double quadrature_error = 0.0;  // error bar on N
  double ibp_gap = 0.0;           // |I_def - I_ibp| / max|I|
};
FrequencyEval frequency_eval(const SolutionField& f, const Vec3& z0, double r);

// Per-radius admissibility: the star-shaped certificate is the hypothesis the
// monotonicity lemma actually needs; the quadratic distance gate
// dist(x0, boundary) >= C0 r^2 is the sufficient condition and is recorded
// alongside.  Fully interior balls are trivially admissible.
struct RadiusEntry {
  FrequencyEval eval;
  bool admissible = false;
  bool distance_gate = false;
  double star_min_dot = 0.0;
};
struct RadiusProfile {
  Vec3 center;
  std::vector<double> radii;
  std::vector<RadiusEntry> entries;
};
RadiusProfile frequency_profile(const SolutionField& f, const Vec2& x0,
                                const std::vector<double>& radii);

// N(r_{i+1}) >= N(r_i) - combined error over consecutive admissible radii.
struct MonotonicityReport {
  int checked = 0;
  int violations = 0;
  double worst_gap = 0.0;  // most negative slack seen (0 when clean)
  bool ok = false;
};
MonotonicityReport check_monotonicity(const RadiusProfile& profile,
                                      double extra_slack = 0.0);

// Two-sided doubling of H in log2 space:
//   (N(r1)+3) log2(r2/r1)  <=  log2 H(r2)/H(r1)  <=  (N(r2)+3) log2(r2/r1).
struct DoublingReport {
  double r1 = 0.0, r2 = 0.0;
  double H1 = 0.0, H2 = 0.0;
  double log_ratio = 0.0;
  double bound_lo = 0.0, bound_hi = 0.0;
  double slack_lo = 0.0, slack_hi = 0.0;
  double error = 0.0;  // combined bar in log2 space
  bool ok = false;
};
DoublingReport check_doubling(const SolutionField& f, const Vec2& x0, double r1,
                              double r2);

// Smallest C with N(z1, rho) <= (1 + C a/r) N(z0, r) + C a/r, a = |z1 - z0|.
struct ChangingCenterReport {
  double a = 0.0, r = 0.0, rho = 0.0;
  double N0 = 0.0, N1 = 0.0;
  double fitted_C = 0.0;
  bool reduces_to_monotonicity = false;  // a = 0 case
};
ChangingCenterReport check_changing_center(const SolutionField& f,
                                           const Vec2& x0, const Vec2& x1,
                                           double r, double rho);

}  // namespace nodalab
