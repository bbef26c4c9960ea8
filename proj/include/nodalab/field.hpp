#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nodalab/geometry.hpp"
#include "nodalab/mesh.hpp"
#include "nodalab/potential.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// Scalar field with gradient; closed-form families and P1 mesh fields both
// implement this so the integral/sup machinery is agnostic to the source.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(const Vec2& p) const = 0;
  virtual Vec2 gradient(const Vec2& p) const = 0;
};

// Closed-form field backed by callables (used by tests and experiments).
class AnalyticField : public Field {
 public:
  AnalyticField(std::function<double(Vec2)> v, std::function<Vec2(Vec2)> g)
      : v_(std::move(v)), g_(std::move(g)) {}
  double value(const Vec2& p) const override { return v_(p); }
  Vec2 gradient(const Vec2& p) const override { return g_(p); }

 private:
  std::function<double(Vec2)> v_;
  std::function<Vec2(Vec2)> g_;
};

// P1 interpolant on a triangulation with vertex-averaged gradient recovery.
class MeshField : public Field {
 public:
  MeshField(std::shared_ptr<const TriMesh> mesh, std::vector<double> values);
  double value(const Vec2& p) const override;
  Vec2 gradient(const Vec2& p) const override;
  const TriMesh& mesh() const { return *mesh_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Vec2>& vertex_gradients() const { return grads_; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  std::vector<double> values_;
  std::vector<Vec2> grads_;  // recovered (area-averaged cell gradients)
};

// A solution of Delta u + V u = 0 on the domain, normalized to sup |u| = 1.
// mu is the eigenvalue of -Delta u + W u = mu u that produced it (V = mu - W);
// harmonic families carry V = 0 and ignore the boundary condition.
struct SolutionField {
  std::shared_ptr<const Field> u;
  DomainSpec domain;
  Potential V;
  double mu = 0.0;
  double lambda = 0.0;       // ||V||_inf + ||grad V||_inf
  bool dirichlet = true;     // u = 0 on the boundary holds exactly
  double mesh_h = 0.0;       // 0 for closed forms
  double residual = 0.0;     // discrete residual of mesh fields
  std::string name;

  double value(const Vec2& p) const { return u->value(p); }
  Vec2 gradient(const Vec2& p) const { return u->gradient(p); }
};

// Closed-form solution families.
//  square_mode(k,m):   sin(k pi x / w) sin(m pi y / h), V = mu (constant)
//  disk_mode(nr,m):    J_m(j_{m,nr} rho / R) cos(m theta), V = mu
//  harmonic_poly(k):   Re((x - c) + i (y - c))^k about the centroid, V = 0
SolutionField square_mode(const DomainSpec& rect, int k, int m);
SolutionField disk_mode(const DomainSpec& disk, int nr, int m);
SolutionField harmonic_poly(const DomainSpec& dom, int k);

// Discrete eigenpair of -Delta u + W u = mu u with Dirichlet data, 1-based
// index, on a structured mesh of pitch about mesh_h.  The returned field has
// V = mu - W and sup |u| = 1 with a deterministic sign.
struct EigenOptions {
  unsigned seed = 12345;
  double tol = 1e-10;
  int max_iterations = 400;
};
SolutionField solve_eigenpair(const DomainSpec& dom, const Potential& W,
                              int index, double mesh_h,
                              const EigenOptions& opts = {});

// Ball-with-domain-clip region used by sup scans.
struct Region2 {
  Vec2 center;
  double r = 0.0;
};

// Deterministic sup of |u| over B_r(x0) ∩ Ω.  Candidates come from global
// lattices (area + boundary arclength) intersected with the region plus
// fixed ascent trajectories, so A ⊆ B implies result(A) <= result(B) when
// called with the same pitch.
struct SupResult {
  double value = 0.0;
  double error = 0.0;
  Vec2 argmax;
  int candidates = 0;
};
SupResult sup_norm_on_region(const Field& u, const DomainSpec& dom,
                             const Region2& region, double pitch = 0.0);

// Same engine for an arbitrary nonnegative score (the lifted sup reuses it
// with |u(x)| e^{sqrt(lambda) tau(x)}).
SupResult sup_scan(const DomainSpec& dom, const Region2& region,
                   const std::function<double(const Vec2&)>& score,
                   double pitch = 0.0);

// Smallness-propagation experiment: families of functions on the unit square
// Q with |u| <= 1 whose Cauchy data on the bottom face F shrink; fits
// sup_{(1/2)Q} |u| ~ eps^alpha and reports the table.
struct SmallnessReport {
  std::string family;
  std::vector<double> eps;       // sup_F |u| + sup_F |grad u|
  std::vector<double> half_sup;  // sup over the centered half cube
  double alpha = 0.0;            // fitted slope in log-log
  bool degenerate = false;       // identically-zero family
};
SmallnessReport smallness_propagation_experiment(const std::string& family,
                                                 int samples = 6);

}  // namespace nodalab
