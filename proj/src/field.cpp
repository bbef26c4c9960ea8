#include "nodalab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>

#include "nodalab/bessel.hpp"
#include "nodalab/eigensolver.hpp"

namespace nodalab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// MeshField

MeshField::MeshField(std::shared_ptr<const TriMesh> mesh,
                     std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  const TriMesh& m = *mesh_;
  if (static_cast<int>(values_.size()) != m.vertex_count())
    throw std::invalid_argument("MeshField: values/vertex size mismatch");
  // recover vertex gradients as area-weighted averages of cell gradients
  grads_.assign(m.vertex_count(), {0.0, 0.0});
  std::vector<double> wsum(m.vertex_count(), 0.0);
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Tri& tr = m.triangles()[t];
    const Vec2 a = m.vertices()[tr.v[0]];
    const Vec2 b = m.vertices()[tr.v[1]];
    const Vec2 c = m.vertices()[tr.v[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double fa = values_[tr.v[0]], fb = values_[tr.v[1]], fc = values_[tr.v[2]];
    // gradient of the linear interpolant
    const Vec2 g{((fb - fa) * (c.y - a.y) - (fc - fa) * (b.y - a.y)) / det,
                 ((fc - fa) * (b.x - a.x) - (fb - fa) * (c.x - a.x)) / det};
    const double area = 0.5 * std::abs(det);
    for (int v = 0; v < 3; ++v) {
      grads_[tr.v[v]] += area * g;
      wsum[tr.v[v]] += area;
    }
  }
  for (int v = 0; v < m.vertex_count(); ++v)
    if (wsum[v] > 0.0) grads_[v] = grads_[v] / wsum[v];
}

double MeshField::value(const Vec2& p) const {
  std::array<double, 3> bary;
  const int t = mesh_->locate(p, bary);
  const Tri& tr = mesh_->triangles()[t];
  return bary[0] * values_[tr.v[0]] + bary[1] * values_[tr.v[1]] +
         bary[2] * values_[tr.v[2]];
}

Vec2 MeshField::gradient(const Vec2& p) const {
  std::array<double, 3> bary;
  const int t = mesh_->locate(p, bary);
  const Tri& tr = mesh_->triangles()[t];
  return bary[0] * grads_[tr.v[0]] + bary[1] * grads_[tr.v[1]] +
         bary[2] * grads_[tr.v[2]];
}

// ---------------------------------------------------------------------------
// closed-form families

SolutionField square_mode(const DomainSpec& rect, int k, int m) {
  if (rect.kind() != DomainKind::Rectangle)
    throw std::invalid_argument("square_mode: rectangle domain required");
  if (k < 1 || m < 1) throw std::invalid_argument("square_mode: k, m >= 1");
  const double w = rect.width(), h = rect.height();
  const double ax = k * kPi / w, ay = m * kPi / h;
  const double mu = ax * ax + ay * ay;
  auto val = [ax, ay](Vec2 p) { return std::sin(ax * p.x) * std::sin(ay * p.y); };
  auto grad = [ax, ay](Vec2 p) {
    return Vec2{ax * std::cos(ax * p.x) * std::sin(ay * p.y),
                ay * std::sin(ax * p.x) * std::cos(ay * p.y)};
  };
  SolutionField f;
  f.u = std::make_shared<AnalyticField>(val, grad);
  f.domain = rect;
  f.V = Potential::constant(mu);
  f.mu = mu;
  f.lambda = mu;
  f.dirichlet = true;
  f.name = "square_mode(" + std::to_string(k) + "," + std::to_string(m) + ")";
  return f;
}

SolutionField disk_mode(const DomainSpec& disk, int nr, int m) {
  if (disk.kind() != DomainKind::UnitDisk)
    throw std::invalid_argument("disk_mode: unit disk domain required");
  if (nr < 1 || m < 0) throw std::invalid_argument("disk_mode: nr >= 1, m >= 0");
  const double R = disk.radius();
  const double j = bessel_zero(m, nr);
  const double scale = j / R;
  // normalize sup |u| = 1 over the disk
  double amp = 0.0;
  for (int i = 0; i <= 4096; ++i)
    amp = std::max(amp, std::abs(bessel_j(m, j * i / 4096.0)));
  const double norm = 1.0 / amp;
  auto val = [m, scale, norm](Vec2 p) {
    const double rho = p.norm();
    const double th = std::atan2(p.y, p.x);
    return norm * bessel_j(m, scale * rho) * std::cos(m * th);
  };
  auto grad = [m, scale, norm](Vec2 p) {
    const double rho = p.norm();
    if (rho < 1e-13) {
      if (m == 1) return Vec2{norm * 0.5 * scale, 0.0};
      return Vec2{0.0, 0.0};
    }
    const double th = std::atan2(p.y, p.x);
    const double jr = bessel_j(m, scale * rho);
    const double djr = bessel_j_prime(m, scale * rho) * scale;
    const double ur = djr * std::cos(m * th);
    const double ut = -m * jr * std::sin(m * th) / rho;
    const Vec2 er{p.x / rho, p.y / rho};
    const Vec2 et{-er.y, er.x};
    return Vec2{norm * (ur * er.x + ut * et.x), norm * (ur * er.y + ut * et.y)};
  };
  const double mu = scale * scale;
  SolutionField f;
  f.u = std::make_shared<AnalyticField>(val, grad);
  f.domain = disk;
  f.V = Potential::constant(mu);
  f.mu = mu;
  f.lambda = mu;
  f.dirichlet = true;
  f.name = "disk_mode(" + std::to_string(nr) + "," + std::to_string(m) + ")";
  return f;
}

SolutionField harmonic_poly(const DomainSpec& dom, int k) {
  if (k < 1) throw std::invalid_argument("harmonic_poly: k >= 1");
  const Vec2 c = dom.centroid();
  // normalize by the largest |x - c| over the boundary
  double rmax = 0.0;
  for (const auto& b : dom.boundary_samples())
    rmax = std::max(rmax, dist(b.p, c));
  const double norm = 1.0 / std::pow(rmax, k);
  auto val = [c, k, norm](Vec2 p) {
    const double r = dist(p, c);
    const double th = std::atan2(p.y - c.y, p.x - c.x);
    return norm * std::pow(r, k) * std::cos(k * th);
  };
  auto grad = [c, k, norm](Vec2 p) {
    // grad Re(z^k) = k (Re z^{k-1}, -Im z^{k-1})
    const double r = dist(p, c);
    if (r < 1e-300) {
      if (k == 1) return Vec2{norm, 0.0};
      return Vec2{0.0, 0.0};
    }
    const double th = std::atan2(p.y - c.y, p.x - c.x);
    const double rk = std::pow(r, k - 1);
    return Vec2{norm * k * rk * std::cos((k - 1) * th),
                -norm * k * rk * std::sin((k - 1) * th)};
  };
  SolutionField f;
  f.u = std::make_shared<AnalyticField>(val, grad);
  f.domain = dom;
  f.V = Potential::zero();
  f.mu = 0.0;
  f.lambda = 0.0;
  f.dirichlet = false;  // interior-ball use only
  f.name = "harmonic_poly(" + std::to_string(k) + ")";
  return f;
}

// ---------------------------------------------------------------------------
// discrete eigenpairs

namespace {

// P1 assembly of stiffness + potential and consistent mass on interior dofs
void assemble(const TriMesh& mesh, const Potential& W,
              Eigen::SparseMatrix<double>& K, Eigen::SparseMatrix<double>& M,
              std::vector<int>& dof) {
  const int nv = mesh.vertex_count();
  dof.assign(nv, -1);
  int nd = 0;
  for (int v = 0; v < nv; ++v)
    if (!mesh.on_boundary()[v]) dof[v] = nd++;

  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(mesh.triangle_count() * 9);
  tm.reserve(mesh.triangle_count() * 9);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Tri& tr = mesh.triangles()[t];
    const Vec2 a = mesh.vertices()[tr.v[0]];
    const Vec2 b = mesh.vertices()[tr.v[1]];
    const Vec2 c = mesh.vertices()[tr.v[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double area = 0.5 * std::abs(det);
    // hat gradients
    const Vec2 g[3] = {{(b.y - c.y) / det, (c.x - b.x) / det},
                       {(c.y - a.y) / det, (a.x - c.x) / det},
                       {(a.y - b.y) / det, (b.x - a.x) / det}};
    // edge midpoints for the degree-2 quadrature of the potential term
    const Vec2 mid[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
    // hat values at midpoints: phi_i(mid_j)
    const double phi[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
    for (int i = 0; i < 3; ++i) {
      const int di = dof[tr.v[i]];
      if (di < 0) continue;
      for (int jj = 0; jj < 3; ++jj) {
        const int dj = dof[tr.v[jj]];
        if (dj < 0) continue;
        double kij = area * g[i].dot(g[jj]);
        for (int q = 0; q < 3; ++q)
          kij += area / 3.0 * W.value(mid[q]) * phi[i][q] * phi[jj][q];
        const double mij = area / 12.0 * (i == jj ? 2.0 : 1.0);
        tk.emplace_back(di, dj, kij);
        tm.emplace_back(di, dj, mij);
      }
    }
  }
  K.resize(nd, nd);
  M.resize(nd, nd);
  K.setFromTriplets(tk.begin(), tk.end());
  M.setFromTriplets(tm.begin(), tm.end());
}

// five-point finite-difference residual of Delta u + (mu - W) u on the
// interior nodes of a rectangle tensor grid
double fd_residual(const TriMesh& mesh, const std::vector<double>& u,
                   const Potential& W, double mu, int nx, int ny, double hx,
                   double hy) {
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  double num = 0.0, den = 0.0;
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double lap =
          (u[vid(i + 1, j)] - 2.0 * u[vid(i, j)] + u[vid(i - 1, j)]) / (hx * hx) +
          (u[vid(i, j + 1)] - 2.0 * u[vid(i, j)] + u[vid(i, j - 1)]) / (hy * hy);
      const Vec2 p = mesh.vertices()[vid(i, j)];
      const double vu = (mu - W.value(p)) * u[vid(i, j)];
      num += (lap + vu) * (lap + vu);
      den += (mu * u[vid(i, j)]) * (mu * u[vid(i, j)]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

SolutionField solve_eigenpair(const DomainSpec& dom, const Potential& W,
                              int index, double mesh_h,
                              const EigenOptions& opts) {
  if (index < 1) throw std::invalid_argument("solve_eigenpair: index >= 1");
  if (mesh_h <= 0.0) throw std::invalid_argument("solve_eigenpair: mesh_h > 0");

  std::shared_ptr<TriMesh> mesh;
  int nx = 0, ny = 0;
  if (dom.kind() == DomainKind::Rectangle) {
    nx = std::max(2, static_cast<int>(std::lround(dom.width() / mesh_h)));
    ny = std::max(2, static_cast<int>(std::lround(dom.height() / mesh_h)));
    mesh = std::make_shared<TriMesh>(TriMesh::rectangle(dom.width(), dom.height(), nx, ny));
  } else {
    const int nr = std::max(4, static_cast<int>(std::lround(dom.radius() / mesh_h)));
    int ntheta = std::max(16, static_cast<int>(std::lround(2.0 * kPi * nr)));
    ntheta = 4 * ((ntheta + 3) / 4);
    mesh = std::make_shared<TriMesh>(TriMesh::disk(dom, nr, ntheta));
  }

  Eigen::SparseMatrix<double> K, M;
  std::vector<int> dof;
  assemble(*mesh, W, K, M, dof);

  const EigenResult eg = sym_generalized_eig(K, M, index, opts.seed, opts.tol,
                                             opts.max_iterations);
  const double mu = eg.values[index - 1];

  std::vector<double> u(mesh->vertex_count(), 0.0);
  for (int v = 0; v < mesh->vertex_count(); ++v)
    if (dof[v] >= 0) u[v] = eg.vectors(dof[v], index - 1);
  // normalize sup |u| = 1 with a deterministic sign
  int arg = 0;
  for (int v = 1; v < mesh->vertex_count(); ++v)
    if (std::abs(u[v]) > std::abs(u[arg])) arg = v;
  const double scale = 1.0 / u[arg];
  for (auto& x : u) x *= scale;

  SolutionField f;
  f.domain = dom;
  f.V = Potential::shifted(mu, W);
  f.mu = mu;
  f.lambda = f.V.lambda(dom);
  f.dirichlet = true;
  f.mesh_h = mesh->mesh_h();
  f.name = "eigenpair(" + std::to_string(index) + ")";
  if (dom.kind() == DomainKind::Rectangle)
    f.residual = fd_residual(*mesh, u, W, mu, nx, ny, dom.width() / nx,
                             dom.height() / ny);
  else
    f.residual = eg.residual_history.empty() ? 0.0 : eg.residual_history.back();
  f.u = std::make_shared<MeshField>(mesh, std::move(u));
  return f;
}

// ---------------------------------------------------------------------------
// deterministic sup scan

SupResult sup_norm_on_region(const Field& u, const DomainSpec& dom,
                             const Region2& region, double pitch) {
  auto score = [&u](const Vec2& p) { return std::abs(u.value(p)); };
  return sup_scan(dom, region, score, pitch);
}

SupResult sup_scan(const DomainSpec& dom, const Region2& region,
                   const std::function<double(const Vec2&)>& score,
                   double pitch) {
  if (region.r <= 0.0) throw std::invalid_argument("sup: radius must be > 0");
  if (pitch <= 0.0) pitch = region.r / 32.0;

  auto run = [&](double pt) {
    SupResult res;
    res.value = -1.0;
    auto consider = [&](const Vec2& p) {
      if (dist(p, region.center) > region.r) return;
      if (!dom.contains(p)) return;
      ++res.candidates;
      const double v = score(p);
      if (v > res.value) {
        res.value = v;
        res.argmax = p;
      }
    };
    // absolute area lattice (independent of the region, so nested regions
    // scan nested candidate sets)
    const long i0 = static_cast<long>(std::floor((region.center.x - region.r) / pt));
    const long i1 = static_cast<long>(std::ceil((region.center.x + region.r) / pt));
    const long j0 = static_cast<long>(std::floor((region.center.y - region.r) / pt));
    const long j1 = static_cast<long>(std::ceil((region.center.y + region.r) / pt));
    for (long j = j0; j <= j1; ++j)
      for (long i = i0; i <= i1; ++i)
        consider({i * pt, j * pt});
    // boundary arclength lattice from the cached equal-arclength samples
    const auto& bs = dom.boundary_samples();
    for (const auto& b : bs) consider(b.p);
    if (res.value < 0.0) {
      // degenerate tiny region: fall back to the center point
      res.value = score(region.center);
      res.argmax = region.center;
      res.candidates = 1;
      return res;
    }
    // fixed ascent trajectory seeded at the best candidate; probes ignore
    // the region (the path is region-independent) but only in-region points
    // are scored
    Vec2 cur = res.argmax;
    double step = 0.5 * pt;
    for (int it = 0; it < 60; ++it) {
      Vec2 best = cur;
      double bestv = dom.contains(cur) ? score(cur) : -1.0;
      for (int d = 0; d < 8; ++d) {
        const double ang = 2.0 * kPi * d / 8.0;
        const Vec2 q{cur.x + step * std::cos(ang), cur.y + step * std::sin(ang)};
        const double v = dom.contains(q) ? score(q) : -1.0;
        if (v > bestv) {
          bestv = v;
          best = q;
        }
      }
      if (best.x == cur.x && best.y == cur.y) {
        step *= 0.5;
        if (step < 1e-13 * region.r) break;
      } else {
        cur = best;
        if (dist(cur, region.center) <= region.r && bestv > res.value) {
          res.value = bestv;
          res.argmax = cur;
        }
      }
    }
    return res;
  };

  SupResult coarse = run(pitch);
  SupResult fine = run(0.5 * pitch);
  SupResult out = fine.value >= coarse.value ? fine : coarse;
  out.error = std::abs(fine.value - coarse.value) + 1e-13 * std::abs(out.value);
  out.candidates = coarse.candidates + fine.candidates;
  return out;
}

// ---------------------------------------------------------------------------
// smallness propagation

SmallnessReport smallness_propagation_experiment(const std::string& family,
                                                 int samples) {
  SmallnessReport rep;
  rep.family = family;
  const int grid = 160;
  auto half_sup = [&](const std::function<double(double, double)>& f) {
    double m = 0.0;
    for (int j = 0; j <= grid; ++j)
      for (int i = 0; i <= grid; ++i) {
        const double x = 0.25 + 0.5 * i / grid;
        const double y = 0.25 + 0.5 * j / grid;
        m = std::max(m, std::abs(f(x, y)));
      }
    return m;
  };
  auto face_data = [&](const std::function<double(double, double)>& f) {
    // sup |u| + sup |grad u| on the bottom face, by one-sided differences
    double m = 0.0;
    const double h = 1e-6;
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      const double v = std::abs(f(x, 0.0));
      const double gx = std::abs(f(std::min(x + h, 1.0), 0.0) - f(std::max(x - h, 0.0), 0.0)) /
                        (std::min(x + h, 1.0) - std::max(x - h, 0.0));
      const double gy = std::abs(f(x, h) - f(x, 0.0)) / h;
      m = std::max(m, v + std::hypot(gx, gy));
    }
    return m;
  };

  if (family == "zero") {
    rep.degenerate = true;
    rep.alpha = 0.0;
    return rep;
  }

  for (int s = 0; s < samples; ++s) {
    std::function<double(double, double)> f;
    if (family == "eps_scaled") {
      const double eps = std::pow(10.0, -1.0 - s);
      f = [eps](double x, double y) {
        return eps * std::sin(kPi * x) * std::sin(kPi * y);
      };
    } else if (family == "oscillatory") {
      const int k = 2 + s;
      f = [k](double x, double y) {
        return std::sin(k * kPi * x) * std::sinh(k * kPi * y) / std::sinh(k * kPi);
      };
    } else {
      throw std::invalid_argument("smallness: unknown family " + family);
    }
    rep.eps.push_back(face_data(f));
    rep.half_sup.push_back(half_sup(f));
  }

  // least-squares slope of log half_sup against log eps
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(rep.eps.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(rep.eps[i]);
    const double ly = std::log(std::max(rep.half_sup[i], 1e-300));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  rep.alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace nodalab
