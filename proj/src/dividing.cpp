#include "nodalab/dividing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nodalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("class count exceeds uint64");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("class count exceeds uint64");
  return r;
}

}  // namespace

MOracle halving_oracle(double M_root) {
  return [M_root](const ChartCube&, int gen) {
    return MEval{M_root * std::pow(2.0, -gen), 0.0};
  };
}

MOracle stuck_oracle(double M_root) {
  return [M_root](const ChartCube&, int) { return MEval{M_root, 0.0}; };
}

MOracle field_oracle(const ChartField& cf, int grid_step, int n_radii) {
  return [f = &cf, grid_step, n_radii](const ChartCube& q, int) {
    const CubeDoubling cd = cube_doubling(*f, q, grid_step, n_radii);
    return MEval{cd.M_Q, cd.M_err};
  };
}

double DividingConfig::kappa() const {
  return 1.0 - 0.5 * std::pow(double(A), -kBaseDim);
}

int DividingConfig::k0(double M_Q) const {
  if (!(M_Q > M0)) return 0;
  return int(std::floor(std::log2(M_Q / M0))) + 1;
}

int DividingConfig::descending_layers() const {
  return std::min(A, 10 * (kBaseDim + 1));
}

bool DividingConfig::gate_satisfied() const {
  return double(A) + 1e-12 >= std::pow(M0, gate_C * M0);
}

void DividingConfig::validate() const {
  if (A < 3 || A % 2 == 0)
    throw std::invalid_argument("DividingConfig: A must be odd and >= 3");
  if (!(M0 > 1.0))
    throw std::invalid_argument("DividingConfig: M0 must exceed 1");
  if (!(R > 0.0) || !std::isfinite(R))
    throw std::invalid_argument("DividingConfig: R must be positive");
  if (max_generations < 0 || max_generations > 18)
    throw std::invalid_argument("DividingConfig: max_generations out of range");
  if (!(gate_C >= 0.0))
    throw std::invalid_argument("DividingConfig: gate_C must be >= 0");
}

DividingLemmaReport check_dividing_lemma(const MOracle& oracle,
                                         const ChartCube& Q,
                                         const DividingConfig& cfg) {
  cfg.validate();
  const int A = cfg.A;
  const MEval root = oracle(Q, 0);
  if (root.M < cfg.M0)
    throw std::runtime_error(
        "check_dividing_lemma: M(Q) < M0, lemma hypothesis fails");

  DividingLemmaReport rep;
  rep.M_Q = root.M;
  rep.M_err = root.err;
  rep.threshold = 0.5 * (root.M + root.err);

  const double s = Q.side() / A;
  const double t_lo = 0.5 * (Q.lo.t + Q.hi.t) - 0.5 * s;
  rep.pass = true;
  for (int j = A - 1; j >= 0; --j) {  // layer 1 (top) first
    LayerRow row;
    row.layer = A - j;
    row.min_M = kInf;
    for (int i = 0; i < A; ++i) {
      ChartCube q;
      q.lo = {Q.lo.x + s * i, Q.lo.y + s * j, t_lo};
      q.hi = {q.lo.x + s, q.lo.y + s, t_lo + s};
      const MEval e = oracle(q, 1);
      if (e.M < row.min_M) {
        row.min_M = e.M;
        row.min_err = e.err;
        row.argmin_lo = q.lo;
      }
    }
    row.pass = row.min_M <= rep.threshold + row.min_err;
    rep.pass = rep.pass && row.pass;
    rep.layers.push_back(row);
  }
  return rep;
}

const char* to_string(CubeClass c) {
  switch (c) {
    case CubeClass::Halved: return "halved";
    case CubeClass::Carried: return "carried";
    case CubeClass::ChargedInterior: return "charged_interior";
    case CubeClass::TerminalSmall: return "terminal_small";
    case CubeClass::TerminalBoundary: return "terminal_boundary";
    case CubeClass::Unresolved: return "unresolved";
  }
  return "?";
}

CubeTree run_dividing(const MOracle& oracle, const DividingConfig& cfg) {
  cfg.validate();
  const int A = cfg.A;
  const int desc = cfg.descending_layers();

  struct Item {
    std::int64_t ix = 0, iy = 0, t_mult = 1;
    int layer = 0, parent = -1, node = -1;
    double M = 0.0, err = 0.0, parent_M = kInf;
  };

  auto cube_at = [&cfg, A](int gen, std::int64_t ix, std::int64_t iy) {
    const double side = cfg.R / std::pow(double(A), gen);
    ChartCube q;
    q.lo = {cfg.origin.x + side * ix, cfg.origin.y + side * iy,
            cfg.origin.t + 0.5 * (cfg.R - side)};
    q.hi = {q.lo.x + side, q.lo.y + side, q.lo.t + side};
    return q;
  };

  CubeTree tree;
  tree.config = cfg;

  const MEval root_eval = oracle(cube_at(0, 0, 0), 0);
  tree.M_root = root_eval.M;
  tree.k0 = cfg.k0(root_eval.M);

  Item root;
  root.M = root_eval.M;
  root.err = root_eval.err;
  if (cfg.keep_nodes) {
    root.node = 0;
    tree.nodes.push_back({0, 0, 0, 1, 0, -1, root.M, CubeClass::Carried});
  }
  std::vector<Item> frontier{root};

  AccountingReport& acc = tree.accounting;
  bool any_unresolved = false;
  for (int gen = 0; !frontier.empty(); ++gen) {
    GenerationRow row;
    row.generation = gen;
    const double side = cfg.R / std::pow(double(A), gen);
    const double side_n = std::pow(side, kBaseDim);
    std::vector<Item> next;
    for (const Item& it : frontier) {
      row.processed += it.t_mult;
      const double lo_y = cfg.origin.y + side * double(it.iy);
      const bool on_gamma = std::abs(lo_y) <= 1e-9 * cfg.R;
      CubeClass cls;
      if (gen > 0 && it.layer <= A - desc) {
        // Top layers: interior-bound charge at this generation, no descent.
        cls = CubeClass::ChargedInterior;
        row.charged_interior += it.t_mult;
        row.charge += double(it.t_mult) * (it.M + 1.0) * side_n;
      } else if (it.M <= cfg.M0) {
        cls = on_gamma ? CubeClass::TerminalBoundary : CubeClass::TerminalSmall;
        (on_gamma ? row.terminal_boundary : row.terminal_small) += it.t_mult;
        row.charge += double(it.t_mult) * A * cfg.M0 * side_n;
      } else if (gen >= cfg.max_generations) {
        cls = CubeClass::Unresolved;
        row.unresolved += it.t_mult;
        any_unresolved = true;
      } else {
        cls = it.M <= 0.5 * it.parent_M + 1e-12 * std::abs(it.parent_M)
                  ? CubeClass::Halved
                  : CubeClass::Carried;
        row.descended += it.t_mult;
        for (int dj = 0; dj < A; ++dj) {
          for (int di = 0; di < A; ++di) {
            Item ch;
            ch.ix = A * it.ix + di;
            ch.iy = A * it.iy + dj;
            ch.t_mult = it.t_mult * A;
            ch.layer = A - dj;
            ch.parent = it.node;
            ch.parent_M = it.M;
            const MEval e = oracle(cube_at(gen + 1, ch.ix, ch.iy), gen + 1);
            ch.M = e.M;
            ch.err = e.err;
            next.push_back(ch);
          }
        }
      }
      if (it.node >= 0) tree.nodes[it.node].cls = cls;
    }
    if (cfg.keep_nodes) {
      for (Item& ch : next) {
        ch.node = int(tree.nodes.size());
        tree.nodes.push_back({gen + 1, ch.ix, ch.iy, ch.t_mult, ch.layer,
                              ch.parent, ch.M, CubeClass::Carried});
      }
    }
    acc.rows.push_back(row);
    acc.recursion_total += row.charge;
    frontier = std::move(next);
  }

  const SeriesBound sb = series_bound(cfg, tree.M_root);
  acc.series_S1 = sb.S1;
  acc.series_S2 = sb.S2_exact;
  acc.closed_form_total = sb.total;
  acc.complete = !any_unresolved;
  acc.recursion_le_series =
      acc.complete && acc.recursion_total <= acc.closed_form_total * (1.0 + 1e-9);
  return tree;
}

SeriesBound series_bound(const DividingConfig& cfg, double M_Q) {
  return series_bound(cfg, M_Q, cfg.R);
}

SeriesBound series_bound(const DividingConfig& cfg, double M_Q, double R) {
  cfg.validate();
  SeriesBound sb;
  sb.kappa = cfg.kappa();
  sb.k0 = cfg.k0(M_Q);
  const double Rn = std::pow(R, kBaseDim);
  const double geo = sb.kappa / (1.0 - sb.kappa);  // = 2 A^n - 1
  sb.S1 = cfg.A * Rn * M_Q * geo;
  sb.S2_exact = std::pow(double(cfg.A), kBaseDim + 2) * Rn * cfg.M0;
  sb.S2_kappa =
      double(cfg.A) * cfg.A * Rn * M_Q * std::pow(sb.kappa, sb.k0) / (1.0 - sb.kappa);
  sb.total = sb.S1 + sb.S2_exact;
  sb.final_bound = Rn * std::pow(double(cfg.A), kBaseDim + 2) * M_Q;
  sb.fitted_C = sb.total / sb.final_bound;
  sb.chain_ok = sb.S2_exact <= sb.S2_kappa * (1.0 + 1e-12);
  return sb;
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) stays exact because the running value is a binomial.
    r = checked_mul(r, std::uint64_t(n - k + i)) / std::uint64_t(i);
  }
  return r;
}

std::vector<std::vector<std::uint64_t>> worst_case_class_counts(int A, int k0,
                                                                int k_max) {
  if (A < 3 || k0 < 1 || k_max < 0)
    throw std::invalid_argument("worst_case_class_counts: bad arguments");
  const std::uint64_t stay =
      std::uint64_t(A) * std::uint64_t(A) - 1;  // A^n - 1, n = 2
  std::vector<std::vector<std::uint64_t>> counts(k_max + 1);
  counts[0] = {1};
  for (int k = 0; k < k_max; ++k) {
    const int jmax = std::min(k, k0);
    const int jmax_next = std::min(k + 1, k0);
    counts[k + 1].assign(jmax_next + 1, 0);
    for (int j = 0; j <= jmax; ++j) {
      const std::uint64_t c = counts[k][j];
      counts[k + 1][j] = checked_add(counts[k + 1][j], checked_mul(c, stay));
      if (j < k0)
        counts[k + 1][j + 1] = checked_add(counts[k + 1][j + 1], c);
    }
  }
  return counts;
}

TailCheck counting_tail_check(int A, int k0, int k_max) {
  if (A < 3 || k0 < 1 || k_max < k0)
    throw std::invalid_argument("counting_tail_check: bad arguments");
  const double an = std::pow(double(A), -kBaseDim);
  const double kappa = 1.0 - 0.5 * an;
  TailCheck tc;
  tc.ok = true;
  for (int k = k0; k <= k_max; ++k) {
    const double lhs = double(binomial_u64(k, k0)) * std::pow(0.5 * an, k0) *
                       std::pow(1.0 - an, k - k0);
    const double rhs = std::pow(kappa, k);
    tc.lhs.push_back(lhs);
    tc.rhs.push_back(rhs);
    tc.max_ratio = std::max(tc.max_ratio, lhs / rhs);
    tc.ok = tc.ok && lhs <= rhs * (1.0 + 1e-12);
  }
  return tc;
}

CoveringReport collar_covering_count(const DomainSpec& dom, double R,
                                     double beta) {
  if (!(R > 0.0) || !(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("collar_covering_count: bad R or beta");
  const CollarParams cp = collar_params(dom);

  CoveringReport rep;
  rep.R = R;
  rep.gate_ok = R <= cp.r0 / 8.0 + 1e-15;

  // Anchor runs in boundary-parameter space; rectangles get one run per
  // edge so no chart box straddles a corner.
  struct Run {
    double p0 = 0.0, len = 0.0;
  };
  std::vector<Run> runs;
  if (dom.kind() == DomainKind::Rectangle) {
    const double w = dom.width(), h = dom.height();
    runs = {{0.0, w}, {w, h}, {w + h, w}, {2 * w + h, h}};
  } else {
    runs = {{0.0, dom.param_max()}};
  }
  const double arc_per_param = dom.perimeter() / dom.param_max();

  // Dense verification set: boundary points at spacing <= R/4, probed at
  // several depths into the collar.
  const int ns = std::max(512, int(std::ceil(dom.perimeter() / (0.25 * R))));
  const std::array<double, 5> depth_fracs{0.02, 0.25, 0.5, 0.75, 0.95};

  // Chart validity window: a box of side R needs half a side along the
  // boundary.  Flat rectangle charts are exact at that radius right up to
  // the corner gate; curved charts get the box diagonal with margin.
  const double chart_r = dom.kind() == DomainKind::Rectangle
                             ? 0.5 * R
                             : std::min(1.5 * R, 0.2 * dom.perimeter());

  for (int attempt = 0; attempt < 4; ++attempt) {
    const double b = beta / double(1 << attempt);
    std::vector<double> params;
    for (const Run& run : runs) {
      const double arc = run.len * arc_per_param;
      const int m = std::max(1, int(std::ceil(arc / (b * R))));
      for (int i = 0; i < m; ++i) {
        double p = run.len * (i + 0.5) / m;
        // keep rectangle anchors clear of the corner gate; the first and
        // last boxes still reach the corners because they extend R/2.  The
        // slack absorbs roundoff in run.p0 + p, which can otherwise land an
        // anchor a few ulp inside the gate.
        if (dom.kind() == DomainKind::Rectangle) {
          const double slack = 1e-12 * dom.param_max();
          p = std::clamp(p, chart_r + slack, run.len - chart_r - slack);
        }
        params.push_back(run.p0 + p);
      }
    }
    std::vector<StraightenedChart> charts;
    charts.reserve(params.size());
    for (double p : params) charts.push_back(straighten(dom, p, chart_r));

    const int nc = int(charts.size());
    auto covered_by = [&](const Vec2& q, int idx) {
      const Vec2 y = charts[idx].to_chart(q);
      return std::abs(y.x) <= 0.5 * R * (1.0 + 1e-6) && y.y >= -1e-6 * R &&
             y.y <= R * (1.0 + 1e-3);
    };

    bool all_covered = true;
    for (int i = 0; i < ns && all_covered; ++i) {
      const double param = dom.param_max() * (i + 0.5) / ns;
      const Vec2 p = dom.boundary_point(param);
      const Vec2 nu = dom.boundary_normal(param);
      // Candidate charts: neighbors of param in the sorted anchor list.
      const auto up = std::upper_bound(params.begin(), params.end(), param);
      const int base = int(up - params.begin());
      for (double frac : depth_fracs) {
        const Vec2 q{p.x - frac * R * nu.x, p.y - frac * R * nu.y};
        bool hit = false;
        for (int d = -2; d <= 2 && !hit; ++d)
          hit = covered_by(q, ((base + d) % nc + nc) % nc);
        if (!hit) {
          all_covered = false;
          break;
        }
      }
    }
    rep.count = nc;
    rep.beta = b;
    rep.covered = all_covered;
    rep.fitted_C = double(nc) * std::pow(R, kBaseDim - 1);
    if (all_covered) break;
  }
  return rep;
}

}  // namespace nodalab
