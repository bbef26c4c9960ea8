#include "nodalab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nodalab/lifted.hpp"

namespace nodalab {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Interior lattice: bounding-box grid filtered by a boundary margin.
std::vector<Vec2> interior_centers(const DomainSpec& dom, int grid,
                                   double margin = 0.12) {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const BoundarySample& b : dom.boundary_samples()) {
    lo.x = std::min(lo.x, b.p.x);
    lo.y = std::min(lo.y, b.p.y);
    hi.x = std::max(hi.x, b.p.x);
    hi.y = std::max(hi.y, b.p.y);
  }
  const double min_ext = std::min(hi.x - lo.x, hi.y - lo.y);
  std::vector<Vec2> out;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Vec2 p{lo.x + (hi.x - lo.x) * (i + 0.5) / grid,
                   lo.y + (hi.y - lo.y) * (j + 0.5) / grid};
      if (dom.contains(p) && dom.boundary_distance(p) >= margin * min_ext)
        out.push_back(p);
    }
  }
  if (out.empty()) out.push_back(dom.centroid());
  return out;
}

std::vector<double> radii_or_default(const RunConfig& cfg,
                                     std::vector<double> fallback) {
  return cfg.radii.empty() ? fallback : cfg.radii;
}

nlohmann::json base_manifest(const RunConfig& cfg, const SolutionField& f) {
  return nlohmann::json{{"field", f.name},
                        {"domain", cfg.domain.to_json()},
                        {"mu", f.mu},
                        {"lambda", f.lambda},
                        {"solver_residual", f.residual},
                        {"solver_h", f.mesh_h},
                        {"mesh_h", cfg.mesh_h},
                        {"seed", cfg.seed},
                        {"quadrature",
                         {{"nphi", 48},
                          {"ntheta", 64},
                          {"clip_base", 16},
                          {"clip_depth", 5}}}};
}

void emit_report(const RunConfig& cfg, const StudyReport& rep) {
  write_json(cfg.outdir + "/report_" + rep.command + ".json", rep.to_json());
}

// Boundary chart shared by the nodal / divide commands: anchored at the
// middle of the bottom edge for rectangles, at parameter 0 otherwise.
StraightenedChart default_chart(const DomainSpec& dom) {
  const double param0 =
      dom.kind() == DomainKind::Rectangle ? 0.5 * dom.width() : 0.0;
  const CollarParams cp = collar_params(dom);
  const double radius = std::min(0.5, 0.45 * cp.delta);
  return straighten(dom, param0, std::max(radius, 0.05));
}

ChartCube boundary_cube(double side) {
  ChartCube q;
  q.lo = {-0.5 * side, 0.0, -0.5 * side};
  q.hi = {0.5 * side, side, 0.5 * side};
  return q;
}

}  // namespace

StudyReport cmd_solve(const RunConfig& cfg) {
  const SolutionField f = make_field(cfg);
  StudyReport rep;
  rep.command = "solve";
  rep.manifest = base_manifest(cfg, f);

  // Sampled field for plots plus a sup-normalization check.
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const BoundarySample& b : cfg.domain.boundary_samples()) {
    lo.x = std::min(lo.x, b.p.x);
    lo.y = std::min(lo.y, b.p.y);
    hi.x = std::max(hi.x, b.p.x);
    hi.y = std::max(hi.y, b.p.y);
  }
  const int n = 96;
  std::vector<std::vector<double>> rows;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec2 p{lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n};
      if (cfg.domain.contains(p)) rows.push_back({p.x, p.y, f.value(p)});
    }
  }
  write_csv(cfg.outdir + "/solution.csv", {"x", "y", "u"}, rows);

  const Vec2 c = cfg.domain.centroid();
  double enclose = 0.0;
  for (const BoundarySample& b : cfg.domain.boundary_samples())
    enclose = std::max(enclose, dist(b.p, c));
  const SupResult sup =
      sup_norm_on_region(*f.u, cfg.domain, {c, 1.05 * enclose});
  rep.manifest["sup_norm"] = sup.value;
  rep.manifest["sup_argmax"] = {sup.argmax.x, sup.argmax.y};

  std::vector<double> xs, us;
  for (int i = 0; i <= 256; ++i) {
    const Vec2 p{lo.x + (hi.x - lo.x) * i / 256.0, c.y};
    if (cfg.domain.contains(p)) {
      xs.push_back(p.x);
      us.push_back(f.value(p));
    }
  }
  write_plot_columns(cfg.outdir + "/plot_u_slice.dat", {"x", "u"}, {xs, us});
  emit_report(cfg, rep);
  return rep;
}

StudyReport cmd_frequency(const RunConfig& cfg) {
  const SolutionField f = make_field(cfg);
  StudyReport rep;
  rep.command = "frequency";
  rep.manifest = base_manifest(cfg, f);

  const std::vector<double> radii =
      radii_or_default(cfg, {0.05, 0.1, 0.2, 0.3, 0.4});
  const std::vector<Vec2> centers =
      interior_centers(cfg.domain, cfg.center_grid);

  std::vector<std::vector<double>> csv;
  std::vector<double> plot_r, plot_N;
  bool gate_implies_star = true;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Vec2 c = centers[ci];
    const RadiusProfile prof = frequency_profile(f, c, radii);
    int admissible = 0;
    double min_dot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prof.entries.size(); ++i) {
      const RadiusEntry& e = prof.entries[i];
      csv.push_back({c.x, c.y, e.eval.r, e.eval.H, e.eval.I_def, e.eval.I_ibp,
                     e.eval.N, e.eval.N_def, e.eval.quadrature_error,
                     e.admissible ? 1.0 : 0.0, e.star_min_dot});
      if (e.admissible) {
        ++admissible;
        min_dot = std::min(min_dot, e.star_min_dot);
      }
      if (e.distance_gate && !e.admissible) gate_implies_star = false;
      if (ci == 0) {
        plot_r.push_back(e.eval.r);
        plot_N.push_back(e.eval.N);
      }
    }

    const MonotonicityReport mono = check_monotonicity(prof);
    if (mono.checked > 0) {
      CheckRecord r;
      r.check_id = "frequency_monotonicity";
      r.subject = f.name + fmt(" @ (%.3f, %.3f)", c.x, c.y);
      r.inputs = {{"center", {c.x, c.y}}, {"radii", radii}};
      r.fitted_constant = mono.worst_gap;
      r.pass = mono.ok;
      r.detail = fmt("checked=%.0f violations=%.0f", mono.checked,
                     mono.violations);
      rep.add(std::move(r));
    }

    {
      CheckRecord r;
      r.check_id = "star_shaped_certification";
      r.subject = f.name + fmt(" @ (%.3f, %.3f)", c.x, c.y);
      r.inputs = {{"center", {c.x, c.y}}, {"radii", radii}};
      r.fitted_constant = admissible ? min_dot : 0.0;
      r.pass = admissible >= 1 && gate_implies_star;
      r.detail = fmt("admissible=%.0f of %.0f", admissible,
                     double(radii.size()));
      rep.add(std::move(r));
    }

    // Two-sided doubling over consecutive admissible radii.
    if (ci < 4) {
      bool all_ok = true;
      double worst = std::numeric_limits<double>::infinity();
      double err = 0.0;
      int pairs = 0;
      for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        if (!prof.entries[i].admissible || !prof.entries[i + 1].admissible)
          continue;
        const DoublingReport dr =
            check_doubling(f, c, radii[i], radii[i + 1]);
        all_ok = all_ok && dr.ok;
        worst = std::min(worst, std::min(dr.slack_lo, dr.slack_hi));
        err = std::max(err, dr.error);
        ++pairs;
      }
      if (pairs > 0) {
        CheckRecord r;
        r.check_id = "frequency_doubling";
        r.subject = f.name + fmt(" @ (%.3f, %.3f)", c.x, c.y);
        r.inputs = {{"center", {c.x, c.y}}, {"radii", radii}};
        r.fitted_constant = worst;
        r.error_bar = err;
        r.pass = all_ok;
        r.detail = fmt("pairs=%.0f worst_slack=%.3g", pairs, worst);
        rep.add(std::move(r));
      }
    }
  }
  write_csv(cfg.outdir + "/freq_profiles.csv",
            {"cx", "cy", "r", "H", "I_def", "I_ibp", "N", "N_def", "quad_err",
             "admissible", "star_min_dot"},
            csv);
  write_plot_columns(cfg.outdir + "/plot_N_vs_r.dat", {"r", "N"},
                     {plot_r, plot_N});

  // Changing-center comparison near the first center.
  {
    const Vec2 c = centers.front();
    const double r = radii.back();
    const Vec2 c1{c.x + r / 8.0, c.y};
    try {
      const ChangingCenterReport cc =
          check_changing_center(f, c, c1, r, r / 2.0);
      CheckRecord rec;
      rec.check_id = "changing_center";
      rec.subject = f.name + fmt(" a=%.4f r=%.3f", cc.a, cc.r);
      rec.inputs = {{"x0", {c.x, c.y}}, {"x1", {c1.x, c1.y}}, {"r", r}};
      rec.fitted_constant = cc.fitted_C;
      rec.pass = std::isfinite(cc.fitted_C) && cc.fitted_C >= 0.0 &&
                 cc.fitted_C < 1e3;
      rec.detail = fmt("N0=%.4f N1=%.4f", cc.N0, cc.N1);
      rep.add(std::move(rec));
    } catch (const std::exception& e) {
      rep.manifest["changing_center_skipped"] = e.what();
    }
  }

  emit_report(cfg, rep);
  return rep;
}

StudyReport cmd_doubling(const RunConfig& cfg) {
  const SolutionField f = make_field(cfg);
  StudyReport rep;
  rep.command = "doubling";
  rep.manifest = base_manifest(cfg, f);

  const std::vector<double> radii =
      radii_or_default(cfg, {0.05, 0.1, 0.2, 0.4});
  const std::vector<Vec2> centers =
      interior_centers(cfg.domain, cfg.center_grid);

  std::vector<std::vector<double>> csv;
  std::vector<double> plot_r, plot_M;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Vec2 c = centers[ci];
    for (double r : radii) {
      const DoublingEval de = doubling_index(f, {c.x, c.y, 0.0}, r);
      csv.push_back({c.x, c.y, r, de.M, de.M_err, de.sup_outer, de.sup_inner});
      if (ci == 0) {
        plot_r.push_back(r);
        plot_M.push_back(de.M);
      }
    }
  }
  write_csv(cfg.outdir + "/M_map.csv",
            {"cx", "cy", "r", "M", "M_err", "sup_outer", "sup_inner"}, csv);
  write_plot_columns(cfg.outdir + "/plot_M_vs_r.dat", {"r", "M"},
                     {plot_r, plot_M});

  for (std::size_t ci = 0; ci < std::min<std::size_t>(3, centers.size());
       ++ci) {
    const Vec2 c = centers[ci];
    const BridgeReport br = check_bridge(f, c, 0.2, 0.5);
    CheckRecord r;
    r.check_id = "doubling_bridge";
    r.subject = f.name + fmt(" @ (%.3f, %.3f) r=0.2", c.x, c.y);
    r.inputs = {{"center", {c.x, c.y}}, {"r", br.r}, {"eta", br.eta}};
    r.fitted_constant = std::max(br.C1, br.C2);
    r.pass = std::isfinite(br.C1) && std::isfinite(br.C2) &&
             r.fitted_constant <= 25.0;
    r.detail = fmt("C1=%.3f C2=%.3f M=%.3f", br.C1, br.C2, br.M);
    rep.add(std::move(r));

    const AlmostMonotonicityReport am =
        check_almost_monotonicity(f, c, radii, radii.back());
    CheckRecord r2;
    r2.check_id = "doubling_almost_monotonicity";
    r2.subject = f.name + fmt(" @ (%.3f, %.3f)", c.x, c.y);
    r2.inputs = {{"center", {c.x, c.y}}, {"r0", am.r0}};
    r2.fitted_constant = am.C;
    r2.pass = std::isfinite(am.C) && am.C >= 0.0 && am.C <= 25.0;
    r2.detail = fmt("M(r0)=%.3f worst_r=%.3f", am.M0, am.worst_r);
    rep.add(std::move(r2));
  }

  {
    const GlobalBoundReport gb = global_doubling_bound(f, centers, radii);
    CheckRecord r;
    r.check_id = "doubling_global_bound";
    r.subject = f.name;
    r.inputs = {{"n_centers", centers.size()}, {"radii", radii}};
    r.fitted_constant = gb.ratio;
    r.pass = std::isfinite(gb.ratio) && gb.ratio > 0.0;
    r.detail = fmt("M_max=%.3f at r=%.3f", gb.M_max, gb.arg_r);
    rep.add(std::move(r));
    rep.manifest["global_bound"] = {{"ratio", gb.ratio},
                                    {"M_max", gb.M_max},
                                    {"arg_r", gb.arg_r}};
  }

  {
    std::vector<double> vr;
    for (double r = 0.015; r <= 0.21; r *= 1.55) vr.push_back(r);
    const VanishingOrderEstimate vo =
        vanishing_order(f, cfg.domain.centroid(), vr);
    CheckRecord r;
    r.check_id = "vanishing_order";
    r.subject = f.name + " @ centroid";
    r.inputs = {{"radii", vr}};
    r.fitted_constant = vo.slope;
    r.error_bar = vo.residual;
    r.pass = vo.reliable;
    r.detail = fmt("order=%.3f residual=%.3g", vo.slope, vo.residual);
    rep.add(std::move(r));
  }

  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double r : {0.2, 0.3, 0.4}) {
      const DeGiorgiReport dg =
          check_de_giorgi(f, {centers.front().x, centers.front().y, 0.0}, r);
      lo = std::min(lo, dg.ratio);
      hi = std::max(hi, dg.ratio);
    }
    CheckRecord r;
    r.check_id = "lifted_sup_bound";
    r.subject = f.name;
    r.inputs = {{"theta", 0.5}, {"radii", {0.2, 0.3, 0.4}}};
    r.fitted_constant = hi;
    r.pass = std::isfinite(hi) && hi > 0.0 && hi / lo <= 10.0;
    r.detail = fmt("ratio range [%.3g, %.3g]", lo, hi);
    rep.add(std::move(r));
  }

  emit_report(cfg, rep);
  return rep;
}

StudyReport cmd_nodal(const RunConfig& cfg) {
  const SolutionField f = make_field(cfg);
  StudyReport rep;
  rep.command = "nodal";
  rep.manifest = base_manifest(cfg, f);

  const NodalSet ns = extract_nodal(f, cfg.mesh_h);
  std::vector<std::vector<double>> seg_rows;
  seg_rows.reserve(ns.segments.size());
  for (const NodalSegment& s : ns.segments)
    seg_rows.push_back({s.a.x, s.a.y, s.b.x, s.b.y, s.length()});
  write_csv(cfg.outdir + "/nodal_set.csv", {"ax", "ay", "bx", "by", "length"},
            seg_rows);
  rep.manifest["total_length"] = ns.total_length;
  rep.manifest["degenerate_cells"] = ns.degenerate_cells;

  const CollarReport collar =
      collar_decomposition_study(f, cfg.mesh_h, cfg.collar_R0);
  std::vector<std::vector<double>> band_rows;
  std::vector<double> bj, blen;
  for (const CollarBand& b : collar.bands) {
    band_rows.push_back({double(b.j), b.d_in, b.d_out, b.length, b.ratio});
    bj.push_back(double(b.j));
    blen.push_back(b.length);
  }
  write_csv(cfg.outdir + "/collar_bands.csv",
            {"j", "d_in", "d_out", "length", "ratio"}, band_rows);
  write_plot_columns(cfg.outdir + "/plot_bands.dat", {"j", "length"},
                     {bj, blen});

  {
    const InteriorBoundReport ib =
        interior_bound_study({f}, cfg.interior_r, cfg.mesh_h);
    const double bookkeeping = std::abs(collar.interior_length +
                                        collar.collar_length -
                                        collar.total_length);
    CheckRecord r;
    r.check_id = "interior_length_bound";
    r.subject = f.name + fmt(" r=%.3f", cfg.interior_r);
    r.inputs = {{"r", cfg.interior_r}, {"mesh_h", cfg.mesh_h}};
    r.fitted_constant = ib.fitted_C;
    r.pass = std::isfinite(ib.fitted_C) && !ib.rows.empty() &&
             bookkeeping <= 1e-9 * std::max(1.0, collar.total_length);
    r.detail = fmt("interior=%.4f collar=%.4f total=%.4f",
                   collar.interior_length, collar.collar_length,
                   collar.total_length);
    rep.add(std::move(r));
  }

  {
    const SmallnessReport sm = smallness_propagation_experiment("eps_scaled");
    CheckRecord r;
    r.check_id = "smallness_propagation";
    r.subject = sm.family;
    r.inputs = {{"samples", sm.eps.size()}};
    r.fitted_constant = sm.alpha;
    r.pass = !sm.degenerate && sm.alpha >= 0.8;
    r.detail = fmt("alpha=%.3f over %.0f samples", sm.alpha,
                   double(sm.eps.size()));
    rep.add(std::move(r));
  }

  {
    const StraightenedChart chart = default_chart(cfg.domain);
    const ChartField cf(f, chart);
    const ChartCube q = boundary_cube(cfg.dividing.R);
    const BoundaryCubeReport bc = boundary_cube_nodal(cf, q, cfg.mesh_h);
    CheckRecord r;
    r.check_id = "boundary_cube_measure";
    r.subject = f.name + fmt(" side=%.3f", q.side());
    r.inputs = {{"side", q.side()}, {"mesh_h", cfg.mesh_h}};
    r.fitted_constant = bc.ratio;
    r.error_bar = bc.M_err;
    r.pass = bc.odd_extension_gap <= 1e-8 && bc.length_in_cube >= 0.0 &&
             std::isfinite(bc.ratio);
    r.detail = fmt("M_Q=%.3f length=%.4f gate_side_max=%.3g", bc.M_Q,
                   bc.length_in_cube, bc.gate_side_max) +
               (bc.gate_ok ? " (gate ok)" : " (gate waived)");
    rep.add(std::move(r));
    rep.manifest["boundary_cube"] = {{"M_Q", bc.M_Q},
                                     {"measure3", bc.measure3},
                                     {"face_length", bc.face_length}};
  }

  {
    const Vec2 c = cfg.domain.centroid();
    ChartCube q;
    const double side = cfg.dividing.R;
    q.lo = {c.x - 0.5 * side, c.y - 0.5 * side, -0.5 * side};
    q.hi = {c.x + 0.5 * side, c.y + 0.5 * side, 0.5 * side};
    const InteriorCubeReport ic = interior_cube_nodal(f, q, cfg.mesh_h);
    CheckRecord r;
    r.check_id = "interior_cube_measure";
    r.subject = f.name + fmt(" side=%.3f", side);
    r.inputs = {{"side", side}, {"mesh_h", cfg.mesh_h}};
    r.fitted_constant = ic.ratio;
    r.pass = std::isfinite(ic.ratio) && ic.length_in_cube >= 0.0;
    r.detail = fmt("M_Q=%.3f length=%.4f boundary_gap=%.3f", ic.M_Q,
                   ic.length_in_cube, ic.boundary_gap) +
               (ic.boundary_gap >= 0.0 ? "" : " (distance gate waived)");
    rep.add(std::move(r));
  }

  emit_report(cfg, rep);
  return rep;
}

StudyReport cmd_divide(const RunConfig& cfg) {
  StudyReport rep;
  rep.command = "divide";

  DividingConfig dc = cfg.dividing;
  MOracle oracle;
  // Field mode needs the chart field alive for the whole run.
  std::optional<SolutionField> f;
  std::optional<StraightenedChart> chart;
  std::optional<ChartField> cf;
  if (cfg.oracle == "field") {
    f = make_field(cfg);
    chart = default_chart(cfg.domain);
    cf.emplace(*f, *chart);
    oracle = field_oracle(*cf, 4, 6);
    dc.origin = {-0.5 * dc.R, 0.0, -0.5 * dc.R};
    dc.max_generations = std::min(dc.max_generations, 2);
    rep.manifest = base_manifest(cfg, *f);
  } else if (cfg.oracle == "halving") {
    oracle = halving_oracle(cfg.synthetic_M);
    rep.manifest = {{"oracle", "halving"}, {"M_root", cfg.synthetic_M}};
  } else {
    oracle = stuck_oracle(cfg.synthetic_M);
    rep.manifest = {{"oracle", "stuck"}, {"M_root", cfg.synthetic_M}};
  }
  rep.manifest["dividing"] = {{"A", dc.A},
                              {"M0", dc.M0},
                              {"R", dc.R},
                              {"kappa", dc.kappa()},
                              {"gate_satisfied", dc.gate_satisfied()},
                              {"max_generations", dc.max_generations}};

  ChartCube root;
  root.lo = dc.origin;
  root.hi = {dc.origin.x + dc.R, dc.origin.y + dc.R, dc.origin.t + dc.R};
  try {
    const DividingLemmaReport lem = check_dividing_lemma(oracle, root, dc);
    std::vector<std::vector<double>> rows;
    for (const LayerRow& lr : lem.layers)
      rows.push_back({double(lr.layer), lr.min_M, lr.min_err,
                      lr.pass ? 1.0 : 0.0});
    write_csv(cfg.outdir + "/dividing_layers.csv",
              {"layer", "min_M", "min_err", "pass"}, rows);
    CheckRecord r;
    r.check_id = "dividing_lemma";
    r.subject = cfg.oracle + fmt(" A=%.0f R=%.3f", double(dc.A), dc.R);
    r.inputs = {{"A", dc.A}, {"R", dc.R}, {"oracle", cfg.oracle}};
    double worst = 0.0;
    for (const LayerRow& lr : lem.layers) worst = std::max(worst, lr.min_M);
    r.fitted_constant = worst;
    r.error_bar = lem.threshold;
    r.pass = lem.pass;
    r.detail = fmt("M_Q=%.3f threshold=%.3f", lem.M_Q, lem.threshold);
    rep.add(std::move(r));
  } catch (const std::runtime_error& e) {
    rep.manifest["lemma_check"] = std::string("not applicable: ") + e.what();
  }

  const CubeTree tree = run_dividing(oracle, dc);
  if (!tree.nodes.empty()) {
    std::ostringstream dump;
    for (const CubeNode& nd : tree.nodes) {
      const double side = dc.R / std::pow(double(dc.A), nd.gen);
      dump << nd.gen << " " << nd.layer << " " << nd.ix << " " << nd.iy << " "
           << nd.t_mult << " " << format_g17(side) << " "
           << format_g17(dc.origin.x + side * double(nd.ix)) << " "
           << format_g17(dc.origin.y + side * double(nd.iy)) << " "
           << format_g17(nd.M) << " " << to_string(nd.cls) << "\n";
    }
    std::ofstream out(cfg.outdir + "/cube_tree.txt");
    out << "# gen layer ix iy t_mult side lo_x lo_y M class\n" << dump.str();
  }

  const AccountingReport& acc = tree.accounting;
  nlohmann::json gens = nlohmann::json::array();
  for (const GenerationRow& g : acc.rows)
    gens.push_back({{"generation", g.generation},
                    {"processed", g.processed},
                    {"charged_interior", g.charged_interior},
                    {"terminal_small", g.terminal_small},
                    {"terminal_boundary", g.terminal_boundary},
                    {"descended", g.descended},
                    {"unresolved", g.unresolved},
                    {"charge", g.charge}});
  const SeriesBound sb = series_bound(dc, tree.M_root);
  const CoveringReport cover = collar_covering_count(cfg.domain, dc.R);
  write_json(cfg.outdir + "/accounting.json",
             {{"M_root", tree.M_root},
              {"k0", tree.k0},
              {"kappa", dc.kappa()},
              {"generations", gens},
              {"recursion_total", acc.recursion_total},
              {"closed_form_total", acc.closed_form_total},
              {"series",
               {{"S1", sb.S1},
                {"S2_exact", sb.S2_exact},
                {"S2_kappa", sb.S2_kappa},
                {"final_bound", sb.final_bound},
                {"fitted_C", sb.fitted_C},
                {"chain_ok", sb.chain_ok}}},
              {"complete", acc.complete},
              {"recursion_le_series", acc.recursion_le_series},
              {"collar_covering",
               {{"R", cover.R},
                {"count", cover.count},
                {"covered", cover.covered},
                {"fitted_C", cover.fitted_C},
                {"gate_ok", cover.gate_ok}}}});

  CheckRecord r;
  r.check_id = "dividing_lemma";
  r.subject = cfg.oracle + " accounting";
  r.inputs = {{"A", dc.A}, {"M0", dc.M0}, {"max_generations",
                                           dc.max_generations}};
  r.fitted_constant = acc.recursion_total;
  r.error_bar = acc.closed_form_total;
  r.pass = acc.complete && acc.recursion_le_series;
  r.detail = fmt("recursion=%.4g series=%.4g", acc.recursion_total,
                 acc.closed_form_total) +
             (acc.complete ? "" : " (incomplete: unresolved cubes)");
  rep.add(std::move(r));

  emit_report(cfg, rep);
  return rep;
}

StudyReport cmd_sweep(const RunConfig& cfg) {
  StudyReport rep;
  rep.command = "sweep";
  rep.manifest = {{"mesh_h", cfg.mesh_h},
                  {"solver_h", cfg.field.solver_h},
                  {"index", cfg.field.index},
                  {"seed", cfg.seed}};

  const std::vector<double> amps{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::vector<double>> table;
  std::vector<double> col_a, col_ratio;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double a : amps) {
    RunConfig sub = cfg;
    sub.field.family = "eigenpair";
    sub.field.pot_a = a;
    const SolutionField f = make_field(sub);
    const CollarReport collar =
        collar_decomposition_study(f, cfg.mesh_h, cfg.collar_R0);
    table.push_back({a, f.mu, f.lambda, std::sqrt(f.lambda),
                     collar.total_length, collar.collar_length,
                     collar.interior_length, collar.theorem_ratio,
                     collar.total_ratio});
    col_a.push_back(a);
    col_ratio.push_back(collar.total_ratio);
    lo = std::min(lo, collar.total_ratio);
    hi = std::max(hi, collar.total_ratio);
  }
  write_csv(cfg.outdir + "/sweep_table.csv",
            {"a", "mu", "lambda", "sqrt_lambda", "total_length",
             "collar_length", "interior_length", "theorem_ratio",
             "total_ratio"},
            table);
  write_plot_columns(cfg.outdir + "/plot_sweep.dat", {"a", "total_ratio"},
                     {col_a, col_ratio});

  CheckRecord r;
  r.check_id = "nodal_scaling_sweep";
  r.subject = "eigenpair index " + std::to_string(cfg.field.index) + ", " +
              std::to_string(amps.size()) + " amplitudes";
  r.inputs = {{"amplitudes", amps},
              {"index", cfg.field.index},
              {"solver_h", cfg.field.solver_h}};
  r.fitted_constant = hi;
  r.pass = std::isfinite(hi) && lo > 0.0 && hi / lo <= 4.0;
  r.detail = fmt("ratio range [%.3g, %.3g] spread %.2f", lo, hi, hi / lo);
  rep.add(std::move(r));

  emit_report(cfg, rep);
  return rep;
}

ConsolidatedReport cmd_report(const std::string& dir) {
  return consolidate_reports(dir);
}

namespace {

struct CliOpts {
  std::string config, domain, family, oracle, outdir;
  int k = 0, m = 0, index = 0, center_grid = 0, A = 0, max_gen = -1;
  double mesh_h = 0, solver_h = 0, pot_a = 0, M0 = 0, R = 0;
  double interior_r = 0, collar_R0 = 0, synthetic_M = 0;
  std::uint64_t seed = 0;
  std::vector<double> radii;
};

DomainSpec parse_domain(const std::string& s) {
  if (s == "disk") return DomainSpec::unit_disk();
  if (s == "square") return DomainSpec::rectangle(1.0, 1.0);
  double a = 0, b = 0;
  int mode = 0;
  if (std::sscanf(s.c_str(), "rect:%lf,%lf", &a, &b) == 2)
    return DomainSpec::rectangle(a, b);
  if (std::sscanf(s.c_str(), "pdisk:%lf,%d", &a, &mode) == 2)
    return DomainSpec::perturbed_disk(1.0, a, mode);
  throw std::invalid_argument(
      "config error at domain: expected disk | square | rect:W,H | "
      "pdisk:EPS,MODE, got '" + s + "'");
}

void add_common(CLI::App* sub, CliOpts& o) {
  sub->add_option("-c,--config", o.config, "JSON config file");
  sub->add_option("-o,--outdir", o.outdir, "output directory");
  sub->add_option("--domain", o.domain,
                  "disk | square | rect:W,H | pdisk:EPS,MODE");
  sub->add_option("--family", o.family,
                  "square_mode | disk_mode | harmonic_poly | eigenpair");
  sub->add_option("--k", o.k, "first mode index");
  sub->add_option("--m", o.m, "second mode index");
  sub->add_option("--index", o.index, "eigenpair index (1-based)");
  sub->add_option("--pot-a", o.pot_a, "potential amplitude");
  sub->add_option("--mesh-h", o.mesh_h, "nodal extraction pitch");
  sub->add_option("--solver-h", o.solver_h, "eigensolver mesh pitch");
  sub->add_option("--radii", o.radii, "radius grid (increasing)");
  sub->add_option("--center-grid", o.center_grid, "center lattice per side");
  sub->add_option("--interior-r", o.interior_r, "interior margin");
  sub->add_option("--collar-R0", o.collar_R0, "collar width knob");
  sub->add_option("--oracle", o.oracle, "field | halving | stuck");
  sub->add_option("--synthetic-M", o.synthetic_M, "synthetic root index");
  sub->add_option("--A", o.A, "subdivision factor (odd)");
  sub->add_option("--M0", o.M0, "terminal index threshold");
  sub->add_option("--R", o.R, "root cube side");
  sub->add_option("--max-gen", o.max_gen, "recursion depth cap");
  sub->add_option("--seed", o.seed, "rng seed");
}

RunConfig build_config(CLI::App* sub, const CliOpts& o) {
  RunConfig cfg;
  if (sub->count("--config")) cfg = load_config(o.config);
  if (sub->count("--outdir")) cfg.outdir = o.outdir;
  if (sub->count("--domain")) cfg.domain = parse_domain(o.domain);
  if (sub->count("--family")) cfg.field.family = o.family;
  if (sub->count("--k")) cfg.field.k = o.k;
  if (sub->count("--m")) cfg.field.m = o.m;
  if (sub->count("--index")) cfg.field.index = o.index;
  if (sub->count("--pot-a")) cfg.field.pot_a = o.pot_a;
  if (sub->count("--mesh-h")) cfg.mesh_h = o.mesh_h;
  if (sub->count("--solver-h")) cfg.field.solver_h = o.solver_h;
  if (sub->count("--radii")) cfg.radii = o.radii;
  if (sub->count("--center-grid")) cfg.center_grid = o.center_grid;
  if (sub->count("--interior-r")) cfg.interior_r = o.interior_r;
  if (sub->count("--collar-R0")) cfg.collar_R0 = o.collar_R0;
  if (sub->count("--oracle")) cfg.oracle = o.oracle;
  if (sub->count("--synthetic-M")) cfg.synthetic_M = o.synthetic_M;
  if (sub->count("--A")) cfg.dividing.A = o.A;
  if (sub->count("--M0")) cfg.dividing.M0 = o.M0;
  if (sub->count("--R")) cfg.dividing.R = o.R;
  if (sub->count("--max-gen")) cfg.dividing.max_generations = o.max_gen;
  if (sub->count("--seed")) cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

int finish(const StudyReport& rep) {
  for (const CheckRecord& r : rep.records)
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.check_id << "  "
              << r.subject << "  (fitted=" << format_g17(r.fitted_constant)
              << ")\n";
  const int nf = rep.failures();
  std::cout << rep.command << ": " << rep.records.size() << " checks, " << nf
            << " failures\n";
  return nf == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"frequency-function and nodal-measure verification lab"};
  app.require_subcommand(1);

  CliOpts o;
  CLI::App* solve = app.add_subcommand("solve", "realize a solution field");
  CLI::App* freq = app.add_subcommand("frequency", "frequency profiles");
  CLI::App* doub = app.add_subcommand("doubling", "doubling index studies");
  CLI::App* nodal = app.add_subcommand("nodal", "nodal set measurement");
  CLI::App* divide = app.add_subcommand("divide", "cube dividing recursion");
  CLI::App* sweep = app.add_subcommand("sweep", "potential family scaling");
  for (CLI::App* s : {solve, freq, doub, nodal, divide, sweep})
    add_common(s, o);
  std::string report_dir = "out";
  CLI::App* reportc = app.add_subcommand("report", "consolidate reports");
  reportc->add_option("dir", report_dir, "report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (solve->parsed()) return finish(cmd_solve(build_config(solve, o)));
    if (freq->parsed()) return finish(cmd_frequency(build_config(freq, o)));
    if (doub->parsed()) return finish(cmd_doubling(build_config(doub, o)));
    if (nodal->parsed()) return finish(cmd_nodal(build_config(nodal, o)));
    if (divide->parsed()) return finish(cmd_divide(build_config(divide, o)));
    if (sweep->parsed()) return finish(cmd_sweep(build_config(sweep, o)));
    if (reportc->parsed()) {
      const ConsolidatedReport cr = cmd_report(report_dir);
      std::cout << "reports: " << cr.report_files << ", records "
                << cr.total_records << ", failures " << cr.failures
                << ", covered " << cr.covered.size() << "/"
                << check_registry().size() << "\n";
      return cr.failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace nodalab
