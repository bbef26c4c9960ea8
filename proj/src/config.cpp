#include "nodalab/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace nodalab {

namespace {

nlohmann::json dividing_to_json(const DividingConfig& d) {
  return nlohmann::json{{"A", d.A},
                        {"M0", d.M0},
                        {"R", d.R},
                        {"origin", {d.origin.x, d.origin.y, d.origin.t}},
                        {"max_generations", d.max_generations},
                        {"keep_nodes", d.keep_nodes},
                        {"gate_C", d.gate_C}};
}

DividingConfig dividing_from_json(const nlohmann::json& j) {
  DividingConfig d;
  d.A = j.value("A", d.A);
  d.M0 = j.value("M0", d.M0);
  d.R = j.value("R", d.R);
  if (j.contains("origin")) {
    const auto& a = j.at("origin");
    d.origin = Vec3{a.at(0).get<double>(), a.at(1).get<double>(),
                    a.at(2).get<double>()};
  }
  d.max_generations = j.value("max_generations", d.max_generations);
  d.keep_nodes = j.value("keep_nodes", d.keep_nodes);
  d.gate_C = j.value("gate_C", d.gate_C);
  return d;
}

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  throw std::invalid_argument("config error at " + path + ": " + why);
}

}  // namespace

nlohmann::json FieldSpec::to_json() const {
  return nlohmann::json{{"family", family}, {"k", k},
                        {"m", m},           {"index", index},
                        {"pot_a", pot_a},   {"pot_kx", pot_kx},
                        {"pot_ky", pot_ky}, {"solver_h", solver_h}};
}

FieldSpec FieldSpec::from_json(const nlohmann::json& j) {
  FieldSpec fs;
  fs.family = j.value("family", fs.family);
  fs.k = j.value("k", fs.k);
  fs.m = j.value("m", fs.m);
  fs.index = j.value("index", fs.index);
  fs.pot_a = j.value("pot_a", fs.pot_a);
  fs.pot_kx = j.value("pot_kx", fs.pot_kx);
  fs.pot_ky = j.value("pot_ky", fs.pot_ky);
  fs.solver_h = j.value("solver_h", fs.solver_h);
  return fs;
}

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{{"domain", domain.to_json()},
                        {"field", field.to_json()},
                        {"mesh_h", mesh_h},
                        {"radii", radii},
                        {"center_grid", center_grid},
                        {"interior_r", interior_r},
                        {"collar_R0", collar_R0},
                        {"dividing", dividing_to_json(dividing)},
                        {"oracle", oracle},
                        {"synthetic_M", synthetic_M},
                        {"outdir", outdir},
                        {"seed", seed}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("domain")) c.domain = DomainSpec::from_json(j.at("domain"));
  if (j.contains("field")) c.field = FieldSpec::from_json(j.at("field"));
  c.mesh_h = j.value("mesh_h", c.mesh_h);
  if (j.contains("radii")) c.radii = j.at("radii").get<std::vector<double>>();
  c.center_grid = j.value("center_grid", c.center_grid);
  c.interior_r = j.value("interior_r", c.interior_r);
  c.collar_R0 = j.value("collar_R0", c.collar_R0);
  if (j.contains("dividing")) c.dividing = dividing_from_json(j.at("dividing"));
  c.oracle = j.value("oracle", c.oracle);
  c.synthetic_M = j.value("synthetic_M", c.synthetic_M);
  c.outdir = j.value("outdir", c.outdir);
  c.seed = j.value("seed", c.seed);
  return c;
}

void RunConfig::validate() const {
  static const std::set<std::string> families{"square_mode", "disk_mode",
                                              "harmonic_poly", "eigenpair"};
  if (!families.count(field.family))
    bad_field("field.family", "unknown family '" + field.family + "'");
  if (field.family == "square_mode" &&
      domain.kind() != DomainKind::Rectangle)
    bad_field("field.family", "square_mode needs a rectangle domain");
  if (field.family == "disk_mode" && domain.kind() != DomainKind::UnitDisk)
    bad_field("field.family", "disk_mode needs the unit disk");
  if (field.family == "eigenpair" &&
      domain.kind() == DomainKind::PerturbedDisk)
    bad_field("field.family", "eigenpair solver supports rectangle and disk");
  if (field.family == "square_mode" && (field.k < 1 || field.m < 1))
    bad_field("field.k", "square mode indices must be >= 1");
  if (field.family == "disk_mode" && (field.k < 1 || field.m < 0))
    bad_field("field.k", "disk mode needs radial index >= 1, angular >= 0");
  if (field.family == "harmonic_poly" && field.k < 1)
    bad_field("field.k", "harmonic degree must be >= 1");
  if (field.family == "eigenpair" && field.index < 1)
    bad_field("field.index", "eigenpair index is 1-based");
  if (!(field.solver_h > 0.0) || field.solver_h > 0.5)
    bad_field("field.solver_h", "mesh pitch must lie in (0, 0.5]");
  if (!(mesh_h > 0.0) || mesh_h > 0.5)
    bad_field("mesh_h", "mesh pitch must lie in (0, 0.5]");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] >= 1.0)
      bad_field("radii[" + std::to_string(i) + "]", "radius must be in (0,1)");
    if (i > 0 && radii[i] <= radii[i - 1])
      bad_field("radii", "radius grid must be strictly increasing");
  }
  if (center_grid < 1 || center_grid > 64)
    bad_field("center_grid", "lattice size out of range [1, 64]");
  if (!(interior_r > 0.0) || interior_r >= 0.5)
    bad_field("interior_r", "interior margin must lie in (0, 0.5)");
  if (!(collar_R0 > 0.0))
    bad_field("collar_R0", "collar knob must be positive");
  if (oracle != "field" && oracle != "halving" && oracle != "stuck")
    bad_field("oracle", "expected field | halving | stuck");
  if (!(synthetic_M > 0.0))
    bad_field("synthetic_M", "synthetic root index must be positive");
  if (outdir.empty()) bad_field("outdir", "output directory is empty");
  try {
    dividing.validate();
  } catch (const std::invalid_argument& e) {
    bad_field("dividing", e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " +
                                e.what());
  }
  RunConfig c = RunConfig::from_json(j);
  c.validate();
  return c;
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << cfg.to_json().dump(2) << "\n";
}

Potential make_potential(const FieldSpec& fs) {
  if (fs.pot_a == 0.0) return Potential::zero();
  return Potential::sine_product(fs.pot_a, fs.pot_kx, fs.pot_ky);
}

SolutionField make_field(const RunConfig& cfg) {
  cfg.validate();
  const FieldSpec& fs = cfg.field;
  if (fs.family == "square_mode") return square_mode(cfg.domain, fs.k, fs.m);
  if (fs.family == "disk_mode") return disk_mode(cfg.domain, fs.k, fs.m);
  if (fs.family == "harmonic_poly") return harmonic_poly(cfg.domain, fs.k);
  EigenOptions opts;
  opts.seed = unsigned(cfg.seed);
  return solve_eigenpair(cfg.domain, make_potential(fs), fs.index,
                         fs.solver_h, opts);
}

}  // namespace nodalab
