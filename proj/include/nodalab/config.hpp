#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "nodalab/dividing.hpp"

namespace nodalab {

// Which solution the run studies: a closed-form family or a discrete
// eigenpair of -Delta u + W u = mu u with W = a sin(kx x) sin(ky y).
struct FieldSpec {
  std::string family = "square_mode";  // square_mode | disk_mode |
                                       // harmonic_poly | eigenpair
  int k = 1;          // first mode index (radial index for disk_mode)
  int m = 1;          // second mode index (angular for disk_mode)
  int index = 1;      // eigenpair index, 1-based
  double pot_a = 0.0;  // potential amplitude a
  double pot_kx = 3.0, pot_ky = 3.0;
  double solver_h = 1.0 / 64;  // eigensolver mesh pitch

  nlohmann::json to_json() const;
  static FieldSpec from_json(const nlohmann::json& j);
};

struct RunConfig {
  DomainSpec domain = DomainSpec::rectangle(1.0, 1.0);
  FieldSpec field;
  double mesh_h = 1.0 / 256;   // nodal extraction pitch
  std::vector<double> radii;   // radius grid (defaulted per command if empty)
  int center_grid = 4;         // interior center lattice per side
  double interior_r = 0.1;     // interior margin for nodal studies
  double collar_R0 = 1.0;      // collar width knob, R = min(R0/sqrt(..), r0/8)
  DividingConfig dividing;
  std::string oracle = "field";  // field | halving | stuck (divide command)
  double synthetic_M = 18.0;     // root index for the synthetic oracles
  std::string outdir = "out";
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;  // throws std::invalid_argument naming the field
};

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

// Realize the configured solution field (may run the eigensolver).
SolutionField make_field(const RunConfig& cfg);

// The potential W described by the field spec (zero when pot_a == 0).
Potential make_potential(const FieldSpec& fs);

}  // namespace nodalab
