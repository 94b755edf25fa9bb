#pragma once

#include <array>
#include <string>
#include <vector>

#include "fracwave/dg_wave.hpp"
#include "fracwave/geometry.hpp"
#include "fracwave/material.hpp"
#include "fracwave/mesh.hpp"
#include "fracwave/phase_field.hpp"

namespace fracwave {

// Complete description of one simulation run. Parsed from a flat key-value
// text file with dotted section keys (e.g. "material.mu = 1.0"); unknown keys
// are rejected with line numbers, serialization round-trips bit-exactly.
struct RunConfig {
  // geometry.*  ("rectangle" uses all four extents; "curved-bar" bends the
  // fixed arc x1 in (-0.5, 0.5) and reads only the x2 extents)
  std::string geometry_kind = "rectangle";
  int level = 4;
  double x1_min = 0.0;
  double x1_max = 1.0;
  double x2_min = 0.0;
  double x2_max = 1.0;

  // space.*
  int degree = 1;

  // material.*
  double lambda = 2.0;
  double mu = 1.0;
  double rho = 1.0;

  // phase_field.*  (enabled = false runs purely elastic)
  bool phase_field_enabled = false;
  double sigma_c = 1.0;
  double l_c = 0.1;
  double tau_r = 1e-3;
  double m_geom = 1.0;
  double s_min = 0.01;
  double reg_factor = 1e-7;
  double plane_strain_nu = -1.0;  // >= 0 adds the out-of-plane stress to the criterion
  double cg_rtol = 1e-10;
  int cg_max_iterations = 10000;

  // time.*
  double dt_el = 1e-3;
  double dt_pf = 5e-4;
  double t_end = 1.0;

  // pulse.*  (compactly supported pressure pulse on the short ends)
  double amplitude_left = 0.0;
  double amplitude_right = 0.0;
  double width_left = 0.3;
  double width_right = 0.3;
  double shift_left = 0.0;
  double shift_right = 0.0;
  double t_init = 0.0;  // load switched off for t >= t_init

  // solver.*
  double gmres_rtol = 1e-10;
  int gmres_restart = 100;
  int gmres_max_iterations = 2000;

  // boundary.*  ("free" | "neumann" | "dirichlet")
  std::string boundary_left = "neumann";
  std::string boundary_right = "neumann";
  std::string boundary_bottom = "free";
  std::string boundary_top = "free";

  // output.*  (directory empty = no files; interval <= 0 = no field snapshots)
  std::string output_directory;
  double output_interval = 0.0;

  // Throws std::runtime_error naming the offending key on invalid values.
  void validate() const;

  GeometryMap make_geometry() const;
  std::array<BoundaryTag, 4> make_side_tags() const;  // left, right, bottom, top
  IsotropicElastic make_material() const;
  PhaseFieldParams make_phase_params() const;
  BoundaryPulse make_pulse() const;  // cp taken from the base material
};

// All recognized configuration keys, in serialization order.
const std::vector<std::string>& config_keys();

// Sets one key on the config; value syntax errors and unknown keys throw.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped,
// later assignments override earlier ones. Errors carry 1-based line numbers.
RunConfig parse_config(const std::string& text, const RunConfig& base = RunConfig());
RunConfig load_config(const std::string& path, const RunConfig& base = RunConfig());

// Emits every key; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

// Shipped presets: "curved-bar-2d" (literal experiment constants),
// "curved-bar-2d-calibrated" (shifts moved inside the load window and the
// pilot-calibrated amplitude), "quasi-1d-strip", "subcritical-smoke".
const std::vector<std::string>& preset_names();
RunConfig preset_config(const std::string& name);

}  // namespace fracwave
