#include "fracwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace fracwave {

namespace {

using MemberRef = std::variant<double RunConfig::*, int RunConfig::*, bool RunConfig::*,
                               std::string RunConfig::*>;

struct FieldEntry {
  const char* key;
  MemberRef ref;
};

const std::vector<FieldEntry>& registry() {
  static const std::vector<FieldEntry> fields = {
      {"geometry.kind", &RunConfig::geometry_kind},
      {"geometry.level", &RunConfig::level},
      {"geometry.x1_min", &RunConfig::x1_min},
      {"geometry.x1_max", &RunConfig::x1_max},
      {"geometry.x2_min", &RunConfig::x2_min},
      {"geometry.x2_max", &RunConfig::x2_max},
      {"space.degree", &RunConfig::degree},
      {"material.lambda", &RunConfig::lambda},
      {"material.mu", &RunConfig::mu},
      {"material.rho", &RunConfig::rho},
      {"phase_field.enabled", &RunConfig::phase_field_enabled},
      {"phase_field.sigma_c", &RunConfig::sigma_c},
      {"phase_field.l_c", &RunConfig::l_c},
      {"phase_field.tau_r", &RunConfig::tau_r},
      {"phase_field.m_geom", &RunConfig::m_geom},
      {"phase_field.s_min", &RunConfig::s_min},
      {"phase_field.reg_factor", &RunConfig::reg_factor},
      {"phase_field.plane_strain_nu", &RunConfig::plane_strain_nu},
      {"phase_field.cg_rtol", &RunConfig::cg_rtol},
      {"phase_field.cg_max_iterations", &RunConfig::cg_max_iterations},
      {"time.dt_el", &RunConfig::dt_el},
      {"time.dt_pf", &RunConfig::dt_pf},
      {"time.t_end", &RunConfig::t_end},
      {"pulse.amplitude_left", &RunConfig::amplitude_left},
      {"pulse.amplitude_right", &RunConfig::amplitude_right},
      {"pulse.width_left", &RunConfig::width_left},
      {"pulse.width_right", &RunConfig::width_right},
      {"pulse.shift_left", &RunConfig::shift_left},
      {"pulse.shift_right", &RunConfig::shift_right},
      {"pulse.t_init", &RunConfig::t_init},
      {"solver.gmres_rtol", &RunConfig::gmres_rtol},
      {"solver.gmres_restart", &RunConfig::gmres_restart},
      {"solver.gmres_max_iterations", &RunConfig::gmres_max_iterations},
      {"boundary.left", &RunConfig::boundary_left},
      {"boundary.right", &RunConfig::boundary_right},
      {"boundary.bottom", &RunConfig::boundary_bottom},
      {"boundary.top", &RunConfig::boundary_top},
      {"output.directory", &RunConfig::output_directory},
      {"output.interval", &RunConfig::output_interval},
  };
  return fields;
}

const FieldEntry* find_field(const std::string& key) {
  for (const auto& f : registry())
    if (key == f.key) return &f;
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) throw std::runtime_error("empty number");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) throw std::runtime_error("not a number: '" + v + "'");
  if (!std::isfinite(x)) throw std::runtime_error("non-finite number: '" + v + "'");
  return x;
}

int parse_int(const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) throw std::runtime_error("empty integer");
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) throw std::runtime_error("not an integer: '" + v + "'");
  if (x < -1000000000L || x > 1000000000L) throw std::runtime_error("integer out of range: '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& value) {
  const std::string v = trim(value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::runtime_error("expected true or false, got '" + v + "'");
}

// Shortest decimal form that parses back to the same bits.
std::string format_double(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void set_field(RunConfig& config, const FieldEntry& field, const std::string& value) {
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, double>)
          config.*member = parse_double(value);
        else if constexpr (std::is_same_v<T, int>)
          config.*member = parse_int(value);
        else if constexpr (std::is_same_v<T, bool>)
          config.*member = parse_bool(value);
        else
          config.*member = trim(value);
      },
      field.ref);
}

std::string get_field(const RunConfig& config, const FieldEntry& field) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, double>)
          return format_double(config.*member);
        else if constexpr (std::is_same_v<T, int>)
          return std::to_string(config.*member);
        else if constexpr (std::is_same_v<T, bool>)
          return config.*member ? "true" : "false";
        else
          return config.*member;
      },
      field.ref);
}

BoundaryTag tag_from_string(const std::string& name, const char* key) {
  if (name == "free") return BoundaryTag::Free;
  if (name == "neumann") return BoundaryTag::Neumann;
  if (name == "dirichlet") return BoundaryTag::Dirichlet;
  throw std::runtime_error(std::string("config: ") + key +
                           " must be free, neumann or dirichlet (got '" + name + "')");
}

void require(bool ok, const char* message) {
  if (!ok) throw std::runtime_error(std::string("config: ") + message);
}

}  // namespace

void RunConfig::validate() const {
  require(geometry_kind == "rectangle" || geometry_kind == "curved-bar",
          "geometry.kind must be rectangle or curved-bar");
  require(level >= 0 && level <= 14, "geometry.level must be in [0, 14]");
  if (geometry_kind == "rectangle") require(x1_max > x1_min, "geometry.x1_max must exceed x1_min");
  require(x2_max > x2_min, "geometry.x2_max must exceed x2_min");
  if (geometry_kind == "curved-bar")
    require(x2_min > -1.0, "geometry.x2_min must exceed -1 for the curved bar");
  require(degree >= 1 && degree <= 4, "space.degree must be in [1, 4]");
  make_material().validate();
  if (phase_field_enabled) {
    make_phase_params().validate();
    require(reg_factor > 0.0 && reg_factor < 1.0, "phase_field.reg_factor must be in (0, 1)");
  }
  require(dt_el > 0.0, "time.dt_el must be positive");
  require(dt_pf > 0.0 && dt_pf <= dt_el, "time.dt_pf must satisfy 0 < dt_pf <= dt_el");
  require(t_end > 0.0, "time.t_end must be positive");
  require(width_left > 0.0 && width_right > 0.0, "pulse widths must be positive");
  require(t_init >= 0.0, "pulse.t_init must be nonnegative");
  require(gmres_rtol > 0.0, "solver.gmres_rtol must be positive");
  require(gmres_restart >= 1, "solver.gmres_restart must be at least 1");
  require(gmres_max_iterations >= 1, "solver.gmres_max_iterations must be at least 1");
  tag_from_string(boundary_left, "boundary.left");
  tag_from_string(boundary_right, "boundary.right");
  tag_from_string(boundary_bottom, "boundary.bottom");
  tag_from_string(boundary_top, "boundary.top");
}

GeometryMap RunConfig::make_geometry() const {
  if (geometry_kind == "curved-bar") return GeometryMap::curved_bar(x2_min, x2_max);
  return GeometryMap::rectangle(x1_min, x1_max, x2_min, x2_max);
}

std::array<BoundaryTag, 4> RunConfig::make_side_tags() const {
  return {tag_from_string(boundary_left, "boundary.left"),
          tag_from_string(boundary_right, "boundary.right"),
          tag_from_string(boundary_bottom, "boundary.bottom"),
          tag_from_string(boundary_top, "boundary.top")};
}

IsotropicElastic RunConfig::make_material() const { return {lambda, mu, rho}; }

PhaseFieldParams RunConfig::make_phase_params() const {
  PhaseFieldParams p;
  p.sigma_c = sigma_c;
  p.l_c = l_c;
  p.tau_r = tau_r;
  p.m_geom = m_geom;
  p.s_min = s_min;
  p.plane_strain_nu = plane_strain_nu;
  p.cg_rtol = cg_rtol;
  p.cg_max_iterations = cg_max_iterations;
  return p;
}

BoundaryPulse RunConfig::make_pulse() const {
  BoundaryPulse pulse;
  pulse.amplitude_left = amplitude_left;
  pulse.amplitude_right = amplitude_right;
  pulse.width_left = width_left;
  pulse.width_right = width_right;
  pulse.shift_left = shift_left;
  pulse.shift_right = shift_right;
  pulse.t_init = t_init;
  pulse.cp = make_material().cp();
  return pulse;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : registry()) k.emplace_back(f.key);
    return k;
  }();
  return keys;
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
  const FieldEntry* field = find_field(trim(key));
  if (!field) throw std::runtime_error("config: unknown key '" + trim(key) + "'");
  try {
    set_field(config, *field, value);
  } catch (const std::exception& e) {
    throw std::runtime_error("config: invalid value for '" + trim(key) + "': " + e.what());
  }
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig config = base;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const FieldEntry* field = find_field(key);
    if (!field)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
    try {
      set_field(config, *field, value);
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": invalid value for '" +
                               key + "': " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), base);
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : registry()) {
    const std::string key = f.key;
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) out << "\n";
      section = sec;
    }
    out << key << " = " << get_field(config, f) << "\n";
  }
  return out.str();
}

namespace {

// Experiment constants recorded verbatim: a bar bent along a cosine arc,
// loaded by pressure pulses on both ends, 5% stronger on the right. With
// these literal time shifts the pulse supports fall outside the load window
// (0, t_init); the calibrated preset moves the shifts inside the window and
// carries the pilot-scaled amplitude.
RunConfig make_curved_bar_preset() {
  RunConfig c;
  c.geometry_kind = "curved-bar";
  c.level = 6;
  c.x2_min = -0.03125;
  c.x2_max = 0.03125;
  c.degree = 1;
  c.lambda = 2.0;
  c.mu = 1.0;
  c.rho = 1.0;
  c.phase_field_enabled = true;
  c.sigma_c = 27.0;
  c.l_c = 0.0005;
  c.tau_r = 1e-3;
  c.m_geom = 0.01;
  c.s_min = 0.01;
  c.reg_factor = 1e-7;
  c.dt_el = 1e-3;
  c.dt_pf = 5e-4;
  c.t_end = 2.0;
  c.amplitude_left = -1.0e6;
  c.amplitude_right = -1.05e6;
  c.width_left = 0.3;
  c.width_right = 0.3;
  c.shift_left = -1.03;
  c.shift_right = 1.25;
  c.t_init = 0.24;
  c.boundary_left = "neumann";
  c.boundary_right = "neumann";
  c.boundary_bottom = "free";
  c.boundary_top = "free";
  c.output_directory = "out-curved-bar";
  c.output_interval = 0.06;
  return c;
}

RunConfig make_curved_bar_calibrated_preset() {
  RunConfig c = make_curved_bar_preset();
  // Shifts chosen so both pulses fire within (0, t_init) and stay slightly
  // asymmetric.  The amplitude must keep the reflection at each bar end
  // subcritical (its tensile peak is 0.90x the later center superposition)
  // while the superposition of the two reflected tails at the center exceeds
  // sigma_c long enough to nucleate: peaks of 0.96 and 1.08 * sigma_c
  // respectively, the middle of the window where the first crack forms at
  // the center instead of at an end.
  c.shift_left = 0.23;
  c.shift_right = 0.25;
  c.amplitude_left = -1450000.0;
  c.amplitude_right = -1522500.0;  // 1.05 * amplitude_left
  c.t_end = 1.5;
  c.output_directory = "out-curved-bar-calibrated";
  return c;
}

// Thin rectangular strip with lateral stretch disabled (lambda = 0), so the
// plane problem is an exact 1D bar: unit wave speed and impedance, left end
// loaded, right end free.
RunConfig make_quasi_1d_preset() {
  RunConfig c;
  c.geometry_kind = "rectangle";
  c.level = 5;
  c.x1_min = 0.0;
  c.x1_max = 1.0;
  c.x2_min = 0.0;
  c.x2_max = 0.0625;
  c.degree = 1;
  c.lambda = 0.0;
  c.mu = 0.5;
  c.rho = 1.0;
  c.phase_field_enabled = false;
  // If the phase field is switched on, these values reproduce the analytic
  // spall location of the strip to a fraction of a cell.
  c.sigma_c = 0.5;
  c.l_c = 0.02;
  c.m_geom = 0.01;
  c.dt_el = 2e-3;
  c.dt_pf = 1e-3;
  c.t_end = 2.5;
  c.amplitude_left = -67438.0;  // peak pressure approximately 1
  c.width_left = 0.3;
  c.shift_left = 0.35;
  c.t_init = 0.7;
  c.boundary_left = "neumann";
  c.boundary_right = "free";
  c.boundary_bottom = "free";
  c.boundary_top = "free";
  return c;
}

// Short full-pipeline run in which the fracture criterion is never met: the
// phase field stays at 1 and every step takes the elastic branch.
RunConfig make_subcritical_preset() {
  RunConfig c;
  c.geometry_kind = "rectangle";
  c.level = 3;
  c.x1_min = 0.0;
  c.x1_max = 1.0;
  c.x2_min = 0.0;
  c.x2_max = 1.0;
  c.degree = 1;
  c.lambda = 2.0;
  c.mu = 1.0;
  c.rho = 1.0;
  c.phase_field_enabled = true;
  c.sigma_c = 1.0e6;
  c.l_c = 0.05;
  c.tau_r = 1e-3;
  c.m_geom = 1.0;
  c.s_min = 0.01;
  c.reg_factor = 1e-7;
  c.dt_el = 0.01;
  c.dt_pf = 0.005;
  c.t_end = 0.5;
  c.amplitude_left = -1.0e5;
  c.width_left = 0.3;
  c.shift_left = 0.35;
  c.t_init = 0.8;
  c.boundary_left = "neumann";
  c.boundary_right = "free";
  c.boundary_bottom = "free";
  c.boundary_top = "free";
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"curved-bar-2d", "curved-bar-2d-calibrated",
                                                 "quasi-1d-strip", "subcritical-smoke"};
  return names;
}

RunConfig preset_config(const std::string& name) {
  if (name == "curved-bar-2d") return make_curved_bar_preset();
  if (name == "curved-bar-2d-calibrated") return make_curved_bar_calibrated_preset();
  if (name == "quasi-1d-strip") return make_quasi_1d_preset();
  if (name == "subcritical-smoke") return make_subcritical_preset();
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::runtime_error("config: unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace fracwave
