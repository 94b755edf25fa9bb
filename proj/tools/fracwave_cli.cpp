#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracwave/config.hpp"
#include "fracwave/driver.hpp"
#include "fracwave/verify1d.hpp"

namespace {

struct ConfigSource {
  std::string file;
  std::string preset;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigSource& source) {
  cmd->add_option("config", source.file, "Config file (flat dotted keys, '#' comments)")
      ->check(CLI::ExistingFile);
  std::string presets;
  for (const auto& name : fracwave::preset_names()) {
    if (!presets.empty()) presets += ", ";
    presets += name;
  }
  cmd->add_option("--preset", source.preset, "Start from a built-in preset (" + presets + ")");
  cmd->add_option("--override", source.overrides, "Override a key, e.g. --override time.t_end=1.0")
      ->take_all();
}

fracwave::RunConfig resolve_config(const ConfigSource& source) {
  fracwave::RunConfig cfg;
  if (!source.preset.empty()) cfg = fracwave::preset_config(source.preset);
  if (!source.file.empty()) cfg = fracwave::load_config(source.file, cfg);
  if (source.file.empty() && source.preset.empty())
    throw CLI::ValidationError("provide a config file or --preset");
  for (const std::string& item : source.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--override expects key=value, got '" + item + "'");
    fracwave::apply_override(cfg, item.substr(0, eq), item.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

int cmd_run(const ConfigSource& source, bool quiet) {
  const fracwave::RunConfig cfg = resolve_config(source);
  fracwave::Simulation sim(cfg);
  const auto start = std::chrono::steady_clock::now();
  sim.run([&](const fracwave::Simulation&, const fracwave::StepInfo& info) {
    if (quiet) return;
    if (info.step % 200 == 0 || info.dissipative)
      std::printf("step %6ld  t %.6f  dt %.3e  %s  E %.6e  cracked %ld\n", info.step, info.t,
                  info.dt, info.dissipative ? "euler   " : "midpoint", info.energy,
                  info.cracked_nodes);
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("done: %ld steps to t=%.6f in %.1fs\n", sim.step_count(), sim.time(), seconds);
  std::printf("energy %.9e  dissipation %.9e  cracked nodes %d  material rebuilds %llu\n",
              sim.energy(), sim.dissipation(), sim.phase().num_cracked(),
              static_cast<unsigned long long>(sim.material_rebuilds()));
  if (!cfg.output_directory.empty())
    std::printf("trace and snapshots written to %s\n", cfg.output_directory.c_str());
  return 0;
}

int cmd_pilot(const ConfigSource& source, double target) {
  const fracwave::RunConfig cfg = resolve_config(source);
  const fracwave::PilotResult pilot = fracwave::run_pilot(cfg, target);
  std::printf("elastic pilot (fracture disabled)\n");
  std::printf("peak principal stress %.9e at t=%.6f\n", pilot.peak_principal_stress,
              pilot.peak_time);
  std::printf("scale factor to reach target: %.9e\n", pilot.scale);
  std::printf("suggested pulse.amplitude_left  = %.9e\n", pilot.amplitude_left);
  std::printf("suggested pulse.amplitude_right = %.9e\n", pilot.amplitude_right);
  return 0;
}

int cmd_verify_1d(const ConfigSource& source, int extra_levels) {
  const fracwave::RunConfig cfg = resolve_config(source);
  std::vector<int> levels;
  for (int l = cfg.level; l <= cfg.level + extra_levels; ++l) levels.push_back(l);
  const fracwave::ConvergenceStudy study = fracwave::convergence_study(cfg, levels);

  std::printf("pulse peak pressure %.6e\n", study.pulse_peak);
  std::printf("h,error_l2\n");
  for (const auto& row : study.rows) std::printf("%.10e,%.10e\n", row.h, row.error_l2);
  for (std::size_t i = 0; i < study.observed_orders.size(); ++i)
    std::printf("observed order %d -> %d: %.3f\n", study.rows[i].level, study.rows[i + 1].level,
                study.observed_orders[i]);
  for (const auto& row : study.rows)
    std::printf("level %d free-end max |sigma_xx| %.6e (%.3f%% of pulse peak)\n", row.level,
                row.free_end_max, 100.0 * row.free_end_max / study.pulse_peak);

  if (cfg.phase_field_enabled) {
    const fracwave::SpallComparison cmp = fracwave::spall_comparison(cfg);
    if (cmp.oracle.found)
      std::printf("oracle spall: position %.6f (%.6f from free end)\n", cmp.oracle.position,
                  cmp.oracle.distance_from_end);
    else
      std::printf("oracle spall: none predicted (pulse too weak)\n");
    if (cmp.simulated_found)
      std::printf("simulated spall: position %.6f (%.6f from free end) at t=%.6f\n",
                  cmp.simulated_position, cmp.simulated_distance_from_end, cmp.simulated_time);
    else
      std::printf("simulated spall: none within t_end\n");
    if (cmp.oracle.found && cmp.simulated_found)
      std::printf("spall position error %.6e\n", cmp.position_error);
  } else {
    std::printf("spall comparison skipped: phase_field.enabled = false\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracwave: wave-driven dynamic brittle fracture simulator"};
  app.require_subcommand(1);

  ConfigSource run_source;
  bool run_quiet = false;
  CLI::App* run = app.add_subcommand("run", "Execute a simulation");
  add_config_options(run, run_source);
  run->add_flag("--quiet", run_quiet, "Suppress per-step progress output");

  ConfigSource pilot_source;
  double pilot_target = 0.0;
  CLI::App* pilot =
      app.add_subcommand("pilot", "Calibrate pulse amplitudes against a peak-stress target");
  add_config_options(pilot, pilot_source);
  pilot->add_option("--target", pilot_target,
                    "Peak principal stress target (default 1.2 * phase_field.sigma_c)");

  ConfigSource verify_source;
  int verify_extra = 2;
  CLI::App* verify =
      app.add_subcommand("verify-1d", "Compare the quasi-1D strip against the analytic bar");
  add_config_options(verify, verify_source);
  verify->add_option("--extra-levels", verify_extra,
                     "Refinement levels beyond the config level (default 2)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(run_source, run_quiet);
    if (pilot->parsed()) return cmd_pilot(pilot_source, pilot_target);
    if (verify->parsed()) return cmd_verify_1d(verify_source, verify_extra);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
