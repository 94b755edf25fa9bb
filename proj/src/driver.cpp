#include "fracwave/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracwave {

namespace {

RunConfig validated(RunConfig config) {
  config.validate();
  return config;
}

void check_solve(const SolveReport& report, const char* what, long step, double t) {
  if (!report.converged)
    throw std::runtime_error(std::string(what) + " solve failed at step " + std::to_string(step) +
                             ", t = " + std::to_string(t) + ": " +
                             std::to_string(report.iterations) +
                             " iterations, relative residual " +
                             std::to_string(report.relative_residual));
}

void check_finite(const Eigen::VectorXd& y, const char* what, long step, double t) {
  if (!y.allFinite())
    throw std::runtime_error(std::string(what) + " produced a non-finite state at step " +
                             std::to_string(step) + ", t = " + std::to_string(t));
}

}  // namespace

Simulation::Simulation(const RunConfig& config)
    : config_(validated(config)),
      mesh_(build_mesh(config_.make_geometry(), config_.level, config_.make_side_tags())),
      space_(mesh_, config_.degree),
      base_(config_.make_material()),
      material_(mesh_, base_, config_.reg_factor),
      phase_(initial_phase_state(mesh_)),
      pulse_(config_.make_pulse()) {
  if (config_.phase_field_enabled)
    phase_field_ = std::make_unique<PhaseField>(mesh_, config_.make_phase_params());
  gmres_options_.rtol = config_.gmres_rtol;
  gmres_options_.restart = config_.gmres_restart;
  gmres_options_.max_iterations = config_.gmres_max_iterations;
  y_ = Eigen::VectorXd::Zero(space_.dim());
  u_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_.num_cells()) * 2 *
                             space_.nodes_per_cell());
  next_dt_ = config_.dt_el;
  energy_ = fracwave::energy(space_, material_, y_);
}

void Simulation::set_state(const Eigen::VectorXd& y) {
  if (y.size() != space_.dim())
    throw std::invalid_argument("set_state: expected " + std::to_string(space_.dim()) +
                                " entries, got " + std::to_string(y.size()));
  if (!y.allFinite()) throw std::invalid_argument("set_state: non-finite entries");
  y_ = y;
  energy_ = fracwave::energy(space_, material_, y_);
}

const BlockJacobi& Simulation::preconditioner(double gamma_dt) {
  const std::uint64_t version = material_.version();
  std::erase_if(precond_cache_,
                [version](const PrecondEntry& e) { return e.version != version; });
  for (const auto& e : precond_cache_)
    if (e.gamma_dt == gamma_dt) return *e.precond;
  precond_cache_.push_back(
      {version, gamma_dt, std::make_unique<BlockJacobi>(space_, material_, gamma_dt)});
  return *precond_cache_.back().precond;
}

StepInfo Simulation::step() {
  StepInfo info;
  const double dt = next_dt_;
  const double t_new = t_ + dt;
  const double e_prev = energy_;

  // S1: implicit-midpoint candidate with the current material.
  const Eigen::VectorXd load_mid = assemble_load(space_, material_, pulse_, t_ + 0.5 * dt);
  WaveStepResult candidate =
      midpoint_step(space_, material_, y_, t_, dt, load_mid, gmres_options_, &preconditioner(0.5 * dt));
  check_solve(candidate.report, "midpoint", step_ + 1, t_new);
  check_finite(candidate.state, "midpoint", step_ + 1, t_new);
  info.gmres_iterations = candidate.report.iterations;

  bool phase_changed = false;
  bool domain_changed = false;
  PhaseState new_phase;
  if (phase_field_) {
    // S2: implicit-Euler phase-field candidate driven by the candidate stress.
    const Eigen::VectorXd load_el = phase_field_->elastic_load(space_, candidate.state);
    auto [s_candidate, cg_report] = phase_field_->step(phase_.s, load_el, dt);
    check_solve(cg_report, "phase field", step_ + 1, t_new);
    info.cg_iterations = cg_report.iterations;
    // S3: projection, crack irreversibility, elastic-domain tracking.
    new_phase = project_and_track(s_candidate, phase_, config_.s_min);
    new_phase.time = t_new;
    domain_changed = new_phase.elastic_nodes != phase_.elastic_nodes;
    phase_changed = (new_phase.s - phase_.s).lpNorm<Eigen::Infinity>() > 1e-14;
  }

  double used_load_norm = load_mid.norm();
  if (!domain_changed) {
    // S4: the elastic domain is unchanged; accept the candidate.
    y_ = std::move(candidate.state);
  } else {
    // S5: the elastic domain shrank; degrade the material by the new infimum.
    DegradedMaterialField old_material = std::move(material_);
    const std::vector<double> s_inf(new_phase.s_inf.data(),
                                    new_phase.s_inf.data() + new_phase.s_inf.size());
    material_ = degrade(mesh_, base_, s_inf, config_.reg_factor);
    ++material_rebuilds_;
    // S6: discard the candidate and recompute the wave step with the
    // dissipative implicit-Euler scheme and the updated material.
    const Eigen::VectorXd load_new = assemble_load(space_, material_, pulse_, t_new);
    used_load_norm = load_new.norm();
    WaveStepResult recomputed = euler_step(space_, material_, old_material, y_, t_, dt, load_new,
                                           gmres_options_, &preconditioner(dt));
    check_solve(recomputed.report, "euler", step_ + 1, t_new);
    check_finite(recomputed.state, "euler", step_ + 1, t_new);
    info.gmres_iterations = recomputed.report.iterations;
    y_ = std::move(recomputed.state);
    info.dissipative = true;
  }

  // S7: displacement update and step-size switch.
  const int npc = space_.nodes_per_cell();
  for (int c = 0; c < mesh_.num_cells(); ++c) {
    for (int a = 0; a < npc; ++a) {
      u_[(static_cast<Eigen::Index>(c) * 2 + 0) * npc + a] +=
          dt * y_[space_.dof(c, DGSpace::kVx, a)];
      u_[(static_cast<Eigen::Index>(c) * 2 + 1) * npc + a] +=
          dt * y_[space_.dof(c, DGSpace::kVy, a)];
    }
  }
  if (phase_field_) phase_ = std::move(new_phase);
  next_dt_ = phase_changed ? config_.dt_pf : config_.dt_el;
  t_ = t_new;
  ++step_;

  energy_ = fracwave::energy(space_, material_, y_);
  if (!std::isfinite(energy_))
    throw std::runtime_error("non-finite energy at step " + std::to_string(step_));
  // Work enters only through the boundary load; steps with a zero load vector
  // can only lose energy, and that loss is the accumulated dissipation.
  if (used_load_norm == 0.0) dissipation_ += e_prev - energy_;

  info.step = step_;
  info.t = t_;
  info.dt = dt;
  info.phase_changed = phase_changed;
  info.energy = energy_;
  info.energy_change = energy_ - e_prev;
  info.cracked_nodes = phase_field_ ? phase_.num_cracked() : 0;
  return info;
}

RunTrace Simulation::run() { return run({}); }

RunTrace Simulation::run(const std::function<void(const Simulation&, const StepInfo&)>& on_step) {
  const bool files = !config_.output_directory.empty();
  const std::string dir = config_.output_directory;
  if (files) std::filesystem::create_directories(dir);
  const bool snapshots = files && config_.output_interval > 0.0;

  RunTrace trace;
  TraceRecord init;
  init.step = 0;
  init.t = t_;
  init.dt = 0.0;
  init.kind = "init";
  init.energy = energy_;
  init.dissipation = dissipation_;
  init.cracked_nodes = phase_field_ ? phase_.num_cracked() : 0;
  init.gmres_iters = 0;
  trace.records.push_back(std::move(init));

  long next_snapshot = 1;
  if (snapshots) {
    write_vtu(mesh_, point_fields(), cell_fields(), dir + "/out_" + std::to_string(step_) + ".vtu");
  }

  while (t_ + 1e-12 < config_.t_end) {
    const StepInfo info = step();
    TraceRecord r;
    r.step = info.step;
    r.t = info.t;
    r.dt = info.dt;
    r.kind = info.dissipative ? "euler" : "midpoint";
    r.energy = info.energy;
    r.dissipation = dissipation_;
    r.cracked_nodes = info.cracked_nodes;
    r.gmres_iters = info.gmres_iterations;
    trace.records.push_back(std::move(r));
    if (snapshots && t_ + 1e-12 >= next_snapshot * config_.output_interval) {
      write_vtu(mesh_, point_fields(), cell_fields(),
                dir + "/out_" + std::to_string(step_) + ".vtu");
      while (t_ + 1e-12 >= next_snapshot * config_.output_interval) ++next_snapshot;
    }
    if (on_step) on_step(*this, info);
  }

  if (files) write_trace(trace.records, dir + "/trace.csv");
  return trace;
}

std::vector<VtuField> Simulation::point_fields() const {
  const int nv = mesh_.num_vertices();
  VtuField s{"s", std::vector<double>(nv, 1.0)};
  VtuField s_inf{"s_inf", std::vector<double>(nv, 1.0)};
  if (phase_field_) {
    for (int v = 0; v < nv; ++v) {
      s.values[v] = phase_.s[v];
      s_inf.values[v] = phase_.s_inf[v];
    }
  }
  return {std::move(s), std::move(s_inf)};
}

std::vector<VtuField> Simulation::cell_fields() const {
  const int nc = mesh_.num_cells();
  const int npc = space_.nodes_per_cell();
  VtuField speed{"speed", std::vector<double>(nc, 0.0)};
  VtuField trace_stress{"stress_trace", std::vector<double>(nc, 0.0)};
  VtuField principal{"principal_stress", std::vector<double>(nc, 0.0)};
  for (int c = 0; c < nc; ++c) {
    double vsum = 0.0, trsum = 0.0, prsum = 0.0;
    for (int a = 0; a < npc; ++a) {
      const double vx = y_[space_.dof(c, DGSpace::kVx, a)];
      const double vy = y_[space_.dof(c, DGSpace::kVy, a)];
      const SymTensor2 sig{y_[space_.dof(c, DGSpace::kSxx, a)],
                           y_[space_.dof(c, DGSpace::kSyy, a)],
                           y_[space_.dof(c, DGSpace::kSxy, a)]};
      vsum += std::hypot(vx, vy);
      trsum += sig.trace();
      prsum += max_principal_stress(sig, config_.plane_strain_nu);
    }
    speed.values[c] = vsum / npc;
    trace_stress.values[c] = trsum / npc;
    principal.values[c] = prsum / npc;
  }
  return {std::move(speed), std::move(trace_stress), std::move(principal)};
}

PilotResult run_pilot(const RunConfig& config, double target_peak) {
  RunConfig trial = config;
  trial.phase_field_enabled = false;
  trial.output_directory.clear();
  trial.output_interval = 0.0;
  const double target = target_peak > 0.0 ? target_peak : 1.2 * config.sigma_c;

  Simulation sim(trial);
  const DGSpace& space = sim.space();
  const int npc = space.nodes_per_cell();
  PilotResult result;
  sim.run([&](const Simulation& s, const StepInfo& info) {
    const Eigen::VectorXd& y = s.state();
    double peak = 0.0;
    for (int c = 0; c < s.mesh().num_cells(); ++c) {
      for (int a = 0; a < npc; ++a) {
        const SymTensor2 sig{y[space.dof(c, DGSpace::kSxx, a)], y[space.dof(c, DGSpace::kSyy, a)],
                             y[space.dof(c, DGSpace::kSxy, a)]};
        peak = std::max(peak, max_principal_stress(sig, config.plane_strain_nu));
      }
    }
    if (peak > result.peak_principal_stress) {
      result.peak_principal_stress = peak;
      result.peak_time = info.t;
    }
  });
  if (result.peak_principal_stress > 0.0) result.scale = target / result.peak_principal_stress;
  result.amplitude_left = config.amplitude_left * result.scale;
  result.amplitude_right = config.amplitude_right * result.scale;
  return result;
}

}  // namespace fracwave
