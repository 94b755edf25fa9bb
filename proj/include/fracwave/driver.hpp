#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "fracwave/config.hpp"
#include "fracwave/dg_space.hpp"
#include "fracwave/dg_wave.hpp"
#include "fracwave/material.hpp"
#include "fracwave/mesh.hpp"
#include "fracwave/phase_field.hpp"
#include "fracwave/vtu.hpp"

namespace fracwave {

// Outcome of one staggered step.
struct StepInfo {
  long step = 0;
  double t = 0.0;   // time after the step
  double dt = 0.0;
  bool dissipative = false;        // material changed, step recomputed implicit-Euler
  bool phase_changed = false;      // projected s differs from the previous step
  double energy = 0.0;             // energy after the step
  double energy_change = 0.0;      // energy - previous energy
  int gmres_iterations = 0;        // iterations of the solve that produced the state
  int cg_iterations = 0;           // phase-field solve iterations
  long cracked_nodes = 0;
};

struct RunTrace {
  std::vector<TraceRecord> records;  // one per step, preceded by an "init" row
};

// Staggered wave/phase-field time integrator. Per step: an implicit-midpoint
// candidate for velocity and stress, an implicit-Euler phase-field candidate
// driven by the candidate stress, projection with crack irreversibility and
// elastic-domain tracking; if the elastic domain shrank, the material is
// degraded by the running infimum and the wave step is recomputed with the
// dissipative implicit-Euler scheme. The next step size switches between
// dt_el (phase field stationary) and dt_pf (phase field moving).
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const RunConfig& config() const { return config_; }
  const Mesh& mesh() const { return mesh_; }
  const DGSpace& space() const { return space_; }
  const DegradedMaterialField& material() const { return material_; }
  const PhaseState& phase() const { return phase_; }
  const Eigen::VectorXd& state() const { return y_; }
  const Eigen::VectorXd& displacement() const { return u_; }  // (cell*2+comp)*npc+node
  double time() const { return t_; }
  long step_count() const { return step_; }
  double next_dt() const { return next_dt_; }
  double energy() const { return energy_; }
  double dissipation() const { return dissipation_; }
  // Number of material degradations so far; stays 0 while no crack grows.
  std::uint64_t material_rebuilds() const { return material_rebuilds_; }

  // Overwrite the wave state (verification runs start from interpolants).
  void set_state(const Eigen::VectorXd& y);

  StepInfo step();

  // Steps until t_end; writes the trace and VTU snapshots if configured.
  RunTrace run();
  RunTrace run(const std::function<void(const Simulation&, const StepInfo&)>& on_step);

  // Current per-vertex / per-cell fields for snapshot output.
  std::vector<VtuField> point_fields() const;
  std::vector<VtuField> cell_fields() const;

 private:
  const BlockJacobi& preconditioner(double gamma_dt);

  RunConfig config_;
  Mesh mesh_;
  DGSpace space_;
  IsotropicElastic base_;
  DegradedMaterialField material_;
  std::unique_ptr<PhaseField> phase_field_;
  PhaseState phase_;
  BoundaryPulse pulse_;
  GmresOptions gmres_options_;

  Eigen::VectorXd y_;
  Eigen::VectorXd u_;
  double t_ = 0.0;
  long step_ = 0;
  double next_dt_ = 0.0;
  double energy_ = 0.0;
  double dissipation_ = 0.0;
  std::uint64_t material_rebuilds_ = 0;

  struct PrecondEntry {
    std::uint64_t version;
    double gamma_dt;
    std::unique_ptr<BlockJacobi> precond;
  };
  std::vector<PrecondEntry> precond_cache_;
};

// Amplitude calibration: runs the configuration purely elastically, records
// the peak principal stress over all steps and collocation nodes, and scales
// the pulse amplitudes so the peak would match target_peak (1.2 * sigma_c
// when target_peak <= 0). The wave problem is linear, so scaling is exact.
struct PilotResult {
  double peak_principal_stress = 0.0;  // of the trial run
  double peak_time = 0.0;
  double scale = 0.0;
  double amplitude_left = 0.0;   // scaled suggestion
  double amplitude_right = 0.0;  // scaled suggestion
};

PilotResult run_pilot(const RunConfig& config, double target_peak = 0.0);

}  // namespace fracwave
