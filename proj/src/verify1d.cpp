#include "fracwave/verify1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracwave/driver.hpp"

namespace fracwave {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(std::string("strip verification: ") + message);
}

// Cells touching the right (free) end of the strip.
std::vector<int> right_end_cells(const Mesh& mesh) {
  std::vector<int> cells;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary() && face.side == BoundarySide::Right) cells.push_back(face.cell_left);
  }
  return cells;
}

}  // namespace

Bar1DProblem strip_problem(const RunConfig& config) {
  require(config.geometry_kind == "rectangle", "geometry must be a rectangle");
  require(config.lambda == 0.0, "lambda must be 0 so the strip decouples into a 1D bar");
  require(config.amplitude_left != 0.0, "the left pulse must be active");
  require(config.amplitude_right == 0.0, "the right end must be unloaded");
  require(config.boundary_left == "neumann", "the left boundary must be tagged neumann");
  require(config.boundary_right == "free", "the right boundary must be tagged free");
  require(config.boundary_bottom == "free" && config.boundary_top == "free",
          "the lateral boundaries must be tagged free");
  require(config.shift_left >= config.width_left,
          "the pulse support must start at t >= 0 (shift >= width)");

  const IsotropicElastic mat = config.make_material();
  Bar1DProblem problem;
  problem.length = config.x1_max - config.x1_min;
  problem.c = mat.cp();
  problem.Z = mat.zp();
  // The boundary datum is the normal stress a(t); the oracle pressure is -a.
  problem.pulse = bump_pulse(-config.amplitude_left, config.width_left, problem.c,
                             config.shift_left);
  require(problem.pulse.duration <= config.t_init + 1e-12,
          "the pulse must be fully emitted before the t_init cutoff");
  return problem;
}

ConvergenceStudy convergence_study(const RunConfig& base, const std::vector<int>& levels) {
  require(!levels.empty(), "need at least one level");
  const Bar1DProblem problem = strip_problem(base);

  ConvergenceStudy study;
  for (int i = 0; i <= 4000; ++i) {
    const double t = problem.pulse.duration * i / 4000;
    study.pulse_peak = std::max(study.pulse_peak, std::abs(problem.pulse.value(t)));
  }

  const double dt_per_h = base.dt_el * std::ldexp(1.0, base.level);
  for (int level : levels) {
    RunConfig cfg = base;
    cfg.level = level;
    cfg.phase_field_enabled = false;
    cfg.output_directory.clear();
    cfg.output_interval = 0.0;
    const double h = std::ldexp(1.0, -level);
    cfg.dt_el = cfg.dt_pf = dt_per_h * h;

    Simulation sim(cfg);
    const DGSpace& space = sim.space();
    const int npc = space.nodes_per_cell();
    const std::vector<int> end_cells = right_end_cells(sim.mesh());
    const std::vector<double> end_etas = {0.0, 0.25, 0.5, 0.75, 1.0};

    double accumulated = 0.0;
    double end_max = 0.0;
    sim.run([&](const Simulation& s, const StepInfo& info) {
      const Eigen::VectorXd& y = s.state();
      double space_err = 0.0;
      for (int c = 0; c < s.mesh().num_cells(); ++c) {
        for (int a = 0; a < npc; ++a) {
          const auto& g = space.node_geom(c, a);
          const double exact =
              analytic_state(problem, g.phys.x() - base.x1_min, info.t).sigma;
          const double exx = y[space.dof(c, DGSpace::kSxx, a)] - exact;
          const double eyy = y[space.dof(c, DGSpace::kSyy, a)];
          const double exy = y[space.dof(c, DGSpace::kSxy, a)];
          space_err += g.wJ * (exx * exx + eyy * eyy + exy * exy);
        }
      }
      accumulated += info.dt * space_err;
      for (int c : end_cells)
        for (double eta : end_etas)
          end_max = std::max(end_max, std::abs(space.eval_stress(y, c, 1.0, eta).xx));
    });

    ConvergenceRow row;
    row.level = level;
    row.h = h;
    row.dt = cfg.dt_el;
    row.steps = sim.step_count();
    row.error_l2 = std::sqrt(accumulated);
    row.free_end_max = end_max;
    study.rows.push_back(row);
  }

  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const double e0 = study.rows[i - 1].error_l2;
    const double e1 = study.rows[i].error_l2;
    study.observed_orders.push_back(std::log2(e0 / e1));
  }
  return study;
}

SpallComparison spall_comparison(const RunConfig& config) {
  require(config.phase_field_enabled, "the phase field must be enabled");
  const Bar1DProblem problem = strip_problem(config);

  SpallComparison comparison;
  comparison.oracle = spall_location(problem, config.sigma_c);

  RunConfig cfg = config;
  cfg.output_directory.clear();
  cfg.output_interval = 0.0;
  Simulation sim(cfg);
  while (sim.time() + 1e-12 < cfg.t_end) {
    const StepInfo info = sim.step();
    if (info.cracked_nodes > 0) {
      const PhaseState& phase = sim.phase();
      double sum = 0.0;
      int count = 0;
      for (int v = 0; v < sim.mesh().num_vertices(); ++v) {
        if (!phase.elastic_nodes[v]) {
          sum += sim.mesh().vertex(v).x();
          ++count;
        }
      }
      comparison.simulated_found = true;
      comparison.simulated_position = sum / count - config.x1_min;
      comparison.simulated_distance_from_end = problem.length - comparison.simulated_position;
      comparison.simulated_time = info.t;
      break;
    }
  }
  if (comparison.simulated_found && comparison.oracle.found)
    comparison.position_error =
        std::abs(comparison.simulated_position - comparison.oracle.position);
  return comparison;
}

SpeedEstimate estimate_front_speed(const RunConfig& config, double station_a, double station_b,
                                   double threshold, double window) {
  require(config.geometry_kind == "rectangle", "geometry must be a rectangle");
  require(station_a < station_b, "stations must be ordered");
  require(threshold > 0.0 && threshold < 1.0, "threshold must be in (0, 1)");

  RunConfig cfg = config;
  cfg.phase_field_enabled = false;
  cfg.output_directory.clear();
  cfg.output_interval = 0.0;
  cfg.dt_pf = cfg.dt_el;
  Simulation sim(cfg);
  const Mesh& mesh = sim.mesh();
  const DGSpace& space = sim.space();

  const double h = std::ldexp(1.0, -cfg.level);
  const auto locate = [&](double x) {
    const double rel = (x - cfg.x1_min) / h;
    const int i = std::clamp(static_cast<int>(rel), 0, mesh.nx() - 1);
    const int j = mesh.ny() / 2;
    return j * mesh.nx() + i;
  };
  const int cell_a = locate(station_a);
  const int cell_b = locate(station_b);

  // Station signal: cell mean of sigma_xx over the collocation nodes. The mean
  // filters the node-level oscillation a pointwise probe picks up on the flank.
  const int npc = space.nodes_per_cell();
  const auto probe = [&](const Eigen::VectorXd& y, int cell) {
    double sum = 0.0;
    for (int a = 0; a < npc; ++a) sum += y[space.dof(cell, DGSpace::kSxx, a)];
    return std::abs(sum / npc);
  };
  std::vector<double> sa, sb;
  sim.run([&](const Simulation& s, const StepInfo&) {
    sa.push_back(probe(s.state(), cell_a));
    sb.push_back(probe(s.state(), cell_b));
  });
  const double dt = cfg.dt_el;
  const long n = static_cast<long>(sa.size());

  // Normalize each station by its own peak: the pulse amplitude decays between
  // stations as it spreads into the guide, and without normalization that decay
  // biases the alignment. Level sets of the normalized leading flank travel with
  // the compressional front.
  const auto normalize = [&](std::vector<double>& series) {
    double peak = 0.0;
    for (double v : series) peak = std::max(peak, v);
    if (peak == 0.0) throw std::runtime_error("front speed: station recorded no signal");
    for (double& v : series) v /= peak;
  };
  normalize(sa);
  normalize(sb);

  const auto onset = [&](const std::vector<double>& series) {
    for (long i = 0; i < n; ++i)
      if (series[i] >= threshold) return i;
    throw std::runtime_error("front speed: no threshold crossing");
  };
  const long ia = onset(sa);
  const long ib = onset(sb);

  SpeedEstimate estimate;
  estimate.station_a = station_a;
  estimate.station_b = station_b;
  estimate.arrival_a = (ia + 1) * dt;
  estimate.arrival_b = (ib + 1) * dt;

  // Template: the normalized leading flank of station a, matched against
  // station b by normalized cross-correlation.
  const long wn = std::max<long>(2, static_cast<long>(std::lround(window / dt)));
  if (ia + wn >= n) throw std::runtime_error("front speed: station a flank truncated");
  double template_energy = 0.0;
  for (long k = 0; k <= wn; ++k) template_energy += sa[ia + k] * sa[ia + k];
  const long m_lo = std::max<long>(0, ib - 2 * wn);
  const long m_hi = std::min(n - wn - 1, ib + 2 * wn);
  if (m_lo > m_hi) throw std::runtime_error("front speed: station b flank truncated");
  long best_m = -1;
  double best_c = -2.0;
  std::vector<double> corr(m_hi - m_lo + 1, 0.0);
  for (long m = m_lo; m <= m_hi; ++m) {
    double dot = 0.0;
    double energy = 0.0;
    for (long k = 0; k <= wn; ++k) {
      dot += sa[ia + k] * sb[m + k];
      energy += sb[m + k] * sb[m + k];
    }
    const double c = dot / std::sqrt(template_energy * energy + 1e-300);
    corr[m - m_lo] = c;
    if (c > best_c) {
      best_m = m;
      best_c = c;
    }
  }
  double refined = static_cast<double>(best_m);
  if (best_m > m_lo && best_m < m_hi) {
    const double cm = corr[best_m - 1 - m_lo];
    const double c0 = corr[best_m - m_lo];
    const double cp = corr[best_m + 1 - m_lo];
    const double denom = cm - 2.0 * c0 + cp;
    if (denom < 0.0) refined += 0.5 * (cm - cp) / denom;
  }

  estimate.lag = (refined - ia) * dt;
  if (estimate.lag <= 0.0) throw std::runtime_error("front speed: non-positive lag");
  estimate.speed = (station_b - station_a) / estimate.lag;
  return estimate;
}

}  // namespace fracwave
