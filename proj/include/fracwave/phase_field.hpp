#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "fracwave/dg_space.hpp"
#include "fracwave/krylov.hpp"
#include "fracwave/mesh.hpp"

namespace fracwave {

// Largest in-plane principal stress of a symmetric 2D tensor.
double max_principal_stress(const SymTensor2& s);
// Plane-strain variant: also compares against the out-of-plane stress
// szz = nu * (sxx + syy); a negative nu falls back to the in-plane value.
double max_principal_stress(const SymTensor2& s, double plane_strain_nu);

struct PhaseFieldParams {
  double sigma_c = 1.0;   // critical stress of the fracture criterion
  double l_c = 0.1;       // crack regularization length
  double tau_r = 1.0;     // retardation time
  double m_geom = 1.0;    // scaling of the geometric (surface energy) force
  double s_min = 0.01;    // below this value a node is considered cracked
  double plane_strain_nu = -1.0;  // >= 0: include szz in the principal stress
  double cg_rtol = 1e-10;
  int cg_max_iterations = 10000;

  // Requires sigma_c, l_c, tau_r, m_geom > 0 and 0 < s_min < 1.
  void validate() const;
};

// Nodal phase field (1 = intact, 0 = fully cracked), its running infimum, and
// the indicator of the still-elastic node set {s_inf >= s_min}.
struct PhaseState {
  Eigen::VectorXd s;
  Eigen::VectorXd s_inf;
  std::vector<std::uint8_t> elastic_nodes;
  double time = 0.0;

  int num_elastic() const;
  int num_cracked() const { return static_cast<int>(elastic_nodes.size()) - num_elastic(); }
};

// Undamaged state: s = s_inf = 1 at every mesh vertex.
PhaseState initial_phase_state(const Mesh& mesh, double time = 0.0);

// Projection of a linear-solve candidate plus history tracking, nodewise:
// a node with previous s = 0 stays 0 (cracks are absorbing); values below
// s_min snap to 0; values above 1 clamp to 1; values in [s_min, 1) are kept.
// Then s_inf := min(s_inf_prev, s) and the elastic set is recomputed.
PhaseState project_and_track(const Eigen::VectorXd& candidate, const PhaseState& prev,
                             double s_min);

// Conforming bilinear solver for the relaxation equation
//   tau_r * ds/dt = -Y_el(sigma) + m_geom * ((1 - s) + l_c^2 * laplace s),
// discretized in time by implicit Euler:
//   (tau_r M + dt m_geom (M + l_c^2 K)) s^n = tau_r M s_prev + dt m_geom M 1 - dt L,
// with L_i = int Y_el(sigma_h) phi_i. The system is SPD and solved by
// Jacobi-preconditioned CG.
class PhaseField {
 public:
  PhaseField(const Mesh& mesh, const PhaseFieldParams& params);

  const Mesh& mesh() const { return *mesh_; }
  const PhaseFieldParams& params() const { return params_; }
  const Eigen::SparseMatrix<double>& mass() const { return mass_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }

  // Driving-force load vector; the stress is read off the collocation nodes of
  // the wave state y and tested with the bilinear hat functions.
  Eigen::VectorXd elastic_load(const DGSpace& space, const Eigen::VectorXd& y) const;
  // Largest principal stress over all collocation nodes (pilot monitoring).
  double peak_principal_stress(const DGSpace& space, const Eigen::VectorXd& y) const;

  // One implicit Euler candidate step (unprojected).
  std::pair<Eigen::VectorXd, SolveReport> step(const Eigen::VectorXd& s_prev,
                                               const Eigen::VectorXd& load_el, double dt) const;

 private:
  const Mesh* mesh_;
  PhaseFieldParams params_;
  Eigen::SparseMatrix<double> mass_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd mass_times_one_;
};

}  // namespace fracwave
