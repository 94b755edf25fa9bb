#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fracwave/dg_space.hpp"
#include "fracwave/krylov.hpp"

namespace fracwave {

// Smooth compactly supported pressure pulse applied on the short ends:
// g_N(t) = a(cp*t - shift) * n with a(s) = A * exp(-1/(w^2 - s^2)) for
// |s| < w and zero otherwise; the load is switched off for t >= t_init.
struct BoundaryPulse {
  double amplitude_left = 0.0;
  double amplitude_right = 0.0;
  double width_left = 0.3;
  double width_right = 0.3;
  double shift_left = 0.0;
  double shift_right = 0.0;
  double t_init = 0.0;
  double cp = 1.0;  // base-material P speed entering the pulse argument

  double value(BoundarySide side, double t) const;
};

using TractionFun =
    std::function<Eigen::Vector2d(const Eigen::Vector2d& x, const Eigen::Vector2d& n, double t)>;
using VelocityFun = std::function<Eigen::Vector2d(const Eigen::Vector2d& x, double t)>;
using VolumeForceFun = std::function<Eigen::Vector2d(const Eigen::Vector2d& x, double t)>;

// Mass form: (rho v, w) + (C(t)^-1 sigma, eta). Returns the tested vector.
void apply_mass(const DGSpace& space, const DegradedMaterialField& material,
                const Eigen::VectorXd& y, Eigen::VectorXd& out);
Eigen::VectorXd apply_mass(const DGSpace& space, const DegradedMaterialField& material,
                           const Eigen::VectorXd& y);
// Exact inverse of the mass form (block-diagonal per node).
Eigen::VectorXd mass_solve(const DGSpace& space, const DegradedMaterialField& material,
                           const Eigen::VectorXd& rhs);

// Full upwind spatial operator: strong volume terms (div sigma, w) + (eps(v), eta)
// plus impedance-weighted Riemann flux corrections on faces, split into normal
// (P) and tangential (S) channels. Boundary faces use mirror ghost states:
// traction faces (Neumann and Free tags) reflect the traction, velocity faces
// (Dirichlet tag) reflect the velocity. -A is positive semidefinite.
void apply_upwind(const DGSpace& space, const DegradedMaterialField& material,
                  const Eigen::VectorXd& y, Eigen::VectorXd& out);
Eigen::VectorXd apply_upwind(const DGSpace& space, const DegradedMaterialField& material,
                             const Eigen::VectorXd& y);

// Load vector: boundary data tested with the impedance-weighted combinations
// matching the flux, plus an optional volume force.
Eigen::VectorXd assemble_load(const DGSpace& space, const DegradedMaterialField& material,
                              const BoundaryPulse& pulse, double t);
Eigen::VectorXd assemble_load(const DGSpace& space, const DegradedMaterialField& material,
                              const TractionFun& neumann_data, const VelocityFun& dirichlet_data,
                              const VolumeForceFun& volume_force, double t);

// E = 1/2 (rho |v|^2 + sigma : C(t)^-1 sigma) integrated by the space rule;
// equals 1/2 y . apply_mass(y).
double energy(const DGSpace& space, const DegradedMaterialField& material,
              const Eigen::VectorXd& y);

// Dense intra-cell block of (M - gamma_dt * A) for preconditioning.
Eigen::MatrixXd assemble_cell_block(const DGSpace& space, const DegradedMaterialField& material,
                                    double gamma_dt, int cell);

// Inverse of the cell-diagonal blocks of (M - gamma_dt * A); factorized once
// at construction, applied per cell.
class BlockJacobi {
 public:
  BlockJacobi(const DGSpace& space, const DegradedMaterialField& material, double gamma_dt);

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;
  LinearOperator as_operator() const;

 private:
  const DGSpace* space_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

struct WaveStepResult {
  Eigen::VectorXd state;
  SolveReport report;
};

// Implicit midpoint step for the elastic phase:
// (M - dt/2 A) y_new = (M + dt/2 A) y_old + dt b(t_old + dt/2).
WaveStepResult midpoint_step(const DGSpace& space, const DegradedMaterialField& material,
                             const Eigen::VectorXd& y_old, double t_old, double dt,
                             const Eigen::VectorXd& load_mid, const GmresOptions& options,
                             const BlockJacobi* precond);

// Implicit Euler step for material-change (dissipative) steps:
// (M_new - dt A_new) y_new = M_old y_old + dt b_new(t_old + dt).
WaveStepResult euler_step(const DGSpace& space, const DegradedMaterialField& material_new,
                          const DegradedMaterialField& material_old, const Eigen::VectorXd& y_old,
                          double t_old, double dt, const Eigen::VectorXd& load_new,
                          const GmresOptions& options, const BlockJacobi* precond);

}  // namespace fracwave
