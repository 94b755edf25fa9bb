#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace fracwave {

// Matrix-free operator y = A(x); apply must not alias input and output.
struct LinearOperator {
  Eigen::Index dim = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // one entry per iteration, relative to |rhs|
};

// Restarted GMRES with right preconditioning, so the iteration residual is the
// residual of the original system. The final report re-evaluates the true
// residual with one extra operator apply. A zero right-hand side returns zero
// immediately with a converged report.
struct GmresOptions {
  double rtol = 1e-8;
  int max_iterations = 1000;
  int restart = 100;
};

std::pair<Eigen::VectorXd, SolveReport> gmres(const LinearOperator& op, const Eigen::VectorXd& rhs,
                                              const GmresOptions& options,
                                              const LinearOperator* precond = nullptr);

// Preconditioned conjugate gradients for SPD operators.
struct CgOptions {
  double rtol = 1e-10;
  int max_iterations = 10000;
};

std::pair<Eigen::VectorXd, SolveReport> cg(const LinearOperator& op, const Eigen::VectorXd& rhs,
                                           const CgOptions& options,
                                           const LinearOperator* precond = nullptr);

}  // namespace fracwave
