#include "fracwave/krylov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracwave {

namespace {

void check_op(const LinearOperator& op, const Eigen::VectorXd& rhs, const char* name) {
  if (!op.apply) throw std::invalid_argument(std::string(name) + ": operator has no apply");
  if (op.dim != rhs.size()) throw std::invalid_argument(std::string(name) + ": dimension mismatch");
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> gmres(const LinearOperator& op, const Eigen::VectorXd& rhs,
                                              const GmresOptions& options,
                                              const LinearOperator* precond) {
  check_op(op, rhs, "gmres");
  const Eigen::Index n = rhs.size();
  SolveReport report;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return {x, report};
  }

  const int restart = std::max(1, options.restart);
  Eigen::VectorXd r = rhs;  // x = 0 initially
  Eigen::VectorXd w(n), z(n);
  Eigen::MatrixXd V(n, restart + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
  Eigen::VectorXd cs(restart), sn(restart), g(restart + 1);

  double rnorm = bnorm;
  int total_iters = 0;
  bool converged = false;

  while (!converged && total_iters < options.max_iterations) {
    V.col(0) = r / rnorm;
    g.setZero();
    g[0] = rnorm;
    int m = 0;
    for (int j = 0; j < restart && total_iters < options.max_iterations; ++j) {
      if (precond) {
        precond->apply(V.col(j), z);
        op.apply(z, w);
      } else {
        op.apply(V.col(j), w);
      }
      // Arnoldi with modified Gram-Schmidt.
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V.col(i));
        w.noalias() -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      // Apply stored Givens rotations, then generate a new one.
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = H(j, j) / denom;
        sn[j] = H(j + 1, j) / denom;
      }
      H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++total_iters;
      ++m;
      const double res = std::abs(g[j + 1]);
      report.residual_history.push_back(res / bnorm);
      if (res <= options.rtol * bnorm) {
        converged = true;
        break;
      }
    }
    // Solve the least-squares system and update x.
    Eigen::VectorXd ym(m);
    for (int i = m - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < m; ++k) s -= H(i, k) * ym[k];
      ym[i] = s / H(i, i);
    }
    Eigen::VectorXd update = V.leftCols(m) * ym;
    if (precond) {
      precond->apply(update, z);
      x += z;
    } else {
      x += update;
    }
    op.apply(x, w);
    r = rhs - w;
    rnorm = r.norm();
    if (rnorm <= options.rtol * bnorm) converged = true;
  }

  report.iterations = total_iters;
  report.relative_residual = rnorm / bnorm;
  report.converged = converged && std::isfinite(rnorm);
  return {x, report};
}

std::pair<Eigen::VectorXd, SolveReport> cg(const LinearOperator& op, const Eigen::VectorXd& rhs,
                                           const CgOptions& options, const LinearOperator* precond) {
  check_op(op, rhs, "cg");
  const Eigen::Index n = rhs.size();
  SolveReport report;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return {x, report};
  }

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z(n);
  if (precond) {
    precond->apply(r, z);
  } else {
    z = r;
  }
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(n);
  double rz = r.dot(z);

  for (int it = 0; it < options.max_iterations; ++it) {
    op.apply(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;  // not SPD or breakdown
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    ++report.iterations;
    const double rnorm = r.norm();
    report.residual_history.push_back(rnorm / bnorm);
    if (rnorm <= options.rtol * bnorm) {
      report.converged = true;
      break;
    }
    if (precond) {
      precond->apply(r, z);
    } else {
      z = r;
    }
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  report.relative_residual = r.norm() / bnorm;
  report.converged = report.converged && std::isfinite(report.relative_residual);
  return {x, report};
}

}  // namespace fracwave
