#include "fracwave/phase_field.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fracwave {

namespace {

// Bilinear hat functions in the vertex order (0,0), (1,0), (1,1), (0,1).
inline void q1_values(double xi, double eta, double* n) {
  n[0] = (1.0 - xi) * (1.0 - eta);
  n[1] = xi * (1.0 - eta);
  n[2] = xi * eta;
  n[3] = (1.0 - xi) * eta;
}

inline void q1_gradients(double xi, double eta, double (*g)[2]) {
  g[0][0] = -(1.0 - eta);
  g[0][1] = -(1.0 - xi);
  g[1][0] = 1.0 - eta;
  g[1][1] = -xi;
  g[2][0] = eta;
  g[2][1] = xi;
  g[3][0] = -eta;
  g[3][1] = 1.0 - xi;
}

}  // namespace

double max_principal_stress(const SymTensor2& s) {
  const double mean = 0.5 * (s.xx + s.yy);
  const double dev = 0.5 * (s.xx - s.yy);
  return mean + std::sqrt(dev * dev + s.xy * s.xy);
}

double max_principal_stress(const SymTensor2& s, double plane_strain_nu) {
  const double in_plane = max_principal_stress(s);
  if (plane_strain_nu < 0.0) return in_plane;
  return std::max(in_plane, plane_strain_nu * (s.xx + s.yy));
}

void PhaseFieldParams::validate() const {
  if (!(sigma_c > 0.0)) throw std::invalid_argument("phase field: sigma_c must be positive");
  if (!(l_c > 0.0)) throw std::invalid_argument("phase field: l_c must be positive");
  if (!(tau_r > 0.0)) throw std::invalid_argument("phase field: tau_r must be positive");
  if (!(m_geom > 0.0)) throw std::invalid_argument("phase field: m_geom must be positive");
  if (!(s_min > 0.0 && s_min < 1.0)) throw std::invalid_argument("phase field: s_min must be in (0, 1)");
  if (!(cg_rtol > 0.0)) throw std::invalid_argument("phase field: cg_rtol must be positive");
  if (cg_max_iterations < 1) throw std::invalid_argument("phase field: cg_max_iterations must be >= 1");
}

int PhaseState::num_elastic() const {
  int count = 0;
  for (const std::uint8_t e : elastic_nodes) count += e != 0;
  return count;
}

PhaseState initial_phase_state(const Mesh& mesh, double time) {
  PhaseState st;
  const int nv = mesh.num_vertices();
  st.s = Eigen::VectorXd::Ones(nv);
  st.s_inf = Eigen::VectorXd::Ones(nv);
  st.elastic_nodes.assign(static_cast<std::size_t>(nv), 1);
  st.time = time;
  return st;
}

PhaseState project_and_track(const Eigen::VectorXd& candidate, const PhaseState& prev,
                             double s_min) {
  const Eigen::Index n = candidate.size();
  if (prev.s.size() != n || prev.s_inf.size() != n ||
      static_cast<Eigen::Index>(prev.elastic_nodes.size()) != n) {
    throw std::invalid_argument("project_and_track: state size mismatch");
  }
  PhaseState out;
  out.s.resize(n);
  out.s_inf.resize(n);
  out.elastic_nodes.resize(static_cast<std::size_t>(n));
  out.time = prev.time;
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = candidate[i];
    if (prev.s[i] == 0.0 || v < s_min) {
      v = 0.0;
    } else if (v >= 1.0) {
      v = 1.0;
    }
    out.s[i] = v;
    out.s_inf[i] = std::min(prev.s_inf[i], v);
    out.elastic_nodes[static_cast<std::size_t>(i)] = out.s_inf[i] >= s_min ? 1 : 0;
  }
  return out;
}

PhaseField::PhaseField(const Mesh& mesh, const PhaseFieldParams& params)
    : mesh_(&mesh), params_(params) {
  params_.validate();
  const int nv = mesh.num_vertices();
  const QuadRule1D rule = gauss_legendre(2);
  std::vector<Eigen::Triplet<double>> mass_entries, stiff_entries;
  mass_entries.reserve(static_cast<std::size_t>(mesh.num_cells()) * 16);
  stiff_entries.reserve(static_cast<std::size_t>(mesh.num_cells()) * 16);
  double nval[4];
  double ngrad[4][2];
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::array<int, 4>& cv = mesh.cell_vertices(c);
    double me[4][4] = {};
    double ke[4][4] = {};
    for (int qj = 0; qj < 2; ++qj) {
      for (int qi = 0; qi < 2; ++qi) {
        const double xi = rule.points[qi];
        const double eta = rule.points[qj];
        const Eigen::Matrix2d J = mesh.cell_jacobian(c, xi, eta);
        const Eigen::Matrix2d Jinv = J.inverse();
        const double wJ = rule.weights[qi] * rule.weights[qj] * std::abs(J.determinant());
        q1_values(xi, eta, nval);
        q1_gradients(xi, eta, ngrad);
        double gx[4], gy[4];
        for (int k = 0; k < 4; ++k) {
          gx[k] = Jinv(0, 0) * ngrad[k][0] + Jinv(1, 0) * ngrad[k][1];
          gy[k] = Jinv(0, 1) * ngrad[k][0] + Jinv(1, 1) * ngrad[k][1];
        }
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            me[a][b] += wJ * nval[a] * nval[b];
            ke[a][b] += wJ * (gx[a] * gx[b] + gy[a] * gy[b]);
          }
        }
      }
    }
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        mass_entries.emplace_back(cv[a], cv[b], me[a][b]);
        stiff_entries.emplace_back(cv[a], cv[b], ke[a][b]);
      }
    }
  }
  mass_.resize(nv, nv);
  mass_.setFromTriplets(mass_entries.begin(), mass_entries.end());
  stiffness_.resize(nv, nv);
  stiffness_.setFromTriplets(stiff_entries.begin(), stiff_entries.end());
  mass_times_one_ = mass_ * Eigen::VectorXd::Ones(nv);
}

Eigen::VectorXd PhaseField::elastic_load(const DGSpace& space, const Eigen::VectorXd& y) const {
  if (&space.mesh() != mesh_) throw std::invalid_argument("elastic_load: space built on another mesh");
  if (y.size() != space.dim()) throw std::invalid_argument("elastic_load: state size mismatch");
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh_->num_vertices());
  const int npc = space.nodes_per_cell();
  double nval[4];
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const std::array<int, 4>& cv = mesh_->cell_vertices(c);
    const double* yc = y.data() + space.cell_offset(c);
    for (int n = 0; n < npc; ++n) {
      const SymTensor2 sig{yc[DGSpace::kSxx * npc + n], yc[DGSpace::kSyy * npc + n],
                           yc[DGSpace::kSxy * npc + n]};
      const double si = max_principal_stress(sig, params_.plane_strain_nu);
      const double yel = si / params_.sigma_c - 1.0;
      if (yel <= 0.0) continue;
      const auto& g = space.node_geom(c, n);
      q1_values(g.xi, g.eta, nval);
      for (int k = 0; k < 4; ++k) load[cv[k]] += g.wJ * yel * nval[k];
    }
  }
  return load;
}

double PhaseField::peak_principal_stress(const DGSpace& space, const Eigen::VectorXd& y) const {
  if (y.size() != space.dim()) throw std::invalid_argument("peak_principal_stress: size mismatch");
  const int npc = space.nodes_per_cell();
  double peak = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const double* yc = y.data() + space.cell_offset(c);
    for (int n = 0; n < npc; ++n) {
      const SymTensor2 sig{yc[DGSpace::kSxx * npc + n], yc[DGSpace::kSyy * npc + n],
                           yc[DGSpace::kSxy * npc + n]};
      peak = std::max(peak, max_principal_stress(sig, params_.plane_strain_nu));
    }
  }
  return peak;
}

std::pair<Eigen::VectorXd, SolveReport> PhaseField::step(const Eigen::VectorXd& s_prev,
                                                         const Eigen::VectorXd& load_el,
                                                         double dt) const {
  const int nv = mesh_->num_vertices();
  if (s_prev.size() != nv || load_el.size() != nv)
    throw std::invalid_argument("phase field step: size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("phase field step: dt must be positive");
  const double c_mass = params_.tau_r + dt * params_.m_geom;
  const double c_stiff = dt * params_.m_geom * params_.l_c * params_.l_c;
  const Eigen::SparseMatrix<double> system = c_mass * mass_ + c_stiff * stiffness_;
  const Eigen::VectorXd rhs = params_.tau_r * (mass_ * s_prev) +
                              dt * params_.m_geom * mass_times_one_ - dt * load_el;
  LinearOperator op;
  op.dim = nv;
  op.apply = [&system](const Eigen::VectorXd& x, Eigen::VectorXd& out) { out = system * x; };
  const Eigen::VectorXd diag = system.diagonal();
  LinearOperator prec;
  prec.dim = nv;
  prec.apply = [&diag](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out = x.cwiseQuotient(diag);
  };
  CgOptions opts;
  opts.rtol = params_.cg_rtol;
  opts.max_iterations = params_.cg_max_iterations;
  // Solve for the correction about s_prev: when the system is already at its
  // fixed point (unloaded, fully intact state) the defect is exactly zero and
  // s_prev is returned unchanged, so equilibrium steps stay bitwise stationary.
  const Eigen::VectorXd defect = rhs - system * s_prev;
  auto [delta, report] = cg(op, defect, opts, &prec);
  return {s_prev + delta, report};
}

}  // namespace fracwave
