#include "fracwave/dg_space.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace fracwave {

DGSpace::DGSpace(const Mesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree < 1 || degree > 4) throw std::invalid_argument("DGSpace: degree must be in [1, 4]");
  np1_ = degree + 1;
  npc_ = np1_ * np1_;

  const QuadRule1D rule = gauss_legendre(np1_);
  nodes1d_ = rule.points;
  weights1d_ = rule.weights;

  // Barycentric weights for the 1D nodes.
  bary_.assign(np1_, 1.0);
  for (int i = 0; i < np1_; ++i) {
    for (int j = 0; j < np1_; ++j) {
      if (j != i) bary_[i] /= (nodes1d_[i] - nodes1d_[j]);
    }
  }

  // Collocation derivative matrix.
  diff1d_.assign(np1_ * np1_, 0.0);
  for (int a = 0; a < np1_; ++a) {
    double diag = 0.0;
    for (int m = 0; m < np1_; ++m) {
      if (m == a) continue;
      const double d = (bary_[m] / bary_[a]) / (nodes1d_[a] - nodes1d_[m]);
      diff1d_[a * np1_ + m] = d;
      diag -= d;
    }
    diff1d_[a * np1_ + a] = diag;
  }

  // Volume geometry at the collocation nodes.
  const int ncells = mesh.num_cells();
  cell_geom_.resize(static_cast<std::size_t>(ncells) * npc_);
  for (int c = 0; c < ncells; ++c) {
    for (int j = 0; j < np1_; ++j) {
      for (int i = 0; i < np1_; ++i) {
        const double xi = nodes1d_[i], eta = nodes1d_[j];
        const Eigen::Matrix2d J = mesh.cell_jacobian(c, xi, eta);
        const double det = J.determinant();
        const Eigen::Matrix2d Jinv = J.inverse();
        CellNodeGeom g;
        g.wJ = weights1d_[i] * weights1d_[j] * std::abs(det);
        g.jinv00 = Jinv(0, 0);
        g.jinv01 = Jinv(0, 1);
        g.jinv10 = Jinv(1, 0);
        g.jinv11 = Jinv(1, 1);
        g.xi = xi;
        g.eta = eta;
        g.phys = mesh.cell_point(c, xi, eta);
        cell_geom_[static_cast<std::size_t>(c) * npc_ + j * np1_ + i] = g;
      }
    }
  }

  // Face traces: basis values of each adjacent cell at the face Gauss points.
  static const std::array<Eigen::Vector2d, 4> kRefCorners = {
      Eigen::Vector2d{0, 0}, Eigen::Vector2d{1, 0}, Eigen::Vector2d{1, 1}, Eigen::Vector2d{0, 1}};
  face_data_.resize(mesh.num_faces());
  std::vector<double> vx(np1_), vy(np1_);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& fc = mesh.face(f);
    FaceData& fd = face_data_[f];
    fd.weight.resize(np1_);
    fd.phys.resize(np1_);
    const Eigen::Vector2d pa = mesh.vertex(fc.vertices[0]);
    const Eigen::Vector2d pb = mesh.vertex(fc.vertices[1]);
    for (int q = 0; q < np1_; ++q) {
      fd.weight[q] = weights1d_[q] * fc.length;
      fd.phys[q] = pa * (1.0 - nodes1d_[q]) + pb * nodes1d_[q];
    }
    const int nsides = fc.is_boundary() ? 1 : 2;
    for (int s = 0; s < nsides; ++s) {
      const int cell = (s == 0) ? fc.cell_left : fc.cell_right;
      const auto& cv = mesh.cell_vertices(cell);
      int ia = -1, ib = -1;
      for (int k = 0; k < 4; ++k) {
        if (cv[k] == fc.vertices[0]) ia = k;
        if (cv[k] == fc.vertices[1]) ib = k;
      }
      if (ia < 0 || ib < 0) throw std::logic_error("DGSpace: face vertices not found in cell");
      FaceSideData& sd = fd.side[s];
      sd.trace.resize(static_cast<std::size_t>(np1_) * npc_);
      sd.xi.resize(np1_);
      sd.eta.resize(np1_);
      for (int q = 0; q < np1_; ++q) {
        const double t = nodes1d_[q];
        const Eigen::Vector2d ref = kRefCorners[ia] * (1.0 - t) + kRefCorners[ib] * t;
        sd.xi[q] = ref.x();
        sd.eta[q] = ref.y();
        lagrange_values(ref.x(), vx.data());
        lagrange_values(ref.y(), vy.data());
        double* row = sd.trace.data() + static_cast<std::size_t>(q) * npc_;
        for (int j = 0; j < np1_; ++j)
          for (int i = 0; i < np1_; ++i) row[j * np1_ + i] = vx[i] * vy[j];
      }
    }
  }
}

void DGSpace::lagrange_values(double s, double* vals) const {
  for (int i = 0; i < np1_; ++i) {
    if (s == nodes1d_[i]) {
      for (int j = 0; j < np1_; ++j) vals[j] = (i == j) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (int i = 0; i < np1_; ++i) {
    vals[i] = bary_[i] / (s - nodes1d_[i]);
    denom += vals[i];
  }
  for (int i = 0; i < np1_; ++i) vals[i] /= denom;
}

Eigen::VectorXd DGSpace::interpolate(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& velocity,
    const std::function<SymTensor2(const Eigen::Vector2d&)>& stress) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim());
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    for (int n = 0; n < npc_; ++n) {
      const Eigen::Vector2d& x = node_geom(c, n).phys;
      const Eigen::Vector2d v = velocity(x);
      const SymTensor2 s = stress(x);
      y[dof(c, kVx, n)] = v.x();
      y[dof(c, kVy, n)] = v.y();
      y[dof(c, kSxx, n)] = s.xx;
      y[dof(c, kSyy, n)] = s.yy;
      y[dof(c, kSxy, n)] = s.xy;
    }
  }
  return y;
}

Eigen::Vector2d DGSpace::eval_velocity(const Eigen::VectorXd& y, int cell, double xi,
                                       double eta) const {
  std::vector<double> vx(np1_), vy(np1_);
  lagrange_values(xi, vx.data());
  lagrange_values(eta, vy.data());
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int j = 0; j < np1_; ++j) {
    for (int i = 0; i < np1_; ++i) {
      const double w = vx[i] * vy[j];
      const int n = j * np1_ + i;
      out.x() += w * y[dof(cell, kVx, n)];
      out.y() += w * y[dof(cell, kVy, n)];
    }
  }
  return out;
}

SymTensor2 DGSpace::eval_stress(const Eigen::VectorXd& y, int cell, double xi, double eta) const {
  std::vector<double> vx(np1_), vy(np1_);
  lagrange_values(xi, vx.data());
  lagrange_values(eta, vy.data());
  SymTensor2 out;
  for (int j = 0; j < np1_; ++j) {
    for (int i = 0; i < np1_; ++i) {
      const double w = vx[i] * vy[j];
      const int n = j * np1_ + i;
      out.xx += w * y[dof(cell, kSxx, n)];
      out.yy += w * y[dof(cell, kSyy, n)];
      out.xy += w * y[dof(cell, kSxy, n)];
    }
  }
  return out;
}

}  // namespace fracwave
