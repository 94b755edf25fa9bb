#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fracwave/material.hpp"
#include "fracwave/mesh.hpp"

namespace fracwave {

// Discontinuous tensor-product Lagrange space of degree k for the first-order
// velocity-stress fields (vx, vy, sxx, syy, sxy). Basis nodes and volume
// quadrature collocate at the (k+1)-point Gauss grid per direction; face terms
// use (k+1)-point Gauss on each face. Cell loops own their output ranges
// (face terms are gathered from both sides), so they may run in any order;
// the shipped implementation runs them sequentially, which makes every apply
// bitwise deterministic.
class DGSpace {
 public:
  static constexpr int kFields = 5;
  static constexpr int kVx = 0, kVy = 1, kSxx = 2, kSyy = 3, kSxy = 4;

  DGSpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int np1() const { return np1_; }
  int nodes_per_cell() const { return npc_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(mesh_->num_cells()) * kFields * npc_; }

  Eigen::Index cell_offset(int cell) const { return static_cast<Eigen::Index>(cell) * kFields * npc_; }
  Eigen::Index dof(int cell, int field, int node) const {
    return cell_offset(cell) + static_cast<Eigen::Index>(field) * npc_ + node;
  }

  // Nodal interpolation of analytic fields.
  Eigen::VectorXd interpolate(
      const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& velocity,
      const std::function<SymTensor2(const Eigen::Vector2d&)>& stress) const;

  Eigen::Vector2d eval_velocity(const Eigen::VectorXd& y, int cell, double xi, double eta) const;
  SymTensor2 eval_stress(const Eigen::VectorXd& y, int cell, double xi, double eta) const;

  struct CellNodeGeom {
    double wJ;  // tensor Gauss weight times |det J|
    double jinv00, jinv01, jinv10, jinv11;
    double xi, eta;
    Eigen::Vector2d phys;
  };
  struct FaceSideData {
    std::vector<double> trace;  // nq x npc basis values, row-major by quad point
    std::vector<double> xi, eta;
  };
  struct FaceData {
    std::vector<double> weight;  // Gauss weight times face length
    std::vector<Eigen::Vector2d> phys;
    std::array<FaceSideData, 2> side;  // 0: cell_left, 1: cell_right
  };

  const CellNodeGeom& node_geom(int cell, int node) const { return cell_geom_[cell * npc_ + node]; }
  const FaceData& face_data(int f) const { return face_data_[f]; }
  const std::vector<double>& nodes1d() const { return nodes1d_; }
  // 1D collocation derivative matrix, diff1d[a*np1 + m] = l_m'(x_a).
  const std::vector<double>& diff1d() const { return diff1d_; }

  // Values of all 1D Lagrange basis functions at s.
  void lagrange_values(double s, double* vals) const;

 private:
  const Mesh* mesh_;
  int degree_;
  int np1_;
  int npc_;
  std::vector<double> nodes1d_, weights1d_, bary_;
  std::vector<double> diff1d_;
  std::vector<CellNodeGeom> cell_geom_;
  std::vector<FaceData> face_data_;
};

}  // namespace fracwave
