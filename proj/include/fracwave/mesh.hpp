#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "fracwave/geometry.hpp"

namespace fracwave {

enum class BoundaryTag { Free, Neumann, Dirichlet };
enum class BoundarySide { Left, Right, Bottom, Top, None };

struct Face {
  int cell_left = -1;
  int cell_right = -1;  // -1 on the boundary
  std::array<int, 2> vertices{-1, -1};
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // unit, outward from cell_left
  double length = 0.0;
  BoundaryTag tag = BoundaryTag::Free;
  BoundarySide side = BoundarySide::None;

  bool is_boundary() const { return cell_right < 0; }
};

// Points and already-scaled weights (cell: w*|det J|, face: w*|face|).
struct Quadrature {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
};

// Structured quadrilateral mesh over a mapped reference rectangle.
// Cells are bilinear images of [0,1]^2; only vertices see the geometry map.
class Mesh {
 public:
  Mesh() = default;

  const GeometryMap& map() const { return map_; }
  int level() const { return level_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Eigen::Vector2d& vertex(int v) const { return vertices_.at(v); }
  const Eigen::Vector2d& vertex_ref(int v) const { return vertices_ref_.at(v); }
  const std::array<int, 4>& cell_vertices(int c) const { return cells_.at(c); }
  const Face& face(int f) const { return faces_.at(f); }
  // Face ids in local edge order bottom, right, top, left.
  const std::array<int, 4>& cell_faces(int c) const { return cell_faces_.at(c); }
  const std::array<BoundaryTag, 4>& side_tags() const { return side_tags_; }

  // Bilinear map of cell c at reference point (xi, eta) in [0,1]^2.
  Eigen::Vector2d cell_point(int c, double xi, double eta) const;
  Eigen::Matrix2d cell_jacobian(int c, double xi, double eta) const;
  // Reference-rectangle coordinates of the same point (affine per cell).
  Eigen::Vector2d cell_ref_point(int c, double xi, double eta) const;

  Quadrature cell_quadrature(int c, int npoints_per_dir) const;
  Quadrature face_quadrature(int f, int npoints) const;

  double cell_area(int c) const;
  double total_area() const;

  friend Mesh build_mesh(const GeometryMap& map, int level,
                         const std::array<BoundaryTag, 4>& side_tags);

 private:
  GeometryMap map_;
  int level_ = 0;
  int nx_ = 0, ny_ = 0;
  std::array<BoundaryTag, 4> side_tags_{BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Free,
                                        BoundaryTag::Free};
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Eigen::Vector2d> vertices_ref_;
  std::vector<std::array<int, 4>> cells_;  // counterclockwise corners
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> cell_faces_;

  std::array<Eigen::Vector2d, 4> corners(int c) const;
};

// Side tag order: left, right, bottom, top.
Mesh build_mesh(const GeometryMap& map, int level,
                const std::array<BoundaryTag, 4>& side_tags = {BoundaryTag::Free, BoundaryTag::Free,
                                                               BoundaryTag::Free, BoundaryTag::Free});

// Splits every cell in four; equivalent to building at level+1.
Mesh refine_uniform(const Mesh& mesh);

}  // namespace fracwave
