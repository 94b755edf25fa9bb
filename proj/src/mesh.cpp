#include "fracwave/mesh.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracwave {

namespace {

int checked_extent_cells(double extent, double h, const char* which) {
  if (extent <= 0.0) throw std::invalid_argument(std::string("build_mesh: non-positive ") + which + " extent");
  const double cells = extent / h;
  const int n = static_cast<int>(std::llround(cells));
  if (n < 1 || std::abs(cells - n) > 1e-9 * std::max(1.0, cells)) {
    throw std::invalid_argument(std::string("build_mesh: ") + which +
                                " extent is not a positive multiple of h=2^-level");
  }
  return n;
}

}  // namespace

std::array<Eigen::Vector2d, 4> Mesh::corners(int c) const {
  const auto& cv = cells_.at(c);
  return {vertices_[cv[0]], vertices_[cv[1]], vertices_[cv[2]], vertices_[cv[3]]};
}

Eigen::Vector2d Mesh::cell_point(int c, double xi, double eta) const {
  const auto p = corners(c);
  return p[0] * ((1 - xi) * (1 - eta)) + p[1] * (xi * (1 - eta)) + p[2] * (xi * eta) +
         p[3] * ((1 - xi) * eta);
}

Eigen::Matrix2d Mesh::cell_jacobian(int c, double xi, double eta) const {
  const auto p = corners(c);
  const Eigen::Vector2d dxi = (p[1] - p[0]) * (1 - eta) + (p[2] - p[3]) * eta;
  const Eigen::Vector2d deta = (p[3] - p[0]) * (1 - xi) + (p[2] - p[1]) * xi;
  Eigen::Matrix2d J;
  J.col(0) = dxi;
  J.col(1) = deta;
  return J;
}

Eigen::Vector2d Mesh::cell_ref_point(int c, double xi, double eta) const {
  const auto& cv = cells_.at(c);
  const Eigen::Vector2d r0 = vertices_ref_[cv[0]];
  const Eigen::Vector2d r2 = vertices_ref_[cv[2]];
  return {r0.x() + xi * (r2.x() - r0.x()), r0.y() + eta * (r2.y() - r0.y())};
}

Quadrature Mesh::cell_quadrature(int c, int npoints_per_dir) const {
  if (c < 0 || c >= num_cells()) throw std::out_of_range("cell_quadrature: unknown cell index");
  const QuadRule1D rule = gauss_legendre(npoints_per_dir);
  Quadrature q;
  q.points.reserve(npoints_per_dir * npoints_per_dir);
  q.weights.reserve(npoints_per_dir * npoints_per_dir);
  for (int j = 0; j < npoints_per_dir; ++j) {
    for (int i = 0; i < npoints_per_dir; ++i) {
      const double xi = rule.points[i], eta = rule.points[j];
      q.points.push_back(cell_point(c, xi, eta));
      q.weights.push_back(rule.weights[i] * rule.weights[j] *
                          std::abs(cell_jacobian(c, xi, eta).determinant()));
    }
  }
  return q;
}

Quadrature Mesh::face_quadrature(int f, int npoints) const {
  if (f < 0 || f >= num_faces()) throw std::out_of_range("face_quadrature: unknown face index");
  const Face& fc = faces_[f];
  const Eigen::Vector2d a = vertices_[fc.vertices[0]];
  const Eigen::Vector2d b = vertices_[fc.vertices[1]];
  const QuadRule1D rule = gauss_legendre(npoints);
  Quadrature q;
  q.points.reserve(npoints);
  q.weights.reserve(npoints);
  for (int i = 0; i < npoints; ++i) {
    q.points.push_back(a + rule.points[i] * (b - a));
    q.weights.push_back(rule.weights[i] * fc.length);
  }
  return q;
}

double Mesh::cell_area(int c) const {
  // |det J| is affine on [0,1]^2 for a bilinear cell, so 2x2 Gauss is exact.
  const Quadrature q = cell_quadrature(c, 2);
  double a = 0.0;
  for (double w : q.weights) a += w;
  return a;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) a += cell_area(c);
  return a;
}

Mesh build_mesh(const GeometryMap& map, int level, const std::array<BoundaryTag, 4>& side_tags) {
  if (level < 0 || level > 14) throw std::invalid_argument("build_mesh: level out of range [0, 14]");
  const double h = std::ldexp(1.0, -level);
  Mesh mesh;
  mesh.map_ = map;
  mesh.level_ = level;
  mesh.side_tags_ = side_tags;
  const int nx = mesh.nx_ = checked_extent_cells(map.x1_max - map.x1_min, h, "x1");
  const int ny = mesh.ny_ = checked_extent_cells(map.x2_max - map.x2_min, h, "x2");

  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  const auto cid = [nx](int i, int j) { return j * nx + i; };

  mesh.vertices_.resize((nx + 1) * (ny + 1));
  mesh.vertices_ref_.resize((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x1 = map.x1_min + i * h;
      const double x2 = map.x2_min + j * h;
      mesh.vertices_ref_[vid(i, j)] = {x1, x2};
      mesh.vertices_[vid(i, j)] = map(x1, x2);
    }
  }

  mesh.cells_.resize(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.cells_[cid(i, j)] = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};

  mesh.cell_faces_.assign(nx * ny, {-1, -1, -1, -1});
  mesh.faces_.reserve((nx + 1) * ny + nx * (ny + 1));

  const auto centroid = [&mesh](int c) {
    const auto& cv = mesh.cells_[c];
    return 0.25 * (mesh.vertices_[cv[0]] + mesh.vertices_[cv[1]] + mesh.vertices_[cv[2]] +
                   mesh.vertices_[cv[3]]);
  };

  const auto push_face = [&](int va, int vb, int cl, int cr, BoundarySide side) {
    Face f;
    f.vertices = {va, vb};
    f.cell_left = cl;
    f.cell_right = cr;
    f.side = side;
    switch (side) {
      case BoundarySide::Left: f.tag = side_tags[0]; break;
      case BoundarySide::Right: f.tag = side_tags[1]; break;
      case BoundarySide::Bottom: f.tag = side_tags[2]; break;
      case BoundarySide::Top: f.tag = side_tags[3]; break;
      case BoundarySide::None: break;
    }
    const Eigen::Vector2d e = mesh.vertices_[vb] - mesh.vertices_[va];
    f.length = e.norm();
    if (!(f.length > 0.0)) throw std::invalid_argument("build_mesh: map produced a degenerate face");
    Eigen::Vector2d n(e.y(), -e.x());
    n /= f.length;
    const Eigen::Vector2d mid = 0.5 * (mesh.vertices_[va] + mesh.vertices_[vb]);
    if (n.dot(mid - centroid(cl)) < 0.0) n = -n;
    f.normal = n;
    const int id = static_cast<int>(mesh.faces_.size());
    mesh.faces_.push_back(f);
    return id;
  };

  // Vertical faces (between columns), bottom-to-top vertex order.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const int cl = (i > 0) ? cid(i - 1, j) : cid(0, j);
      const int cr = (i > 0 && i < nx) ? cid(i, j) : -1;
      const BoundarySide side =
          (i == 0) ? BoundarySide::Left : (i == nx) ? BoundarySide::Right : BoundarySide::None;
      const int id = push_face(vid(i, j), vid(i, j + 1), cl, cr, side);
      if (i > 0) mesh.cell_faces_[cid(i - 1, j)][1] = id;  // right edge of west cell
      if (i < nx) mesh.cell_faces_[cid(i, j)][3] = id;     // left edge of east cell
    }
  }
  // Horizontal faces (between rows), left-to-right vertex order.
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int cl = (j > 0) ? cid(i, j - 1) : cid(i, 0);
      const int cr = (j > 0 && j < ny) ? cid(i, j) : -1;
      const BoundarySide side =
          (j == 0) ? BoundarySide::Bottom : (j == ny) ? BoundarySide::Top : BoundarySide::None;
      const int id = push_face(vid(i, j), vid(i + 1, j), cl, cr, side);
      if (j > 0) mesh.cell_faces_[cid(i, j - 1)][2] = id;  // top edge of south cell
      if (j < ny) mesh.cell_faces_[cid(i, j)][0] = id;     // bottom edge of north cell
    }
  }

  // Reject maps that fold cells over.
  const QuadRule1D probe = gauss_legendre(3);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (double xi : probe.points) {
      for (double eta : probe.points) {
        if (mesh.cell_jacobian(c, xi, eta).determinant() <= 0.0) {
          throw std::invalid_argument("build_mesh: map produced a non-positive Jacobian in cell " +
                                      std::to_string(c));
        }
      }
    }
  }
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  // New mid-edge and mid-cell vertices come from the geometry map applied to
  // the refined reference grid, which is exactly the next-level build.
  return build_mesh(mesh.map(), mesh.level() + 1, mesh.side_tags());
}

}  // namespace fracwave
