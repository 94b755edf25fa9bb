#pragma once

#include <Eigen/Core>
#include <vector>

namespace fracwave {

// Smooth reference-to-physical maps. The mesh applies a map only to vertex
// positions; element geometry stays piecewise bilinear.
struct GeometryMap {
  enum class Kind { Rectangle, CurvedBar };

  Kind kind = Kind::Rectangle;
  // Reference domain (x1_min, x1_max) x (x2_min, x2_max).
  double x1_min = 0.0;
  double x1_max = 1.0;
  double x2_min = 0.0;
  double x2_max = 1.0;

  Eigen::Vector2d operator()(double x1, double x2) const;
  // Analytic Jacobian of the smooth map (not of the bilinear cells).
  Eigen::Matrix2d jacobian(double x1, double x2) const;

  static GeometryMap unit_square();
  static GeometryMap rectangle(double x1_min, double x1_max, double x2_min, double x2_max);
  // Bar bent along a cosine arc; reference cross-section is a config parameter.
  static GeometryMap curved_bar(double x2_min = -0.03125, double x2_max = 0.03125);
};

// Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
struct QuadRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

QuadRule1D gauss_legendre(int npoints);

}  // namespace fracwave
