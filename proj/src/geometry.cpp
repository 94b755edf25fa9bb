#include "fracwave/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracwave {

Eigen::Vector2d GeometryMap::operator()(double x1, double x2) const {
  switch (kind) {
    case Kind::Rectangle:
      return {x1, x2};
    case Kind::CurvedBar: {
      const double a = 0.5 * x1 * std::numbers::pi;
      const double s = std::sin(a);
      const double c = std::cos(a);
      return {x1 + x2 * s, (1.0 + x2) * c};
    }
  }
  throw std::logic_error("unknown geometry kind");
}

Eigen::Matrix2d GeometryMap::jacobian(double x1, double x2) const {
  Eigen::Matrix2d J;
  switch (kind) {
    case Kind::Rectangle:
      J.setIdentity();
      return J;
    case Kind::CurvedBar: {
      const double a = 0.5 * x1 * std::numbers::pi;
      const double s = std::sin(a);
      const double c = std::cos(a);
      const double da = 0.5 * std::numbers::pi;
      J(0, 0) = 1.0 + x2 * da * c;
      J(0, 1) = s;
      J(1, 0) = -(1.0 + x2) * da * s;
      J(1, 1) = c;
      return J;
    }
  }
  throw std::logic_error("unknown geometry kind");
}

GeometryMap GeometryMap::unit_square() { return rectangle(0.0, 1.0, 0.0, 1.0); }

GeometryMap GeometryMap::rectangle(double x1_min, double x1_max, double x2_min, double x2_max) {
  GeometryMap m;
  m.kind = Kind::Rectangle;
  m.x1_min = x1_min;
  m.x1_max = x1_max;
  m.x2_min = x2_min;
  m.x2_max = x2_max;
  return m;
}

GeometryMap GeometryMap::curved_bar(double x2_min, double x2_max) {
  GeometryMap m;
  m.kind = Kind::CurvedBar;
  m.x1_min = -0.5;
  m.x1_max = 0.5;
  m.x2_min = x2_min;
  m.x2_max = x2_max;
  return m;
}

QuadRule1D gauss_legendre(int npoints) {
  if (npoints < 1 || npoints > 64) throw std::invalid_argument("gauss_legendre: npoints out of range");
  QuadRule1D rule;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  const int n = npoints;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from a Chebyshev initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // Map from [-1, 1] to [0, 1]; symmetric counterpart filled in directly.
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace fracwave
