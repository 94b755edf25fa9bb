#pragma once

#include <cstdint>
#include <vector>

#include "fracwave/mesh.hpp"

namespace fracwave {

// Symmetric 2D tensor stored as (xx, yy, xy).
struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  double trace() const { return xx + yy; }
};

struct IsotropicElastic {
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;

  // Requires mu > 0, rho > 0 and 2*mu + d*lambda > 0.
  void validate(int dim = 2) const;

  double cp() const;  // sqrt((2*mu + lambda) / rho)
  double cs() const;  // sqrt(mu / rho)
  double zp() const;  // rho * cp
  double zs() const;  // rho * cs
};

// sigma = 2*mu*eps + lambda*tr(eps)*I
SymTensor2 apply_stiffness(const IsotropicElastic& mat, const SymTensor2& eps);
// eps = sigma/(2*mu) - lambda*tr(sigma)/(2*mu*(2*mu + d*lambda)) * I
SymTensor2 apply_compliance(const IsotropicElastic& mat, const SymTensor2& sigma, int dim = 2);

// Spatially varying degraded material: lambda and mu are scaled by the nodal
// field g = reg + (1 - reg) * s_inf interpolated bilinearly per cell, which
// keeps the coefficient continuous across faces; rho is never degraded.
class DegradedMaterialField {
 public:
  DegradedMaterialField() = default;
  DegradedMaterialField(const Mesh& mesh, const IsotropicElastic& base, double reg_factor);

  const Mesh& mesh() const { return *mesh_; }
  const IsotropicElastic& base() const { return base_; }
  double reg_factor() const { return reg_factor_; }
  std::uint64_t version() const { return version_; }
  const std::vector<double>& nodal_scale() const { return nodal_scale_; }

  // Stiffness scale factor g at reference point (xi, eta) of cell c.
  double scale(int c, double xi, double eta) const;
  IsotropicElastic at(int c, double xi, double eta) const;
  bool degraded() const { return degraded_; }

  friend DegradedMaterialField degrade(const Mesh& mesh, const IsotropicElastic& base,
                                       const std::vector<double>& s_inf, double reg_factor);

 private:
  const Mesh* mesh_ = nullptr;
  IsotropicElastic base_;
  double reg_factor_ = 1e-7;
  bool degraded_ = false;
  std::vector<double> nodal_scale_;  // per mesh vertex
  std::uint64_t version_ = 0;
};

// Builds the degraded field from the current nodal s_inf (one value per mesh vertex).
DegradedMaterialField degrade(const Mesh& mesh, const IsotropicElastic& base,
                              const std::vector<double>& s_inf, double reg_factor);

}  // namespace fracwave
