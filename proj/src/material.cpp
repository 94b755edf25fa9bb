#include "fracwave/material.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace fracwave {

namespace {
std::atomic<std::uint64_t> g_material_version{0};
}

void IsotropicElastic::validate(int dim) const {
  if (!(mu > 0.0)) throw std::invalid_argument("material: mu must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("material: rho must be positive");
  if (!(2.0 * mu + dim * lambda > 0.0))
    throw std::invalid_argument("material: 2*mu + d*lambda must be positive");
}

double IsotropicElastic::cp() const { return std::sqrt((2.0 * mu + lambda) / rho); }
double IsotropicElastic::cs() const { return std::sqrt(mu / rho); }
double IsotropicElastic::zp() const { return rho * cp(); }
double IsotropicElastic::zs() const { return rho * cs(); }

SymTensor2 apply_stiffness(const IsotropicElastic& mat, const SymTensor2& eps) {
  const double t = mat.lambda * eps.trace();
  return {2.0 * mat.mu * eps.xx + t, 2.0 * mat.mu * eps.yy + t, 2.0 * mat.mu * eps.xy};
}

SymTensor2 apply_compliance(const IsotropicElastic& mat, const SymTensor2& sigma, int dim) {
  const double a = 1.0 / (2.0 * mat.mu);
  const double b = mat.lambda / (2.0 * mat.mu * (2.0 * mat.mu + dim * mat.lambda));
  const double t = b * sigma.trace();
  return {a * sigma.xx - t, a * sigma.yy - t, a * sigma.xy};
}

DegradedMaterialField::DegradedMaterialField(const Mesh& mesh, const IsotropicElastic& base,
                                             double reg_factor)
    : mesh_(&mesh), base_(base), reg_factor_(reg_factor) {
  base_.validate();
  if (!(reg_factor > 0.0 && reg_factor <= 1.0))
    throw std::invalid_argument("material: reg_factor must be in (0, 1]");
  nodal_scale_.assign(mesh.num_vertices(), 1.0);
  version_ = ++g_material_version;
}

double DegradedMaterialField::scale(int c, double xi, double eta) const {
  if (!degraded_) return 1.0;
  const auto& cv = mesh_->cell_vertices(c);
  const double g0 = nodal_scale_[cv[0]], g1 = nodal_scale_[cv[1]];
  const double g2 = nodal_scale_[cv[2]], g3 = nodal_scale_[cv[3]];
  return g0 * (1 - xi) * (1 - eta) + g1 * xi * (1 - eta) + g2 * xi * eta + g3 * (1 - xi) * eta;
}

IsotropicElastic DegradedMaterialField::at(int c, double xi, double eta) const {
  const double g = scale(c, xi, eta);
  return {base_.lambda * g, base_.mu * g, base_.rho};
}

DegradedMaterialField degrade(const Mesh& mesh, const IsotropicElastic& base,
                              const std::vector<double>& s_inf, double reg_factor) {
  if (static_cast<int>(s_inf.size()) != mesh.num_vertices())
    throw std::invalid_argument("degrade: s_inf size must match vertex count");
  DegradedMaterialField out(mesh, base, reg_factor);
  for (std::size_t i = 0; i < s_inf.size(); ++i) {
    const double s = s_inf[i];
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("degrade: s_inf outside [0, 1]");
    out.nodal_scale_[i] = reg_factor + (1.0 - reg_factor) * s;
  }
  out.degraded_ = true;
  return out;
}

}  // namespace fracwave
