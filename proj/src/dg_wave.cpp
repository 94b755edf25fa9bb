#include "fracwave/dg_wave.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracwave {

namespace {

constexpr int kF = DGSpace::kFields;

struct MassCoefs {
  double rho;  // velocity weight
  double a, b;  // compliance: diag a-b / off-diag -b on the normal block, 2a shear
};

inline MassCoefs mass_coefs(const IsotropicElastic& base, double scale) {
  const double lam = base.lambda * scale;
  const double mu2 = 2.0 * base.mu * scale;
  return {base.rho, 1.0 / mu2, lam / (mu2 * (mu2 + 2.0 * lam))};
}

// Tested mass form of one cell's coefficients, accumulated into out (5*npc).
void mass_cell(const DGSpace& sp, const DegradedMaterialField& mat, int cell, const double* xc,
               double* out) {
  const int npc = sp.nodes_per_cell();
  const IsotropicElastic& base = mat.base();
  const bool deg = mat.degraded();
  for (int n = 0; n < npc; ++n) {
    const auto& g = sp.node_geom(cell, n);
    const MassCoefs c = mass_coefs(base, deg ? mat.scale(cell, g.xi, g.eta) : 1.0);
    const double wJ = g.wJ;
    const double sxx = xc[DGSpace::kSxx * npc + n];
    const double syy = xc[DGSpace::kSyy * npc + n];
    const double tr = sxx + syy;
    out[DGSpace::kVx * npc + n] += wJ * c.rho * xc[DGSpace::kVx * npc + n];
    out[DGSpace::kVy * npc + n] += wJ * c.rho * xc[DGSpace::kVy * npc + n];
    out[DGSpace::kSxx * npc + n] += wJ * (c.a * sxx - c.b * tr);
    out[DGSpace::kSyy * npc + n] += wJ * (c.a * syy - c.b * tr);
    out[DGSpace::kSxy * npc + n] += wJ * 2.0 * c.a * xc[DGSpace::kSxy * npc + n];
  }
}

// Tested upwind spatial form of one cell, accumulated into out (5*npc).
// With x_global null, interior neighbor traces are taken as zero, which yields
// the intra-cell block used by the preconditioner.
void upwind_cell(const DGSpace& sp, const DegradedMaterialField& mat, int cell, const double* xc,
                 const Eigen::VectorXd* x_global, double* out) {
  const int np1 = sp.np1();
  const int npc = sp.nodes_per_cell();
  const std::vector<double>& D = sp.diff1d();
  const Mesh& mesh = sp.mesh();
  const IsotropicElastic& base = mat.base();
  const bool deg = mat.degraded();
  const double zp0 = base.zp();
  const double zs0 = base.zs();

  // Strong volume terms: (div sigma, w) and (eps(v), eta).
  for (int b = 0; b < np1; ++b) {
    for (int a = 0; a < np1; ++a) {
      const int n = b * np1 + a;
      double dxi[kF] = {0, 0, 0, 0, 0};
      double deta[kF] = {0, 0, 0, 0, 0};
      for (int m = 0; m < np1; ++m) {
        const double da = D[a * np1 + m];
        const double db = D[b * np1 + m];
        for (int fi = 0; fi < kF; ++fi) {
          dxi[fi] += da * xc[fi * npc + b * np1 + m];
          deta[fi] += db * xc[fi * npc + m * np1 + a];
        }
      }
      const auto& g = sp.node_geom(cell, n);
      double dx[kF], dy[kF];
      for (int fi = 0; fi < kF; ++fi) {
        dx[fi] = g.jinv00 * dxi[fi] + g.jinv10 * deta[fi];
        dy[fi] = g.jinv01 * dxi[fi] + g.jinv11 * deta[fi];
      }
      const double wJ = g.wJ;
      out[DGSpace::kVx * npc + n] += wJ * (dx[DGSpace::kSxx] + dy[DGSpace::kSxy]);
      out[DGSpace::kVy * npc + n] += wJ * (dx[DGSpace::kSxy] + dy[DGSpace::kSyy]);
      out[DGSpace::kSxx * npc + n] += wJ * dx[DGSpace::kVx];
      out[DGSpace::kSyy * npc + n] += wJ * dy[DGSpace::kVy];
      out[DGSpace::kSxy * npc + n] += wJ * (dy[DGSpace::kVx] + dx[DGSpace::kVy]);
    }
  }

  // Face corrections, gathered into the owning cell's rows only.
  const std::array<int, 4>& cf = mesh.cell_faces(cell);
  for (int e = 0; e < 4; ++e) {
    const int f = cf[e];
    const Face& fc = mesh.face(f);
    const int side = (fc.cell_left == cell) ? 0 : 1;
    const double sgn = (side == 0) ? 1.0 : -1.0;
    const double nx = sgn * fc.normal.x();
    const double ny = sgn * fc.normal.y();
    const double tx = -ny, ty = nx;
    const DGSpace::FaceData& fd = sp.face_data(f);
    const DGSpace::FaceSideData& own = fd.side[side];
    const double* nb = nullptr;
    const double* nb_tr = nullptr;
    if (!fc.is_boundary() && x_global) {
      const int other = (side == 0) ? fc.cell_right : fc.cell_left;
      nb = x_global->data() + sp.cell_offset(other);
      nb_tr = fd.side[1 - side].trace.data();
    }
    const int nq = static_cast<int>(fd.weight.size());
    for (int q = 0; q < nq; ++q) {
      const double* tr = own.trace.data() + static_cast<std::size_t>(q) * npc;
      double uo[kF] = {0, 0, 0, 0, 0};
      for (int m = 0; m < npc; ++m) {
        const double w = tr[m];
        for (int fi = 0; fi < kF; ++fi) uo[fi] += w * xc[fi * npc + m];
      }
      // Jumps (neighbor minus own) of velocity and of the normal traction.
      double jvx, jvy, jnx, jny;
      if (fc.is_boundary()) {
        if (fc.tag == BoundaryTag::Dirichlet) {
          // Velocity boundary: mirror the velocity, keep the traction.
          jvx = -2.0 * uo[DGSpace::kVx];
          jvy = -2.0 * uo[DGSpace::kVy];
          jnx = 0.0;
          jny = 0.0;
        } else {
          // Traction boundary (Neumann or Free): mirror the traction.
          jvx = 0.0;
          jvy = 0.0;
          jnx = -2.0 * (uo[DGSpace::kSxx] * nx + uo[DGSpace::kSxy] * ny);
          jny = -2.0 * (uo[DGSpace::kSxy] * nx + uo[DGSpace::kSyy] * ny);
        }
      } else if (nb) {
        const double* trn = nb_tr + static_cast<std::size_t>(q) * npc;
        double un[kF] = {0, 0, 0, 0, 0};
        for (int m = 0; m < npc; ++m) {
          const double w = trn[m];
          for (int fi = 0; fi < kF; ++fi) un[fi] += w * nb[fi * npc + m];
        }
        jvx = un[DGSpace::kVx] - uo[DGSpace::kVx];
        jvy = un[DGSpace::kVy] - uo[DGSpace::kVy];
        jnx = (un[DGSpace::kSxx] - uo[DGSpace::kSxx]) * nx +
              (un[DGSpace::kSxy] - uo[DGSpace::kSxy]) * ny;
        jny = (un[DGSpace::kSxy] - uo[DGSpace::kSxy]) * nx +
              (un[DGSpace::kSyy] - uo[DGSpace::kSyy]) * ny;
      } else {
        jvx = -uo[DGSpace::kVx];
        jvy = -uo[DGSpace::kVy];
        jnx = -(uo[DGSpace::kSxx] * nx + uo[DGSpace::kSxy] * ny);
        jny = -(uo[DGSpace::kSxy] * nx + uo[DGSpace::kSyy] * ny);
      }
      // P (normal) and S (tangential) characteristic channels with degraded
      // impedances; the coefficient field is continuous across faces, so both
      // sides see the same impedance at the shared quadrature point.
      const double scale = deg ? mat.scale(cell, own.xi[q], own.eta[q]) : 1.0;
      const double sq = deg ? std::sqrt(scale) : 1.0;
      const double zp = zp0 * sq;
      const double zs = zs0 * sq;
      const double fP = (jnx * nx + jny * ny) + zp * (jvx * nx + jvy * ny);
      const double fS = (jnx * tx + jny * ty) + zs * (jvx * tx + jvy * ty);
      const double w = fd.weight[q];
      const double cP = 0.5 * w * fP;
      const double cS = 0.5 * w * fS;
      const double qvx = cP * nx + cS * tx;
      const double qvy = cP * ny + cS * ty;
      const double ux = (cP / zp) * nx + (cS / zs) * tx;
      const double uy = (cP / zp) * ny + (cS / zs) * ty;
      const double qsxx = ux * nx;
      const double qsyy = uy * ny;
      const double qsxy = ux * ny + uy * nx;
      for (int m = 0; m < npc; ++m) {
        const double tv = tr[m];
        out[DGSpace::kVx * npc + m] += qvx * tv;
        out[DGSpace::kVy * npc + m] += qvy * tv;
        out[DGSpace::kSxx * npc + m] += qsxx * tv;
        out[DGSpace::kSyy * npc + m] += qsyy * tv;
        out[DGSpace::kSxy * npc + m] += qsxy * tv;
      }
    }
  }
}

void check_sizes(const DGSpace& sp, const Eigen::VectorXd& y, const char* what) {
  if (y.size() != sp.dim()) throw std::invalid_argument(std::string(what) + ": state size mismatch");
}

}  // namespace

double BoundaryPulse::value(BoundarySide side, double t) const {
  double amp, width, shift;
  switch (side) {
    case BoundarySide::Left:
      amp = amplitude_left;
      width = width_left;
      shift = shift_left;
      break;
    case BoundarySide::Right:
      amp = amplitude_right;
      width = width_right;
      shift = shift_right;
      break;
    default:
      return 0.0;
  }
  if (amp == 0.0 || width <= 0.0) return 0.0;
  if (t >= t_init) return 0.0;
  const double s = cp * t - shift;
  const double d = width * width - s * s;
  if (d <= 0.0) return 0.0;
  return amp * std::exp(-1.0 / d);
}

void apply_mass(const DGSpace& space, const DegradedMaterialField& material,
                const Eigen::VectorXd& y, Eigen::VectorXd& out) {
  check_sizes(space, y, "apply_mass");
  out.setZero(space.dim());
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const Eigen::Index off = space.cell_offset(c);
    mass_cell(space, material, c, y.data() + off, out.data() + off);
  }
}

Eigen::VectorXd apply_mass(const DGSpace& space, const DegradedMaterialField& material,
                           const Eigen::VectorXd& y) {
  Eigen::VectorXd out(space.dim());
  apply_mass(space, material, y, out);
  return out;
}

Eigen::VectorXd mass_solve(const DGSpace& space, const DegradedMaterialField& material,
                           const Eigen::VectorXd& rhs) {
  check_sizes(space, rhs, "mass_solve");
  Eigen::VectorXd out(space.dim());
  const int npc = space.nodes_per_cell();
  const IsotropicElastic& base = material.base();
  const bool deg = material.degraded();
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const double* rc = rhs.data() + space.cell_offset(c);
    double* oc = out.data() + space.cell_offset(c);
    for (int n = 0; n < npc; ++n) {
      const auto& g = space.node_geom(c, n);
      const MassCoefs co = mass_coefs(base, deg ? material.scale(c, g.xi, g.eta) : 1.0);
      const double wJ = g.wJ;
      oc[DGSpace::kVx * npc + n] = rc[DGSpace::kVx * npc + n] / (wJ * co.rho);
      oc[DGSpace::kVy * npc + n] = rc[DGSpace::kVy * npc + n] / (wJ * co.rho);
      // Invert [[a-b, -b], [-b, a-b]]; det = a*(a-2b) > 0.
      const double det = co.a * (co.a - 2.0 * co.b);
      const double rxx = rc[DGSpace::kSxx * npc + n];
      const double ryy = rc[DGSpace::kSyy * npc + n];
      oc[DGSpace::kSxx * npc + n] = ((co.a - co.b) * rxx + co.b * ryy) / (wJ * det);
      oc[DGSpace::kSyy * npc + n] = (co.b * rxx + (co.a - co.b) * ryy) / (wJ * det);
      oc[DGSpace::kSxy * npc + n] = rc[DGSpace::kSxy * npc + n] / (wJ * 2.0 * co.a);
    }
  }
  return out;
}

void apply_upwind(const DGSpace& space, const DegradedMaterialField& material,
                  const Eigen::VectorXd& y, Eigen::VectorXd& out) {
  check_sizes(space, y, "apply_upwind");
  out.setZero(space.dim());
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const Eigen::Index off = space.cell_offset(c);
    upwind_cell(space, material, c, y.data() + off, &y, out.data() + off);
  }
}

Eigen::VectorXd apply_upwind(const DGSpace& space, const DegradedMaterialField& material,
                             const Eigen::VectorXd& y) {
  Eigen::VectorXd out(space.dim());
  apply_upwind(space, material, y, out);
  return out;
}

Eigen::VectorXd assemble_load(const DGSpace& space, const DegradedMaterialField& material,
                              const BoundaryPulse& pulse, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dim());
  const Mesh& mesh = space.mesh();
  const bool deg = material.degraded();
  const double zp0 = material.base().zp();
  const int npc = space.nodes_per_cell();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& fc = mesh.face(f);
    if (!fc.is_boundary() || fc.tag != BoundaryTag::Neumann) continue;
    const double a = pulse.value(fc.side, t);
    if (a == 0.0) continue;
    const DGSpace::FaceData& fd = space.face_data(f);
    const DGSpace::FaceSideData& own = fd.side[0];
    const int cell = fc.cell_left;
    double* oc = out.data() + space.cell_offset(cell);
    const double nx = fc.normal.x();
    const double ny = fc.normal.y();
    const int nq = static_cast<int>(fd.weight.size());
    for (int q = 0; q < nq; ++q) {
      const double scale = deg ? material.scale(cell, own.xi[q], own.eta[q]) : 1.0;
      const double zp = zp0 * (deg ? std::sqrt(scale) : 1.0);
      const double w = fd.weight[q];
      const double un = a / zp;  // normal-channel datum tested against the stress rows
      const double* tr = own.trace.data() + static_cast<std::size_t>(q) * npc;
      const double qvx = w * a * nx;
      const double qvy = w * a * ny;
      const double qsxx = w * un * nx * nx;
      const double qsyy = w * un * ny * ny;
      const double qsxy = w * un * 2.0 * nx * ny;
      for (int m = 0; m < npc; ++m) {
        const double tv = tr[m];
        oc[DGSpace::kVx * npc + m] += qvx * tv;
        oc[DGSpace::kVy * npc + m] += qvy * tv;
        oc[DGSpace::kSxx * npc + m] += qsxx * tv;
        oc[DGSpace::kSyy * npc + m] += qsyy * tv;
        oc[DGSpace::kSxy * npc + m] += qsxy * tv;
      }
    }
  }
  return out;
}

Eigen::VectorXd assemble_load(const DGSpace& space, const DegradedMaterialField& material,
                              const TractionFun& neumann_data, const VelocityFun& dirichlet_data,
                              const VolumeForceFun& volume_force, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dim());
  const Mesh& mesh = space.mesh();
  const bool deg = material.degraded();
  const double zp0 = material.base().zp();
  const double zs0 = material.base().zs();
  const int npc = space.nodes_per_cell();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& fc = mesh.face(f);
    if (!fc.is_boundary()) continue;
    const bool neumann = fc.tag == BoundaryTag::Neumann && neumann_data;
    const bool dirichlet = fc.tag == BoundaryTag::Dirichlet && dirichlet_data;
    if (!neumann && !dirichlet) continue;
    const DGSpace::FaceData& fd = space.face_data(f);
    const DGSpace::FaceSideData& own = fd.side[0];
    const int cell = fc.cell_left;
    double* oc = out.data() + space.cell_offset(cell);
    const double nx = fc.normal.x();
    const double ny = fc.normal.y();
    const double txv = -ny, tyv = nx;
    const int nq = static_cast<int>(fd.weight.size());
    for (int q = 0; q < nq; ++q) {
      const double scale = deg ? material.scale(cell, own.xi[q], own.eta[q]) : 1.0;
      const double sq = deg ? std::sqrt(scale) : 1.0;
      const double zp = zp0 * sq;
      const double zs = zs0 * sq;
      const double w = fd.weight[q];
      double qvx, qvy, ux, uy;
      if (neumann) {
        const Eigen::Vector2d g = neumann_data(fd.phys[q], Eigen::Vector2d(nx, ny), t);
        const double gn = g.x() * nx + g.y() * ny;
        const double gt = g.x() * txv + g.y() * tyv;
        qvx = w * g.x();
        qvy = w * g.y();
        ux = w * ((gn / zp) * nx + (gt / zs) * txv);
        uy = w * ((gn / zp) * ny + (gt / zs) * tyv);
      } else {
        const Eigen::Vector2d vd = dirichlet_data(fd.phys[q], t);
        const double vn = vd.x() * nx + vd.y() * ny;
        const double vt = vd.x() * txv + vd.y() * tyv;
        qvx = w * (zp * vn * nx + zs * vt * txv);
        qvy = w * (zp * vn * ny + zs * vt * tyv);
        ux = w * vd.x();
        uy = w * vd.y();
      }
      const double qsxx = ux * nx;
      const double qsyy = uy * ny;
      const double qsxy = ux * ny + uy * nx;
      const double* tr = own.trace.data() + static_cast<std::size_t>(q) * npc;
      for (int m = 0; m < npc; ++m) {
        const double tv = tr[m];
        oc[DGSpace::kVx * npc + m] += qvx * tv;
        oc[DGSpace::kVy * npc + m] += qvy * tv;
        oc[DGSpace::kSxx * npc + m] += qsxx * tv;
        oc[DGSpace::kSyy * npc + m] += qsyy * tv;
        oc[DGSpace::kSxy * npc + m] += qsxy * tv;
      }
    }
  }
  if (volume_force) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      double* oc = out.data() + space.cell_offset(c);
      for (int n = 0; n < npc; ++n) {
        const auto& g = space.node_geom(c, n);
        const Eigen::Vector2d fv = volume_force(g.phys, t);
        oc[DGSpace::kVx * npc + n] += g.wJ * fv.x();
        oc[DGSpace::kVy * npc + n] += g.wJ * fv.y();
      }
    }
  }
  return out;
}

double energy(const DGSpace& space, const DegradedMaterialField& material,
              const Eigen::VectorXd& y) {
  check_sizes(space, y, "energy");
  const int npc = space.nodes_per_cell();
  const IsotropicElastic& base = material.base();
  const bool deg = material.degraded();
  double e = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const double* yc = y.data() + space.cell_offset(c);
    for (int n = 0; n < npc; ++n) {
      const auto& g = space.node_geom(c, n);
      const MassCoefs co = mass_coefs(base, deg ? material.scale(c, g.xi, g.eta) : 1.0);
      const double vx = yc[DGSpace::kVx * npc + n];
      const double vy = yc[DGSpace::kVy * npc + n];
      const double sxx = yc[DGSpace::kSxx * npc + n];
      const double syy = yc[DGSpace::kSyy * npc + n];
      const double sxy = yc[DGSpace::kSxy * npc + n];
      const double tr = sxx + syy;
      e += g.wJ * (co.rho * (vx * vx + vy * vy) + co.a * (sxx * sxx + syy * syy) -
                   co.b * tr * tr + 2.0 * co.a * sxy * sxy);
    }
  }
  return 0.5 * e;
}

Eigen::MatrixXd assemble_cell_block(const DGSpace& space, const DegradedMaterialField& material,
                                    double gamma_dt, int cell) {
  const int bs = kF * space.nodes_per_cell();
  Eigen::MatrixXd block(bs, bs);
  std::vector<double> ein(bs), mout(bs), aout(bs);
  for (int j = 0; j < bs; ++j) {
    std::fill(ein.begin(), ein.end(), 0.0);
    std::fill(mout.begin(), mout.end(), 0.0);
    std::fill(aout.begin(), aout.end(), 0.0);
    ein[j] = 1.0;
    mass_cell(space, material, cell, ein.data(), mout.data());
    upwind_cell(space, material, cell, ein.data(), nullptr, aout.data());
    for (int i = 0; i < bs; ++i) block(i, j) = mout[i] - gamma_dt * aout[i];
  }
  return block;
}

BlockJacobi::BlockJacobi(const DGSpace& space, const DegradedMaterialField& material,
                         double gamma_dt)
    : space_(&space) {
  const int nc = space.mesh().num_cells();
  lu_.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    lu_.emplace_back(assemble_cell_block(space, material, gamma_dt, c));
  }
}

void BlockJacobi::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int bs = kF * space_->nodes_per_cell();
  z.resize(space_->dim());
  for (std::size_t c = 0; c < lu_.size(); ++c) {
    const Eigen::Index off = space_->cell_offset(static_cast<int>(c));
    z.segment(off, bs) = lu_[c].solve(r.segment(off, bs));
  }
}

LinearOperator BlockJacobi::as_operator() const {
  LinearOperator op;
  op.dim = space_->dim();
  op.apply = [this](const Eigen::VectorXd& in, Eigen::VectorXd& out) { apply(in, out); };
  return op;
}

namespace {

LinearOperator shifted_operator(const DGSpace& space, const DegradedMaterialField& material,
                                double gamma_dt, Eigen::VectorXd& scratch) {
  LinearOperator op;
  op.dim = space.dim();
  op.apply = [&space, &material, gamma_dt, &scratch](const Eigen::VectorXd& x,
                                                     Eigen::VectorXd& out) {
    apply_mass(space, material, x, out);
    apply_upwind(space, material, x, scratch);
    out -= gamma_dt * scratch;
  };
  return op;
}

}  // namespace

WaveStepResult midpoint_step(const DGSpace& space, const DegradedMaterialField& material,
                             const Eigen::VectorXd& y_old, double t_old, double dt,
                             const Eigen::VectorXd& load_mid, const GmresOptions& options,
                             const BlockJacobi* precond) {
  (void)t_old;
  check_sizes(space, y_old, "midpoint_step");
  if (!(dt > 0.0)) throw std::invalid_argument("midpoint_step: dt must be positive");
  const double g = 0.5 * dt;
  Eigen::VectorXd rhs(space.dim());
  Eigen::VectorXd tmp(space.dim());
  apply_mass(space, material, y_old, rhs);
  apply_upwind(space, material, y_old, tmp);
  rhs += g * tmp;
  if (load_mid.size() != 0) {
    check_sizes(space, load_mid, "midpoint_step load");
    rhs += dt * load_mid;
  }
  Eigen::VectorXd scratch(space.dim());
  const LinearOperator op = shifted_operator(space, material, g, scratch);
  LinearOperator prec_op;
  if (precond) prec_op = precond->as_operator();
  auto [state, report] = gmres(op, rhs, options, precond ? &prec_op : nullptr);
  return {std::move(state), std::move(report)};
}

WaveStepResult euler_step(const DGSpace& space, const DegradedMaterialField& material_new,
                          const DegradedMaterialField& material_old, const Eigen::VectorXd& y_old,
                          double t_old, double dt, const Eigen::VectorXd& load_new,
                          const GmresOptions& options, const BlockJacobi* precond) {
  (void)t_old;
  check_sizes(space, y_old, "euler_step");
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be positive");
  Eigen::VectorXd rhs(space.dim());
  apply_mass(space, material_old, y_old, rhs);
  if (load_new.size() != 0) {
    check_sizes(space, load_new, "euler_step load");
    rhs += dt * load_new;
  }
  Eigen::VectorXd scratch(space.dim());
  const LinearOperator op = shifted_operator(space, material_new, dt, scratch);
  LinearOperator prec_op;
  if (precond) prec_op = precond->as_operator();
  auto [state, report] = gmres(op, rhs, options, precond ? &prec_op : nullptr);
  return {std::move(state), std::move(report)};
}

}  // namespace fracwave
