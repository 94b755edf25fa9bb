#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "doctest.h"
#include "fracwave/dg_space.hpp"
#include "fracwave/dg_wave.hpp"
#include "fracwave/material.hpp"
#include "fracwave/mesh.hpp"
#include "support/test_helpers.hpp"

using namespace fracwave;
using fracwave::test::dense_mass;
using fracwave::test::dense_upwind;
using fracwave::test::random_vector;

namespace {

const IsotropicElastic kBase{2.0, 1.0, 1.0};

struct Setup {
  Mesh mesh;
  DGSpace space;
  DegradedMaterialField material;

  Setup(const GeometryMap& map, int level, const std::array<BoundaryTag, 4>& tags, int degree = 1)
      : mesh(build_mesh(map, level, tags)),
        space(mesh, degree),
        material(mesh, kBase, 1e-7) {}
};

const std::array<BoundaryTag, 4> kAllFree{BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Free,
                                          BoundaryTag::Free};
const std::array<BoundaryTag, 4> kAllDirichlet{BoundaryTag::Dirichlet, BoundaryTag::Dirichlet,
                                               BoundaryTag::Dirichlet, BoundaryTag::Dirichlet};
const std::array<BoundaryTag, 4> kMixed{BoundaryTag::Neumann, BoundaryTag::Neumann,
                                        BoundaryTag::Dirichlet, BoundaryTag::Free};

Eigen::VectorXd constant_state(const DGSpace& space, double vx, double vy, const SymTensor2& sig) {
  return space.interpolate([&](const Eigen::Vector2d&) { return Eigen::Vector2d(vx, vy); },
                           [&](const Eigen::Vector2d&) { return sig; });
}

}  // namespace

TEST_SUITE("dg") {

TEST_CASE("mass action on a constant velocity returns the quadrature weights") {
  Setup s(GeometryMap::unit_square(), 0, kAllFree);
  const Eigen::VectorXd y = constant_state(s.space, 1.0, 0.0, SymTensor2{});
  const Eigen::VectorXd my = apply_mass(s.space, s.material, y);
  double total = 0.0;
  for (int a = 0; a < s.space.nodes_per_cell(); ++a) {
    CHECK(my[s.space.dof(0, DGSpace::kVx, a)] ==
          doctest::Approx(s.space.node_geom(0, a).wJ).epsilon(1e-14));
    CHECK(my[s.space.dof(0, DGSpace::kVy, a)] == doctest::Approx(0.0));
    CHECK(my[s.space.dof(0, DGSpace::kSxx, a)] == doctest::Approx(0.0));
    total += my[s.space.dof(0, DGSpace::kVx, a)];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));  // rho * |cell|
}

TEST_CASE("mass and upwind operators are linear") {
  Setup s(GeometryMap::curved_bar(), 4, kMixed);
  const Eigen::VectorXd x = random_vector(s.space.dim(), 1);
  const Eigen::VectorXd y = random_vector(s.space.dim(), 2);
  const double a = 0.37, b = -1.21;
  CHECK((apply_mass(s.space, s.material, a * x + b * y) -
         (a * apply_mass(s.space, s.material, x) + b * apply_mass(s.space, s.material, y)))
            .lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((apply_upwind(s.space, s.material, a * x + b * y) -
         (a * apply_upwind(s.space, s.material, x) + b * apply_upwind(s.space, s.material, y)))
            .lpNorm<Eigen::Infinity>() < 1e-11);
}

TEST_CASE("dense mass matrix is symmetric positive definite on a 2x2 mesh") {
  Setup s(GeometryMap::unit_square(), 1, kMixed);
  const Eigen::MatrixXd m = dense_mass(s.space, s.material);
  CHECK((m - m.transpose()).lpNorm<Eigen::Infinity>() < 1e-13);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("mass solve inverts the mass form") {
  Setup s(GeometryMap::curved_bar(), 4, kAllFree);
  const Eigen::VectorXd rhs = random_vector(s.space.dim(), 3);
  const Eigen::VectorXd x = mass_solve(s.space, s.material, rhs);
  CHECK((apply_mass(s.space, s.material, x) - rhs).lpNorm<Eigen::Infinity>() /
            rhs.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("constant states with matching boundary conventions are flux-free") {
  // Traction faces reflect the traction, so a constant velocity with zero
  // stress sees no jumps anywhere.
  Setup free_setup(GeometryMap::unit_square(), 2, kAllFree);
  const Eigen::VectorXd yv = constant_state(free_setup.space, 0.8, -0.3, SymTensor2{});
  CHECK(apply_upwind(free_setup.space, free_setup.material, yv).lpNorm<Eigen::Infinity>() < 1e-13);

  // Velocity faces reflect the velocity, so a constant stress with zero
  // velocity sees no jumps either.
  Setup dir_setup(GeometryMap::unit_square(), 2, kAllDirichlet);
  const Eigen::VectorXd ys =
      constant_state(dir_setup.space, 0.0, 0.0, SymTensor2{0.4, -1.1, 0.7});
  CHECK(apply_upwind(dir_setup.space, dir_setup.material, ys).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("minus the upwind operator is positive semidefinite") {
  for (const auto& tags : {kAllDirichlet, kMixed, kAllFree}) {
    Setup s(GeometryMap::unit_square(), 1, tags);
    const Eigen::MatrixXd a = dense_upwind(s.space, s.material);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-0.5 * (a + a.transpose()));
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    // Quadratic form check on random vectors.
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vector(s.space.dim(), 100 + trial);
      CHECK(x.dot(a * x) <= 1e-12 * x.squaredNorm());
    }
  }
}

TEST_CASE("upwind output on a cell depends only on the cell and face neighbors") {
  Setup s(GeometryMap::unit_square(), 2, kMixed);  // 4x4 cells
  const Eigen::VectorXd y = random_vector(s.space.dim(), 17);
  const Eigen::VectorXd base_out = apply_upwind(s.space, s.material, y);

  Eigen::VectorXd perturbed = y;
  const int far_cell = 15;  // corner (3, 3)
  for (int f = 0; f < DGSpace::kFields; ++f)
    for (int a = 0; a < s.space.nodes_per_cell(); ++a)
      perturbed[s.space.dof(far_cell, f, a)] += 1.0;
  const Eigen::VectorXd out = apply_upwind(s.space, s.material, perturbed);

  const int near_cell = 0;  // corner (0, 0): not a face neighbor of (3, 3)
  for (int f = 0; f < DGSpace::kFields; ++f)
    for (int a = 0; a < s.space.nodes_per_cell(); ++a) {
      const Eigen::Index i = s.space.dof(near_cell, f, a);
      CHECK(out[i] == base_out[i]);
    }
}

TEST_CASE("plane compressional wave satisfies the semi-discrete system at order >= 1") {
  // Traveling wave along x1 with speed cp = 2: v = f(x - cp t) e1,
  // sigma_xx = -Z_P f, sigma_yy = -lambda/cp f; compactly supported bump so
  // homogeneous boundary data is exact at t = 0.
  const double cp = kBase.cp();
  const auto bump = [](double s) {
    const double w = 0.18;
    const double u = (s - 0.5) / w;
    return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
  };
  const auto dbump = [&](double s) {
    const double w = 0.18;
    const double u = (s - 0.5) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    const double d = 1.0 - u * u;
    return bump(s) * (-2.0 * u / (d * d)) / w;
  };

  std::vector<double> errors;
  for (int level : {3, 4, 5}) {
    Setup s(GeometryMap::unit_square(), level, kAllFree);
    const Eigen::VectorXd y = s.space.interpolate(
        [&](const Eigen::Vector2d& x) { return Eigen::Vector2d(bump(x.x()), 0.0); },
        [&](const Eigen::Vector2d& x) {
          return SymTensor2{-kBase.zp() * bump(x.x()), -kBase.lambda / cp * bump(x.x()), 0.0};
        });
    const Eigen::VectorXd ydot = s.space.interpolate(
        [&](const Eigen::Vector2d& x) { return Eigen::Vector2d(-cp * dbump(x.x()), 0.0); },
        [&](const Eigen::Vector2d& x) {
          return SymTensor2{cp * kBase.zp() * dbump(x.x()), kBase.lambda * dbump(x.x()), 0.0};
        });
    const Eigen::VectorXd residual =
        mass_solve(s.space, s.material, apply_upwind(s.space, s.material, y)) - ydot;
    errors.push_back(std::sqrt(residual.dot(apply_mass(s.space, s.material, residual))));
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  CHECK(order1 >= 1.0);
  CHECK(order2 >= 1.0);
}

TEST_CASE("boundary pulse support and cutoff") {
  BoundaryPulse pulse;
  pulse.amplitude_left = -1.0e6;
  pulse.amplitude_right = -1.05e6;
  pulse.width_left = pulse.width_right = 0.3;
  pulse.shift_left = 0.23;
  pulse.shift_right = 0.25;
  pulse.t_init = 0.24;
  pulse.cp = 2.0;

  // Inside the support: a(s) = A exp(-1/(w^2 - s^2)), s = cp t - shift.
  const double t = 0.1;
  const double sarg = pulse.cp * t - pulse.shift_left;
  const double expected = -1.0e6 * std::exp(-1.0 / (0.09 - sarg * sarg));
  CHECK(pulse.value(BoundarySide::Left, t) == doctest::Approx(expected).epsilon(1e-13));

  // The right pulse is 5% stronger at the matching argument.
  const double tr = (sarg + pulse.shift_right) / pulse.cp;
  CHECK(pulse.value(BoundarySide::Right, tr) ==
        doctest::Approx(1.05 * expected).epsilon(1e-13));

  // Outside the bump support the pulse vanishes identically.
  CHECK(pulse.value(BoundarySide::Left, (pulse.shift_left + 0.3) / pulse.cp + 1e-9) == 0.0);
  // From t_init on, the load is switched off even inside the support window.
  CHECK(pulse.value(BoundarySide::Left, pulse.t_init) == 0.0);
  CHECK(pulse.value(BoundarySide::Right, pulse.t_init + 0.01) == 0.0);
}

TEST_CASE("load vector vanishes once the pulse is off") {
  Setup s(GeometryMap::curved_bar(), 4,
          {BoundaryTag::Neumann, BoundaryTag::Neumann, BoundaryTag::Free, BoundaryTag::Free});
  BoundaryPulse pulse;
  pulse.amplitude_left = -2.0;
  pulse.amplitude_right = -2.1;
  pulse.width_left = pulse.width_right = 0.3;
  pulse.shift_left = 0.23;
  pulse.shift_right = 0.25;
  pulse.t_init = 0.24;
  pulse.cp = 2.0;
  CHECK(assemble_load(s.space, s.material, pulse, 0.1).norm() > 0.0);
  CHECK(assemble_load(s.space, s.material, pulse, 0.24).norm() == 0.0);
  CHECK(assemble_load(s.space, s.material, pulse, 5.0).norm() == 0.0);
}

TEST_CASE("energy closed forms and the quadratic identity") {
  Setup s(GeometryMap::rectangle(0.0, 1.0, 0.0, 0.25), 3, kAllFree);
  CHECK(energy(s.space, s.material, Eigen::VectorXd::Zero(s.space.dim())) == 0.0);

  const Eigen::VectorXd yconst = constant_state(s.space, 1.0, 0.0, SymTensor2{});
  CHECK(energy(s.space, s.material, yconst) == doctest::Approx(0.125).epsilon(1e-13));
  CHECK(energy(s.space, s.material, -yconst) ==
        doctest::Approx(energy(s.space, s.material, yconst)).epsilon(1e-14));

  const Eigen::VectorXd y = random_vector(s.space.dim(), 5);
  const double e = energy(s.space, s.material, y);
  CHECK(e == doctest::Approx(0.5 * y.dot(apply_mass(s.space, s.material, y))).epsilon(1e-12));
}

TEST_CASE("midpoint step matches a dense direct solve on a 2x2 mesh") {
  Setup s(GeometryMap::unit_square(), 1, kMixed);
  const Eigen::VectorXd y0 = random_vector(s.space.dim(), 23);
  const double dt = 0.01;

  BoundaryPulse pulse;
  pulse.amplitude_left = -1.0;
  pulse.width_left = 0.3;
  pulse.shift_left = 0.3;
  pulse.t_init = 1.0;
  pulse.cp = 2.0;
  const Eigen::VectorXd load = assemble_load(s.space, s.material, pulse, 0.5 * dt);

  GmresOptions options;
  options.rtol = 1e-12;
  const BlockJacobi precond(s.space, s.material, 0.5 * dt);
  const WaveStepResult result =
      midpoint_step(s.space, s.material, y0, 0.0, dt, load, options, &precond);
  REQUIRE(result.report.converged);

  const Eigen::MatrixXd m = dense_mass(s.space, s.material);
  const Eigen::MatrixXd a = dense_upwind(s.space, s.material);
  const Eigen::VectorXd rhs = (m + 0.5 * dt * a) * y0 + dt * load;
  const Eigen::VectorXd direct = (m - 0.5 * dt * a).partialPivLu().solve(rhs);
  CHECK((result.state - direct).norm() / direct.norm() < 1e-10);
}

TEST_CASE("euler step matches a dense direct solve across a material change") {
  const Mesh mesh = build_mesh(GeometryMap::unit_square(), 1, kMixed);
  const DGSpace space(mesh, 1);
  std::vector<double> s_old(mesh.num_vertices(), 1.0);
  std::vector<double> s_new = s_old;
  s_new[4] = 0.4;  // center vertex degrades
  const DegradedMaterialField mat_old = degrade(mesh, kBase, s_old, 1e-7);
  const DegradedMaterialField mat_new = degrade(mesh, kBase, s_new, 1e-7);

  const Eigen::VectorXd y0 = random_vector(space.dim(), 29);
  const double dt = 0.01;
  const Eigen::VectorXd load = Eigen::VectorXd::Zero(space.dim());

  GmresOptions options;
  options.rtol = 1e-12;
  const BlockJacobi precond(space, mat_new, dt);
  const WaveStepResult result =
      euler_step(space, mat_new, mat_old, y0, 0.0, dt, load, options, &precond);
  REQUIRE(result.report.converged);

  const Eigen::MatrixXd m_new = dense_mass(space, mat_new);
  const Eigen::MatrixXd m_old = dense_mass(space, mat_old);
  const Eigen::MatrixXd a_new = dense_upwind(space, mat_new);
  const Eigen::VectorXd direct =
      (m_new - dt * a_new).partialPivLu().solve(m_old * y0);
  CHECK((result.state - direct).norm() / direct.norm() < 1e-10);

  // Identical materials and no load reduce to a plain dissipative step.
  const WaveStepResult same =
      euler_step(space, mat_old, mat_old, Eigen::VectorXd::Zero(space.dim()), 0.0, dt, load,
                 options, nullptr);
  CHECK(same.state.norm() == 0.0);
}

TEST_CASE("homogeneous midpoint steps never gain energy") {
  Setup s(GeometryMap::unit_square(), 2, kMixed);
  GmresOptions options;
  options.rtol = 1e-12;
  const BlockJacobi precond(s.space, s.material, 0.5 * 0.01);
  Eigen::VectorXd y = random_vector(s.space.dim(), 31);
  double e = energy(s.space, s.material, y);
  const Eigen::VectorXd no_load = Eigen::VectorXd::Zero(s.space.dim());
  for (int k = 0; k < 20; ++k) {
    y = midpoint_step(s.space, s.material, y, k * 0.01, 0.01, no_load, options, &precond).state;
    const double e_next = energy(s.space, s.material, y);
    CHECK(e_next <= e * (1.0 + 1e-10));
    e = e_next;
  }
}

TEST_CASE("block preconditioner is exact on a single cell") {
  Setup s(GeometryMap::unit_square(), 0, kMixed);
  const double gamma_dt = 0.005;
  const BlockJacobi precond(s.space, s.material, gamma_dt);

  LinearOperator op;
  op.dim = s.space.dim();
  op.apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    Eigen::VectorXd ax;
    apply_upwind(s.space, s.material, x, ax);
    apply_mass(s.space, s.material, x, out);
    out -= gamma_dt * ax;
  };
  const LinearOperator pre = precond.as_operator();
  const Eigen::VectorXd rhs = random_vector(s.space.dim(), 41);
  const auto [x, report] = gmres(op, rhs, GmresOptions{1e-12, 50, 50}, &pre);
  CHECK(report.converged);
  CHECK(report.iterations <= 1);

  // Application is linear.
  Eigen::VectorXd za(s.space.dim()), zb(s.space.dim()), zab(s.space.dim());
  const Eigen::VectorXd u = random_vector(s.space.dim(), 42);
  const Eigen::VectorXd v = random_vector(s.space.dim(), 43);
  precond.apply(u, za);
  precond.apply(v, zb);
  precond.apply(u + 2.0 * v, zab);
  CHECK((zab - za - 2.0 * zb).lpNorm<Eigen::Infinity>() < 1e-11);
}

TEST_CASE("preconditioning does not increase the iteration count") {
  Setup s(GeometryMap::curved_bar(), 4,
          {BoundaryTag::Neumann, BoundaryTag::Neumann, BoundaryTag::Free, BoundaryTag::Free});
  const double dt = 0.0078125;  // cp * dt = h
  const Eigen::VectorXd y0 = random_vector(s.space.dim(), 51);
  const Eigen::VectorXd rhs =
      apply_mass(s.space, s.material, y0) + 0.5 * dt * apply_upwind(s.space, s.material, y0);

  LinearOperator op;
  op.dim = s.space.dim();
  op.apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    Eigen::VectorXd ax;
    apply_upwind(s.space, s.material, x, ax);
    apply_mass(s.space, s.material, x, out);
    out -= 0.5 * dt * ax;
  };
  const BlockJacobi precond(s.space, s.material, 0.5 * dt);
  const LinearOperator pre = precond.as_operator();
  const auto [xp, with] = gmres(op, rhs, GmresOptions{1e-10, 2000, 100}, &pre);
  const auto [xn, without] = gmres(op, rhs, GmresOptions{1e-10, 2000, 100}, nullptr);
  CHECK(with.converged);
  CHECK(without.converged);
  CHECK(with.iterations <= without.iterations);
}

}  // TEST_SUITE
