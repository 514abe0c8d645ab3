#include "rrshift/variational.hpp"

#include <doctest.h>

using namespace rrshift;

namespace {

Trajectory z_trajectory() {
  PotentialProfile p;
  p.axis = Axis::z;
  p.v_past = Vec4(-0.3, 0.3, -0.2, 0.05);
  return integrate_trajectory(p, Vec3(0.3, 0.1, 0.6), 1.0, 1e-12);
}

}  // namespace

TEST_CASE("Hessian blocks match finite differences of H") {
  const Trajectory tr = z_trajectory();
  const double t = 0.5 * (tr.t_enter() + tr.t_exit());
  const State s = tr.state(t);
  const HessianSample h = hamiltonian_hessian(tr, t);
  const double e = 1e-4;
  auto H = [&](const Vec3& dx, const Vec3& dP) { return hamiltonian_value(tr, t, s.x + dx, s.P + dP); };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vec3 ei = e * Vec3::Unit(i), ej = e * Vec3::Unit(j), z = Vec3::Zero();
      const double pp = (H(z, ei + ej) - H(z, ei - ej) - H(z, ej - ei) + H(z, -ei - ej)) / (4 * e * e);
      const double xx = (H(ei + ej, z) - H(ei - ej, z) - H(ej - ei, z) + H(-ei - ej, z)) / (4 * e * e);
      const double xp = (H(ei, ej) - H(ei, -ej) - H(-ei, ej) + H(-ei, -ej)) / (4 * e * e);
      CHECK(h.H_PP(i, j) == doctest::Approx(pp).epsilon(1e-6));
      CHECK(h.H_xx(i, j) == doctest::Approx(xx).epsilon(1e-6));
      CHECK(h.H_xP(i, j) == doctest::Approx(xp).epsilon(1e-6));
    }
  }
}

TEST_CASE("Jacobi field starts as a unit momentum kick") {
  const Trajectory tr = z_trajectory();
  const JacobiField f = jacobi_field(tr, 1, -1.4);
  CHECK(f.dx(-1.4).norm() == 0.0);
  CHECK((f.dP(-1.4) - Vec3::UnitY()).norm() == 0.0);
  CHECK((f.dx(-1.4 + 1e-3) - f.dx_rate(-1.4) * 1e-3).norm() < 1e-6);
  CHECK_THROWS_AS(jacobi_field(tr, 3, -1.0), UsageError);
  CHECK_THROWS_AS(jacobi_field(tr, 0, 0.5), RangeError);
}

TEST_CASE("symplectic product is constant") {
  const Trajectory tr = z_trajectory();
  const JacobiField a = jacobi_field(tr, 0, -1.8), b = jacobi_field(tr, 2, -1.1);
  const double w0 = symplectic_product(a, b, tr.t_min());
  for (double t : {-2.0, -1.5, -1.0, -0.3, 0.0}) CHECK(symplectic_product(a, b, t) == doctest::Approx(w0).epsilon(1e-9));
  const Trajectory other = z_trajectory();
  CHECK_THROWS_AS(symplectic_product(a, jacobi_field(other, 0, -1.0), -1.0), UsageError);
}

TEST_CASE("forward kick response equals the anchored field at t = 0") {
  const Trajectory tr = z_trajectory();
  const double s = -1.37;
  const Mat3 M = kick_response_at_anchor(tr, s);
  for (int j = 0; j < 3; ++j) CHECK((M.col(j) - jacobi_field(tr, j, s).dx(0.0)).norm() < 1e-9);
}

TEST_CASE("retarded perturbation is linear in the coupling and starts at rest") {
  const Trajectory tr = z_trajectory();
  const Perturbation p1 = retarded_perturbation(tr, 0.01), p2 = retarded_perturbation(tr, 0.02);
  CHECK(p1.dx(tr.t_min()).norm() == 0.0);
  CHECK((2.0 * p1.dx(0.0) - p2.dx(0.0)).norm() < 1e-15);
  CHECK(p1.dx(0.0).norm() > 0.0);
}
