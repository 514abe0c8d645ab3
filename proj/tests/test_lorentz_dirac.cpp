#include "rrshift/lorentz_dirac.hpp"

#include <doctest.h>

#include <random>

using namespace rrshift;

namespace {

Kinematics random_kinematics(std::mt19937_64& rng, double speed) {
  std::normal_distribution<double> g;
  Kinematics k;
  k.v = speed * Vec3(g(rng), g(rng), g(rng)).normalized();
  k.a = Vec3(g(rng), g(rng), g(rng));
  k.adot = Vec3(g(rng), g(rng), g(rng));
  k.gamma = 1.0 / std::sqrt(1.0 - speed * speed);
  return k;
}

// Proper-time derivatives by brute force: u(t) = gamma(t)(1, v(t)) with v
// a quadratic polynomial in t, differentiated numerically.
Vec4 four_force_oracle(const Kinematics& k, double alpha) {
  auto u_of = [&](double t) {
    const Vec3 v = k.v + k.a * t + 0.5 * k.adot * t * t;
    return Vec4(four(1.0, v) / std::sqrt(1.0 - v.squaredNorm()));
  };
  const double h = 1e-3;
  const Vec4 u0 = u_of(0), up = u_of(h), um = u_of(-h), up2 = u_of(2 * h), um2 = u_of(-2 * h);
  const double g = u0[0];
  const Vec4 du = (8 * (up - um) - (up2 - um2)) / (12 * h);
  const Vec4 d2u = (-(up2 + um2) + 16 * (up + um) - 30 * u0) / (12 * h * h);
  const double dg = du[0];
  const Vec4 w = g * du;                  // du/dtau
  const Vec4 wdot = g * (dg * du + g * d2u);  // d^2u/dtau^2
  return (2.0 * alpha / 3.0) * (wdot + u0 * minkowski(w, w));
}

}  // namespace

TEST_CASE("four-force is orthogonal to u and matches the coordinate force") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Kinematics k = random_kinematics(rng, 0.9 * (i + 1) / 50.0);
    const Vec4 F = ld_four_force(k, 0.01);
    const Vec4 u = four_velocity(k);
    CHECK(std::abs(minkowski(u, F)) < 1e-12 * u.norm() * F.norm());
    CHECK((k.gamma * ld_coordinate_force(k, 0.01) - spatial(F)).norm() < 1e-12 * F.norm());
  }
}

TEST_CASE("four-force matches a finite-difference oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const Kinematics k = random_kinematics(rng, 0.7);
    const Vec4 F = ld_four_force(k, 0.02);
    CHECK((F - four_force_oracle(k, 0.02)).norm() < 1e-6 * F.norm());
  }
}

TEST_CASE("rest-frame limit") {
  Kinematics k;
  k.a = Vec3(0.3, -1.2, 0.4);
  k.adot = Vec3(1.0, 2.0, -0.5);
  const Vec3 expect = (2.0 / 3.0) * 0.05 * k.adot;
  CHECK((ld_coordinate_force(k, 0.05) - expect).norm() < 1e-15);
  CHECK((spatial(ld_four_force(k, 0.05)) - expect).norm() < 1e-15);
}

TEST_CASE("force vanishes where the trajectory is free") {
  PotentialProfile p;
  p.v_past = Vec4(0, 0, 0, -0.8);
  const Trajectory tr = integrate_trajectory(p, Vec3(0, 0, 0.5), 1.0, 1e-12);
  CHECK(ld_coordinate_force(tr, -0.5, 0.01).norm() == 0.0);
  CHECK(ld_coordinate_force(tr, tr.t_min(), 0.01).norm() == 0.0);
  CHECK(ld_coordinate_force(tr, -1.5, 0.01).norm() > 0.0);
}
