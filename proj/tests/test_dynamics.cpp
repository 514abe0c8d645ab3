#include "rrshift/dynamics.hpp"

#include <doctest.h>

using namespace rrshift;

namespace {

PotentialProfile time_profile() {
  PotentialProfile p;
  p.axis = Axis::time;
  p.v_past = Vec4(0, 0.4, 0, -0.8);
  return p;
}

PotentialProfile z_profile() {
  PotentialProfile p;
  p.axis = Axis::z;
  p.v_past = Vec4(-0.3, 0.3, -0.2, 0.05);
  return p;
}

}  // namespace

TEST_CASE("zero potential gives a straight line") {
  PotentialProfile p;
  const Vec3 pf(0.1, 0.2, 0.3);
  const Trajectory tr = integrate_trajectory(p, pf, 1.0, 1e-12);
  const Vec3 v = pf / std::sqrt(pf.squaredNorm() + 1.0);
  for (double t : {tr.t_min(), -1.3, -0.2}) {
    CHECK((tr.state(t).x - v * t).norm() < 1e-12);
    CHECK(tr.kinematics(t).a.norm() == 0.0);
  }
}

TEST_CASE("anchor and asymptotic velocities") {
  const Vec3 pf(0.2, 0.0, 0.5);
  const Trajectory tr = integrate_trajectory(time_profile(), pf, 1.0, 1e-12);
  CHECK(tr.state(0.0).x.norm() == 0.0);
  CHECK((tr.state(0.0).P - pf).norm() == 0.0);
  const Vec3 pi_past = pf - Vec3(0.4, 0, -0.8);
  CHECK((tr.v_past() - pi_past / std::sqrt(pi_past.squaredNorm() + 1)).norm() < 1e-12);
  CHECK(tr.t_enter() == doctest::Approx(-2.0));
  CHECK(tr.t_exit() == doctest::Approx(-1.0));
}

TEST_CASE("conserved quantities") {
  SUBCASE("time-dependent potential conserves P") {
    const Trajectory tr = integrate_trajectory(time_profile(), Vec3(0.2, 0, 0.5), 1.0, 1e-12);
    for (double t : {tr.t_min(), -1.6, -1.2}) {
      CHECK((tr.state(t).P - tr.p_final()).norm() < 1e-12);
      CHECK(tr.mass_shell_residual(t) < 1e-10);
    }
  }
  SUBCASE("z-dependent potential conserves H and transverse P") {
    const Trajectory tr = integrate_trajectory(z_profile(), Vec3(0.3, 0.1, 0.6), 1.0, 1e-12);
    for (double t : {tr.t_min(), 0.5 * (tr.t_enter() + tr.t_exit())}) {
      const State s = tr.state(t);
      CHECK(s.P[0] == doctest::Approx(0.3).epsilon(1e-12));
      CHECK(s.P[1] == doctest::Approx(0.1).epsilon(1e-12));
      CHECK(tr.mass_shell_residual(t) < 1e-9);
    }
  }
}

TEST_CASE("kinematics agree with differences of the dense solution") {
  const Trajectory tr = integrate_trajectory(z_profile(), Vec3(0.3, 0.1, 0.6), 1.0, 1e-12);
  const double t = 0.6 * tr.t_enter() + 0.4 * tr.t_exit();
  const double h = 1e-4;
  const Kinematics k = tr.kinematics(t);
  const Vec3 a_fd = (tr.kinematics(t + h).v - tr.kinematics(t - h).v) / (2 * h);
  const Vec3 adot_fd = (tr.kinematics(t + h).a - tr.kinematics(t - h).a) / (2 * h);
  const Vec3 v_fd = (tr.state(t + h).x - tr.state(t - h).x) / (2 * h);
  CHECK((k.v - v_fd).norm() < 1e-7);
  CHECK((k.a - a_fd).norm() < 1e-7);
  CHECK((k.adot - adot_fd).norm() < 1e-6);
  CHECK(k.gamma == doctest::Approx(1.0 / std::sqrt(1.0 - k.v.squaredNorm())));
}

TEST_CASE("free extension outside the domain") {
  const Trajectory tr = integrate_trajectory(time_profile(), Vec3(0.2, 0, 0.5), 1.0, 1e-12);
  CHECK((tr.position(2.0) - 2.0 * tr.v_future()).norm() < 1e-14);
  const Vec3 far = tr.position(tr.t_min() - 3.0);
  CHECK((far - tr.state(tr.t_min()).x + 3.0 * tr.v_past()).norm() < 1e-12);
  CHECK_THROWS_AS(tr.state(0.5), RangeError);
}

TEST_CASE("input errors") {
  PotentialProfile p = z_profile();
  CHECK_THROWS_AS(integrate_trajectory(p, Vec3(0.3, 0.1, 0.6), -1.0, 1e-12), DomainError);
  CHECK_THROWS_AS(integrate_trajectory(p, Vec3(0.3, 0.1, -0.6), 1.0, 1e-12), DomainError);
  p.shape = ShapeKind::smoothstep3;
  CHECK_THROWS_AS(integrate_trajectory(p, Vec3(0.3, 0.1, 0.6), 1.0, 1e-12), DomainError);
}

TEST_CASE("a potential step the particle cannot climb reflects it") {
  PotentialProfile p;
  p.axis = Axis::z;
  p.v_past = Vec4(3.0, 0, 0, 0);
  CHECK_THROWS_AS(integrate_trajectory(p, Vec3(0, 0, 0.3), 1.0, 1e-10), ReflectedTrajectory);
}
