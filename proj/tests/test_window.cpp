#include "rrshift/window.hpp"

#include <doctest.h>

using namespace rrshift;

namespace {

Trajectory trajectory() {
  PotentialProfile p;
  p.v_past = Vec4(0, 0.3, 0, -0.8);
  return integrate_trajectory(p, Vec3(0.1, 0, 0.5), 1.0, 1e-12);
}

}  // namespace

TEST_CASE("retarded time inverts") {
  const Trajectory tr = trajectory();
  const Vec3 n = Vec3(0.3, 0.4, 0.5).normalized();
  for (double t : {-50.0, -1.7, -0.2, 3.0}) CHECK(t_of_xi(tr, n, xi_of(tr, n, t)) == doctest::Approx(t).epsilon(1e-13));
  CHECK(xi_of(tr, n, -1.0) > xi_of(tr, n, -1.5));
}

TEST_CASE("window is flat on the plateau and zero outside") {
  CutoffWindow w{1.0, 3.0, 0.5};
  CHECK(w.value(2.0) == 1.0);
  CHECK(w.value(0.4) == 0.0);
  CHECK(w.value(3.6) == 0.0);
  CHECK(w.value(0.75) == doctest::Approx(0.5));
  CHECK(w.derivative(2.0, 1) == 0.0);
  const double h = 1e-6;
  for (double xi : {0.6, 0.9, 3.2}) {
    CHECK(w.derivative(xi, 1) == doctest::Approx((w.value(xi + h) - w.value(xi - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("policy windows cover the acceleration image") {
  const Trajectory tr = trajectory();
  WindowPolicy pol;
  for (const Vec3& n : {Vec3(Vec3::UnitZ()), Vec3(-1, 0, 0), Vec3(0.6, 0, -0.8)}) {
    const CutoffWindow w = pol.for_direction(tr, n);
    CHECK_NOTHROW(require_plateau_covers(w, tr, n));
    const double d = xi_of(tr, n, tr.t_exit()) - xi_of(tr, n, tr.t_enter());
    CHECK(w.taper == doctest::Approx(0.5 * d));
  }
  CutoffWindow narrow{xi_of(tr, Vec3::UnitZ(), -1.5), xi_of(tr, Vec3::UnitZ(), -0.5), 0.2};
  CHECK_THROWS_AS(require_plateau_covers(narrow, tr, Vec3::UnitZ()), UsageError);
}
