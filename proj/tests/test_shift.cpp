#include "rrshift/lorentz_dirac.hpp"
#include "rrshift/shift.hpp"

#include <boost/numeric/odeint.hpp>
#include <doctest.h>

#include <numbers>

using namespace rrshift;

namespace {

Trajectory z_trajectory() {
  PotentialProfile p;
  p.axis = Axis::z;
  p.v_past = Vec4(-0.3, 0.3, -0.2, 0.05);
  return integrate_trajectory(p, Vec3(0.3, 0.1, 0.6), 1.0, 1e-12);
}

Trajectory sixty_trajectory() {
  PotentialProfile p;
  p.v_past = Vec4(0, 1.5 * std::sin(std::numbers::pi / 3), 0, 1.5 * std::cos(std::numbers::pi / 3));
  return integrate_trajectory(p, Vec3(0, 0, 0.6), 1.0, 1e-12);
}

// Full equations of motion with the radiation-reaction force switched on,
// started from the reference state at t_min, integrated by odeint.
Vec3 position_at_zero(const Trajectory& tr, double alpha) {
  using Y = std::array<double, 6>;
  const State s0 = tr.state(tr.t_min());
  Y y{s0.x[0], s0.x[1], s0.x[2], s0.P[0], s0.P[1], s0.P[2]};
  auto rhs = [&](const Y& y, Y& dy, double t) {
    ode::State<6> e;
    for (int i = 0; i < 6; ++i) e[i] = y[i];
    ode::State<6> f = tr.flow(t, e);
    const Kinematics k = tr.kinematics_at(State{t, e.head<3>(), e.tail<3>()});
    f.tail<3>() += ld_coordinate_force(k, alpha);
    for (int i = 0; i < 6; ++i) dy[i] = f[i];
  };
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<Y>());
  odeint::integrate_adaptive(stepper, rhs, y, tr.t_min(), 0.0, 1e-3);
  return Vec3(y[0], y[1], y[2]);
}

}  // namespace

TEST_CASE("direct shift matches a brute-force perturbed trajectory") {
  for (const Trajectory& tr : {z_trajectory(), sixty_trajectory()}) {
    const double a = 1e-4;
    const Vec3 oracle = (position_at_zero(tr, a) - position_at_zero(tr, -a)) / (2 * a);
    const Vec3 direct = classical_shift_direct(tr, 1.0);
    CHECK((direct - oracle).norm() < 1e-6 * oracle.norm());
  }
}

TEST_CASE("all routes agree") {
  const Trajectory tr = z_trajectory();
  const double alpha = 0.09 / (4 * std::numbers::pi);
  const ShiftReport r = compare_routes(tr, alpha);
  CHECK(r.errors.empty());
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-9);
  const auto fields = momentum_derivative_fields(tr);
  const Vec3 g = shift_quantum_closed(tr, fields, alpha, ClosedForm::green);
  const Vec3 p = shift_quantum_closed(tr, fields, alpha, ClosedForm::parts);
  CHECK((g - p).norm() < 1e-10 * p.norm());
  ShiftOptions fresh;
  fresh.green_mode = GreenMode::fresh;
  CHECK((classical_shift_green(tr, fields, alpha, fresh) - p).norm() < 1e-9 * p.norm());
}

TEST_CASE("shift is linear in the coupling") {
  const Trajectory tr = sixty_trajectory();
  const auto fields = momentum_derivative_fields(tr);
  const Vec3 s1 = shift_quantum_closed(tr, fields, 0.01), s3 = shift_quantum_closed(tr, fields, 0.03);
  CHECK((3.0 * s1 - s3).norm() < 1e-15);
  CHECK(shift_quantum_closed(tr, fields, 0.0).norm() == 0.0);
}

TEST_CASE("route subsets leave missing residuals as NaN") {
  const Trajectory tr = z_trajectory();
  const ShiftReport r = compare_routes(tr, 0.01, {}, {Route::direct, Route::quantum});
  CHECK(r.shift.size() == 2);
  CHECK(std::isnan(r.residual[0][1]));
  CHECK(r.residual[0][2] < 1e-9);
}

TEST_CASE("threshold decides the verdict") {
  const Trajectory tr = z_trajectory();
  ShiftOptions o;
  o.angular_polar = 4;
  o.angular_azimuth = 8;
  o.threshold = 1e-12;
  CHECK_FALSE(compare_routes(tr, 0.01, o).pass);
}

TEST_CASE("route names") {
  for (Route r : all_routes) CHECK(parse_route(to_string(r)) == r);
  CHECK_FALSE(parse_route("magic").has_value());
}
