#include "rrshift/variational.hpp"
#include "rrshift/lorentz_dirac.hpp"

#include <algorithm>
#include <cmath>

namespace rrshift {

namespace {

ode::Options options_for(const Trajectory& traj) {
  ode::Options o;
  o.rtol = traj.tol();
  o.atol = traj.tol();
  return o;
}

std::array<double, 2> breakpoints(const Trajectory& traj) { return {traj.t_enter(), traj.t_exit()}; }

void require_domain(const Trajectory& traj, double t) {
  if (!traj.in_domain(t)) throw RangeError("time outside the trajectory domain");
}

}  // namespace

HessianSample hamiltonian_hessian(const Trajectory& traj, double t) {
  const State s = traj.state(t);
  const PotentialProfile& prof = traj.profile();
  const double m = traj.mass();
  const double coord = traj.coordinate(t, s.x);
  const Vec4 V = eval_derivative(prof, coord, 0);
  const Vec3 pi = s.P - spatial(V);
  const double sigma = std::sqrt(pi.squaredNorm() + m * m);
  const Vec3 v = pi / sigma;

  HessianSample h;
  h.t = t;
  h.H_PP = (Mat3::Identity() - v * v.transpose()) / sigma;
  const int a = axis_index(prof.axis);
  if (a >= 0) {
    const Vec4 dV = eval_derivative(prof, coord, 1);
    const Vec4 d2V = eval_derivative(prof, coord, 2);
    const Vec3 dVs = spatial(dV);
    const Vec3 row = -(h.H_PP * dVs);
    h.H_xP.row(a) = row.transpose();
    h.H_xx(a, a) = dVs.dot(h.H_PP * dVs) - v.dot(spatial(d2V)) + d2V[0];
  }
  return h;
}

double hamiltonian_value(const Trajectory& traj, double t, const Vec3& x, const Vec3& P) {
  const Vec4 V = eval_potential(traj.profile(), traj.coordinate(t, x));
  return std::sqrt((P - spatial(V)).squaredNorm() + traj.mass() * traj.mass()) + V[0];
}

ode::State<6> variational_rhs(const HessianSample& h, const ode::State<6>& y) {
  const Vec3 dx = y.head<3>();
  const Vec3 dP = y.tail<3>();
  ode::State<6> out;
  out.head<3>() = h.H_xP.transpose() * dx + h.H_PP * dP;
  out.tail<3>() = -h.H_xx * dx - h.H_xP * dP;
  return out;
}

JacobiField::JacobiField(Trajectory traj, int direction, double kick_time, ode::DenseSolution<6> dense)
    : traj_(std::move(traj)),
      direction_(direction),
      kick_time_(kick_time),
      dense_(std::make_shared<const ode::DenseSolution<6>>(std::move(dense))) {}

Vec3 JacobiField::dx(double t) const {
  if (t == kick_time_) return Vec3::Zero();
  return (*dense_)(t).head<3>();
}

Vec3 JacobiField::dP(double t) const {
  if (t == kick_time_) return Vec3::Unit(direction_);
  return (*dense_)(t).tail<3>();
}

Vec3 JacobiField::dx_rate(double t) const {
  ode::State<6> y;
  y << dx(t), dP(t);
  return variational_rhs(hamiltonian_hessian(traj_, t), y).head<3>();
}

JacobiField jacobi_field(const Trajectory& traj, int direction, double kick_time) {
  if (direction < 0 || direction > 2) throw UsageError("kick direction must be 0, 1 or 2");
  require_domain(traj, kick_time);
  auto rhs = [&traj](double t, const ode::State<6>& y) { return variational_rhs(hamiltonian_hessian(traj, t), y); };
  ode::State<6> y0 = ode::State<6>::Zero();
  y0[3 + direction] = 1.0;

  ode::Integrator<6> integ(options_for(traj));
  const auto bps = breakpoints(traj);
  auto sweep = [&](double stop) {
    double t = kick_time;
    ode::State<6> y = y0;
    std::vector<double> stops;
    for (double b : bps) {
      if ((b - kick_time) * (stop - kick_time) > 0 && std::abs(b - kick_time) < std::abs(stop - kick_time)) {
        stops.push_back(b);
      }
    }
    std::sort(stops.begin(), stops.end(), [&](double p, double q) { return std::abs(p - kick_time) < std::abs(q - kick_time); });
    stops.push_back(stop);
    for (double st : stops) integ.advance(rhs, t, y, st);
  };
  sweep(traj.t_min());
  sweep(0.0);
  return JacobiField(traj, direction, kick_time, integ.finish());
}

std::array<JacobiField, 3> momentum_derivative_fields(const Trajectory& traj) {
  return {jacobi_field(traj, 0, 0.0), jacobi_field(traj, 1, 0.0), jacobi_field(traj, 2, 0.0)};
}

double symplectic_product(const JacobiField& A, const JacobiField& B, double t) {
  if (&A.trajectory().dense() != &B.trajectory().dense()) {
    throw UsageError("symplectic product of Jacobi fields on different trajectories");
  }
  return A.dx(t).dot(B.dP(t)) - B.dx(t).dot(A.dP(t));
}

Mat3 kick_response_at_anchor(const Trajectory& traj, double s) {
  require_domain(traj, s);
  using Block = ode::State<18>;
  auto rhs = [&traj](double t, const Block& y) {
    const HessianSample h = hamiltonian_hessian(traj, t);
    Block out;
    for (int j = 0; j < 3; ++j) out.segment<6>(6 * j) = variational_rhs(h, y.segment<6>(6 * j));
    return out;
  };
  Block y = Block::Zero();
  for (int j = 0; j < 3; ++j) y[6 * j + 3 + j] = 1.0;
  const auto bps = breakpoints(traj);
  ode::Integrator<18> integ(options_for(traj));
  double t = s;
  for (double b : bps) {
    if (b > t && b < 0.0) integ.advance(rhs, t, y, b);
  }
  integ.advance(rhs, t, y, 0.0);
  Mat3 M;
  for (int j = 0; j < 3; ++j) M.col(j) = y.segment<3>(6 * j);
  return M;
}

Perturbation::Perturbation(double alpha_c, ode::DenseSolution<6> unit)
    : alpha_c_(alpha_c), unit_(std::make_shared<const ode::DenseSolution<6>>(std::move(unit))) {}

Vec3 Perturbation::dx(double t) const { return alpha_c_ * (*unit_)(t).head<3>(); }
Vec3 Perturbation::dP(double t) const { return alpha_c_ * (*unit_)(t).tail<3>(); }

Perturbation retarded_perturbation(const Trajectory& traj, double alpha_c) {
  auto rhs = [&traj](double t, const ode::State<6>& y) {
    const State s = traj.state(t);
    const Kinematics k = traj.kinematics_at(s);
    ode::State<6> out = variational_rhs(hamiltonian_hessian(traj, t), y);
    out.tail<3>() += ld_coordinate_force(k, 1.0);
    return out;
  };
  const auto bps = breakpoints(traj);
  return Perturbation(alpha_c, ode::integrate<6>(rhs, traj.t_min(), ode::State<6>::Zero(), 0.0, options_for(traj), bps));
}

}  // namespace rrshift
