#include "rrshift/dynamics.hpp"

#include <cmath>
#include <string>

namespace rrshift {

namespace {

ode::State<6> pack(const Vec3& x, const Vec3& P) {
  ode::State<6> y;
  y << x, P;
  return y;
}

struct Local {
  Vec4 V, dV, d2V;
  Vec3 pi;
  double sigma;
  Vec3 v;
};

Local local_fields(const PotentialProfile& prof, double mass, double s, const Vec3& P, int max_order) {
  Local L;
  L.V = eval_derivative(prof, s, 0);
  L.dV = max_order >= 1 ? eval_derivative(prof, s, 1) : Vec4::Zero();
  L.d2V = max_order >= 2 ? eval_derivative(prof, s, 2) : Vec4::Zero();
  L.pi = P - spatial(L.V);
  L.sigma = std::sqrt(L.pi.squaredNorm() + mass * mass);
  L.v = L.pi / L.sigma;
  return L;
}

ode::State<6> hamiltonian_flow(const PotentialProfile& prof, double mass, double t, const ode::State<6>& y) {
  const int a = axis_index(prof.axis);
  const Vec3 x = y.head<3>();
  const Vec3 P = y.tail<3>();
  const Local L = local_fields(prof, mass, a < 0 ? t : x[a], P, 1);
  Vec3 Pdot = Vec3::Zero();
  if (a >= 0) Pdot[a] = L.v.dot(spatial(L.dV)) - L.dV[0];
  return pack(L.v, Pdot);
}

}  // namespace

Trajectory::Trajectory(PotentialProfile profile, Vec3 p_final, double mass, double tol,
                       std::shared_ptr<const Dense> dense, double t_enter, double t_exit, double hamiltonian)
    : profile_(std::move(profile)),
      p_final_(std::move(p_final)),
      mass_(mass),
      tol_(tol),
      dense_(std::move(dense)),
      t_min_(dense_->t_lo()),
      t_enter_(t_enter),
      t_exit_(t_exit),
      hamiltonian_(hamiltonian) {
  const State first = state(t_min_);
  x_min_ = first.x;
  v_past_ = kinematics_at(first).v;
  v_future_ = kinematics_at(state(0.0)).v;
}

double Trajectory::coordinate(double t, const Vec3& x) const {
  const int a = axis_index(profile_.axis);
  return a < 0 ? t : x[a];
}

State Trajectory::state(double t) const {
  if (!in_domain(t)) {
    throw RangeError("trajectory evaluated at t = " + std::to_string(t) + " outside [" + std::to_string(t_min_) +
                     ", 0]");
  }
  const ode::State<6> y = (*dense_)(t);
  return State{t, y.head<3>(), y.tail<3>()};
}

ode::State<6> Trajectory::flow(double t, const ode::State<6>& y) const {
  return hamiltonian_flow(profile_, mass_, t, y);
}

Vec3 Trajectory::external_force_at(const State& s) const {
  const Local L = local_fields(profile_, mass_, coordinate(s.t, s.x), s.P, 1);
  const int a = axis_index(profile_.axis);
  if (a < 0) return -spatial(L.dV);
  Vec3 f = -spatial(L.dV) * L.v[a];
  f[a] += L.v.dot(spatial(L.dV)) - L.dV[0];
  return f;
}

Kinematics Trajectory::kinematics_at(const State& s) const {
  const Local L = local_fields(profile_, mass_, coordinate(s.t, s.x), s.P, 2);
  const int a = axis_index(profile_.axis);
  const Vec3 dVs = spatial(L.dV);
  const Vec3 d2Vs = spatial(L.d2V);

  // f = d(pi)/dt, the mechanical-momentum rate; sigma' = v.f.
  Vec3 f;
  if (a < 0) {
    f = -dVs;
  } else {
    f = -dVs * L.v[a];
    f[a] += L.v.dot(dVs) - L.dV[0];
  }
  const double sigma_dot = L.v.dot(f);

  Kinematics k;
  k.v = L.v;
  k.sigma = L.sigma;
  k.gamma = L.sigma / mass_;
  k.a = (f - L.v * sigma_dot) / L.sigma;

  // df/dt through the chain rule (coordinate rate is 1 or v^a).
  Vec3 fdot;
  if (a < 0) {
    fdot = -d2Vs;
  } else {
    const double va = L.v[a];
    fdot = -d2Vs * va * va - dVs * k.a[a];
    fdot[a] += k.a.dot(dVs) + L.v.dot(d2Vs) * va - L.d2V[0] * va;
  }
  const double sigma_ddot = k.a.dot(f) + L.v.dot(fdot);
  k.adot = (fdot - 2.0 * k.a * sigma_dot - L.v * sigma_ddot) / L.sigma;
  return k;
}

double Trajectory::mass_shell_residual(double t) const {
  const State s = state(t);
  const double coord = coordinate(t, s.x);
  const Vec4 V = eval_potential(profile_, coord);
  const Vec3 pi = s.P - spatial(V);
  double e_ref;
  if (profile_.time_dependent()) {
    e_ref = std::sqrt((p_final_ - spatial(V)).squaredNorm() + mass_ * mass_);
  } else {
    e_ref = hamiltonian_ - V[0];
  }
  return std::abs(e_ref * e_ref - pi.squaredNorm() - mass_ * mass_);
}

Vec3 Trajectory::position(double t) const {
  if (t > 0.0) return v_future_ * t;
  if (t < t_min_) return x_min_ + v_past_ * (t - t_min_);
  return state(t).x;
}

Vec3 Trajectory::velocity(double t) const {
  if (t > 0.0) return v_future_;
  if (t < t_min_) return v_past_;
  return kinematics(t).v;
}

Trajectory integrate_trajectory(const PotentialProfile& profile, const Vec3& p_final, double mass, double tol) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive and finite");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("integrator tolerance must be positive");
  if (!p_final.allFinite()) throw DomainError("final momentum must be finite");
  const ValidationReport report = validate_profile(profile);
  if (!report.ok) {
    std::string msg = "invalid potential profile:";
    for (const auto& m : report.messages) msg += " " + m + ";";
    throw DomainError(msg);
  }
  const int a = axis_index(profile.axis);
  if (a >= 0 && !(p_final[a] > 0.0)) {
    throw DomainError("final momentum must have a positive component along the potential's axis");
  }

  auto flow = [&](double tt, const ode::State<6>& yy) { return hamiltonian_flow(profile, mass, tt, yy); };

  ode::Options opts;
  opts.rtol = tol;
  opts.atol = tol;
  ode::Integrator<6> integ(opts);

  const double p0 = std::sqrt(p_final.squaredNorm() + mass * mass);
  const Vec3 v0 = p_final / p0;
  double t = 0.0;
  ode::State<6> y = pack(Vec3::Zero(), p_final);

  // Zero-potential stretch between the anchor and the end of the acceleration.
  const double t_exit = a < 0 ? -profile.x2 : -profile.x2 / v0[a];
  integ.advance(flow, t, y, t_exit);

  double t_enter;
  if (a < 0) {
    integ.advance(flow, t, y, -profile.x1);
    t_enter = -profile.x1;
  } else {
    // Backward through the transition until x^a reaches -x1, or until the
    // particle's motion along the axis stops (reflection).
    auto crossing = [&](double, const ode::State<6>& yy) {
      const Local L = local_fields(profile, mass, yy[a], yy.tail<3>(), 0);
      return std::min(yy[a] + profile.x1, L.v[a]);
    };
    const double far = t_exit - 1e6 * std::max(1.0, profile.width());
    const bool hit = integ.advance(flow, t, y, far, crossing);
    const Local L = local_fields(profile, mass, y[a], y.tail<3>(), 0);
    if (!hit) throw IntegrationError("particle did not leave the transition region");
    if (L.v[a] <= 1e-12 || y[a] + profile.x1 > 1e-9 * std::max(1.0, profile.x1)) {
      throw ReflectedTrajectory("reflected trajectory: the particle turns around inside the potential");
    }
    t_enter = t;
  }
  const double t_min = t_enter - 0.1 * (t_exit - t_enter);
  integ.advance(flow, t, y, t_min);

  auto dense = std::make_shared<const Trajectory::Dense>(integ.finish());
  return Trajectory(profile, p_final, mass, tol, std::move(dense), t_enter, t_exit, p0);
}

Vec3 external_coordinate_force(const Trajectory& traj, double t) { return traj.external_force_at(traj.state(t)); }

}  // namespace rrshift
