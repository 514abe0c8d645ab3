#pragma once

#include "rrshift/dynamics.hpp"
#include "rrshift/ode.hpp"

#include <memory>

namespace rrshift {

/// Second derivatives of H = sqrt((P - V(x))^2 + m^2) + V^0(x) on the
/// reference trajectory. H_xP(j, i) = d^2 H / dx^j dP^i.
struct HessianSample {
  double t = 0.0;
  Mat3 H_xx = Mat3::Zero();
  Mat3 H_xP = Mat3::Zero();
  Mat3 H_PP = Mat3::Zero();
};

HessianSample hamiltonian_hessian(const Trajectory& traj, double t);

/// H(x, P) at time t for an arbitrary phase-space point (used to check the
/// Hessian by finite differences).
double hamiltonian_value(const Trajectory& traj, double t, const Vec3& x, const Vec3& P);

/// Homogeneous variational equations:
///   d(dx)/dt =  H_xP^T dx + H_PP dP
///   d(dP)/dt = -H_xx dx  - H_xP dP
ode::State<6> variational_rhs(const HessianSample& h, const ode::State<6>& y);

/// Response (Delta x, Delta P)(t; s) to a unit momentum kick along
/// `direction` at time s, defined on the whole trajectory domain.
class JacobiField {
 public:
  JacobiField(Trajectory traj, int direction, double kick_time, ode::DenseSolution<6> dense);

  int direction() const { return direction_; }
  double kick_time() const { return kick_time_; }
  const Trajectory& trajectory() const { return traj_; }

  Vec3 dx(double t) const;
  Vec3 dP(double t) const;
  /// d(Delta x)/dt from the variational equations.
  Vec3 dx_rate(double t) const;

 private:
  Trajectory traj_;
  int direction_;
  double kick_time_;
  std::shared_ptr<const ode::DenseSolution<6>> dense_;
};

/// direction in {0, 1, 2}; kick_time in [t_min, 0].
JacobiField jacobi_field(const Trajectory& traj, int direction, double kick_time);

/// The three fields kicked at t = 0; field i gives (dx^k/dp^i)_t.
std::array<JacobiField, 3> momentum_derivative_fields(const Trajectory& traj);

/// dx_A . dP_B - dx_B . dP_A at time t. UsageError if the fields belong to
/// different trajectories.
double symplectic_product(const JacobiField& A, const JacobiField& B, double t);

/// M(i, j) = Delta x^i_(j)(0; s): position response at t = 0 to a unit kick
/// along j at time s, from a fresh forward integration.
Mat3 kick_response_at_anchor(const Trajectory& traj, double s);

/// Retarded first-order response to the Lorentz-Dirac force, zero at t_min.
/// Stored for unit coupling and scaled by alpha_c (the system is linear).
class Perturbation {
 public:
  Perturbation(double alpha_c, ode::DenseSolution<6> unit);

  double alpha_c() const { return alpha_c_; }
  Vec3 dx(double t) const;
  Vec3 dP(double t) const;

 private:
  double alpha_c_;
  std::shared_ptr<const ode::DenseSolution<6>> unit_;
};

Perturbation retarded_perturbation(const Trajectory& traj, double alpha_c);

}  // namespace rrshift
