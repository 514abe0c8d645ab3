#pragma once

#include "rrshift/ode.hpp"
#include "rrshift/potentials.hpp"
#include "rrshift/types.hpp"

#include <memory>
#include <utility>

namespace rrshift {

/// Phase-space point of the unperturbed Hamiltonian flow.
struct State {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 P = Vec3::Zero();  // canonical momentum
};

struct Kinematics {
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Vec3 adot = Vec3::Zero();
  double gamma = 1.0;
  double sigma = 0.0;  // m dt/dtau, the local kinetic energy
};

/// A timelike world line that is free (constant velocity) outside a finite
/// acceleration window. position() and velocity() are valid for every t.
class Worldline {
 public:
  virtual ~Worldline() = default;
  virtual Vec3 position(double t) const = 0;
  virtual Vec3 velocity(double t) const = 0;
  /// [t_enter, t_exit]: the acceleration vanishes identically outside.
  virtual std::pair<double, double> acceleration_support() const = 0;
};

/// Straight world line through x0 at t = 0.
class FreeWorldline final : public Worldline {
 public:
  FreeWorldline(Vec3 velocity, Vec3 x0 = Vec3::Zero(), std::pair<double, double> nominal_support = {-1.0, 0.0})
      : v_(std::move(velocity)), x0_(std::move(x0)), support_(nominal_support) {}
  Vec3 position(double t) const override { return x0_ + v_ * t; }
  Vec3 velocity(double) const override { return v_; }
  std::pair<double, double> acceleration_support() const override { return support_; }

 private:
  Vec3 v_, x0_;
  std::pair<double, double> support_;
};

/// Unperturbed trajectory through the potential, anchored at x(0) = 0 with
/// canonical momentum P(0) = p_final. Immutable after construction.
class Trajectory final : public Worldline {
 public:
  using Dense = ode::DenseSolution<6>;

  Trajectory(PotentialProfile profile, Vec3 p_final, double mass, double tol, std::shared_ptr<const Dense> dense,
             double t_enter, double t_exit, double hamiltonian);

  const PotentialProfile& profile() const { return profile_; }
  const Vec3& p_final() const { return p_final_; }
  double mass() const { return mass_; }
  double tol() const { return tol_; }
  double t_min() const { return t_min_; }
  double t_max() const { return 0.0; }
  double t_enter() const { return t_enter_; }
  double t_exit() const { return t_exit_; }
  double acceleration_duration() const { return t_exit_ - t_enter_; }
  /// Conserved energy H (meaningful for space-dependent potentials).
  double hamiltonian() const { return hamiltonian_; }

  bool in_domain(double t) const { return t >= t_min_ && t <= 0.0; }

  /// (x, P) on [t_min, 0]; RangeError outside.
  State state(double t) const;

  /// Kinematics at a phase-space point, differentiating the flow field analytically.
  Kinematics kinematics_at(const State& s) const;
  Kinematics kinematics(double t) const { return kinematics_at(state(t)); }

  /// d/dt (m dx/dtau) along the unperturbed flow (Lorentz force in coordinate time).
  Vec3 external_force_at(const State& s) const;

  /// Hamiltonian vector field (dx/dt, dP/dt).
  ode::State<6> flow(double t, const ode::State<6>& y) const;

  /// Coordinate the potential depends on at a phase-space point.
  double coordinate(double t, const Vec3& x) const;

  /// |E_ref^2 - (P - V)^2 - m^2| where E_ref is fixed by the conserved quantity
  /// (canonical momentum for time-dependent potentials, H otherwise).
  double mass_shell_residual(double t) const;

  /// Asymptotic velocities before and after the acceleration.
  Vec3 v_past() const { return v_past_; }
  Vec3 v_future() const { return v_future_; }

  // Worldline: free extension outside [t_min, 0].
  Vec3 position(double t) const override;
  Vec3 velocity(double t) const override;
  std::pair<double, double> acceleration_support() const override { return {t_enter_, t_exit_}; }

  const Dense& dense() const { return *dense_; }

 private:
  PotentialProfile profile_;
  Vec3 p_final_;
  double mass_;
  double tol_;
  std::shared_ptr<const Dense> dense_;
  double t_min_;
  double t_enter_;
  double t_exit_;
  double hamiltonian_;
  Vec3 x_min_, v_past_, v_future_;
};

/// Integrate the unperturbed trajectory backward from the anchor (t = 0,
/// x = 0, P = p_final). t_min sits before the acceleration by 10% of its
/// duration. Throws ReflectedTrajectory if the particle turns around and
/// IntegrationError on step-size failure.
Trajectory integrate_trajectory(const PotentialProfile& profile, const Vec3& p_final, double mass, double tol);

/// Coordinate-time external force along the trajectory at t.
Vec3 external_coordinate_force(const Trajectory& traj, double t);

}  // namespace rrshift
