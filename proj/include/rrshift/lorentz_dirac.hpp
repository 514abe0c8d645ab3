#pragma once

#include "rrshift/dynamics.hpp"

namespace rrshift {

struct LDForceSample {
  double t = 0.0;
  Vec4 four_force = Vec4::Zero();  // F^mu_LD, proper-time form
  Vec3 coord_force = Vec3::Zero();  // F^i_LD entering dP/dt
};

/// (2 alpha_c / 3) [d^3x/dtau^3 + dx/dtau (d^2x/dtau^2 . d^2x/dtau^2)],
/// tau-derivatives obtained from t-kinematics with dtau = dt / gamma.
Vec4 ld_four_force(const Kinematics& k, double alpha_c);
Vec4 ld_four_force(const Trajectory& traj, double t, double alpha_c);

/// Coordinate-time radiation reaction
/// (2 alpha_c / 3) { d/dt[gamma^4 (a.v) v + gamma^2 a] - gamma^6 (a.v)^2 v - gamma^4 a^2 v },
/// with the time derivative expanded through adot.
Vec3 ld_coordinate_force(const Kinematics& k, double alpha_c);
Vec3 ld_coordinate_force(const Trajectory& traj, double t, double alpha_c);

LDForceSample ld_sample(const Trajectory& traj, double t, double alpha_c);

/// Four-velocity u = gamma (1, v).
inline Vec4 four_velocity(const Kinematics& k) { return k.gamma * four(1.0, k.v); }

}  // namespace rrshift
