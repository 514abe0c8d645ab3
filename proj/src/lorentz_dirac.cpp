#include "rrshift/lorentz_dirac.hpp"

namespace rrshift {

Vec4 ld_four_force(const Kinematics& k, double alpha_c) {
  const Vec3& v = k.v;
  const Vec3& a = k.a;
  const double g = k.gamma;
  const double av = a.dot(v);
  const double gdot = g * g * g * av;
  const double gddot = 3.0 * g * g * gdot * av + g * g * g * (k.adot.dot(v) + a.squaredNorm());

  // w = du/dtau = gamma d/dt [gamma (1, v)]
  const Vec4 w = g * gdot * four(1.0, v) + g * g * four(0.0, a);
  // dw/dt, then d^2u/dtau^2 = gamma dw/dt
  const Vec4 wdot = (gdot * gdot + g * gddot) * four(1.0, v) + 3.0 * g * gdot * four(0.0, a) + g * g * four(0.0, k.adot);
  const Vec4 u = g * four(1.0, v);
  return (2.0 * alpha_c / 3.0) * (g * wdot + u * minkowski(w, w));
}

Vec4 ld_four_force(const Trajectory& traj, double t, double alpha_c) {
  return ld_four_force(traj.kinematics(t), alpha_c);
}

Vec3 ld_coordinate_force(const Kinematics& k, double alpha_c) {
  const Vec3& v = k.v;
  const Vec3& a = k.a;
  const double g2 = k.gamma * k.gamma;
  const double g4 = g2 * g2;
  const double g6 = g4 * g2;
  const double av = a.dot(v);
  // d/dt[g^4 (a.v) v + g^2 a] = 4 g^6 (a.v)^2 v + g^4 (adot.v + a^2) v + g^4 (a.v) a
  //                             + 2 g^4 (a.v) a + g^2 adot
  const Vec3 ddt = 4.0 * g6 * av * av * v + g4 * (k.adot.dot(v) + a.squaredNorm()) * v + 3.0 * g4 * av * a +
                   g2 * k.adot;
  return (2.0 * alpha_c / 3.0) * (ddt - g6 * av * av * v - g4 * a.squaredNorm() * v);
}

Vec3 ld_coordinate_force(const Trajectory& traj, double t, double alpha_c) {
  return ld_coordinate_force(traj.kinematics(t), alpha_c);
}

LDForceSample ld_sample(const Trajectory& traj, double t, double alpha_c) {
  const Kinematics k = traj.kinematics(t);
  return LDForceSample{t, ld_four_force(k, alpha_c), ld_coordinate_force(k, alpha_c)};
}

}  // namespace rrshift
