#pragma once

#include "rrshift/types.hpp"

#include <array>

namespace rrshift {

/// Solid-angle moments of the retarded-time Jacobian over photon directions n:
///   I0 = int dOmega (1 - n.v)^-2,  I1^i = int n^i (1 - n.v)^-3,
///   I2^ij = int n^i n^j (1 - n.v)^-4,  I3^ijk = int n^i n^j n^k (1 - n.v)^-5.
struct AngularIntegrals {
  Vec3 v = Vec3::Zero();
  double I0 = 0.0;
  Vec3 I1 = Vec3::Zero();
  Mat3 I2 = Mat3::Zero();
  std::array<Mat3, 3> I3{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};  // I3[i](j,k)
};

/// Closed forms; throws DomainError for |v| >= 1.
AngularIntegrals angular_integrals(const Vec3& v);

/// Same moments by direct product quadrature with the polar axis along v.
AngularIntegrals angular_integrals_quadrature(const Vec3& v, int n_polar = 64, int n_azimuth = 128);

}  // namespace rrshift
