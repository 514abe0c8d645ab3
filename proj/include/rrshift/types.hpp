#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace rrshift {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;  // (V^0, V^1, V^2, V^3), c = 1
using Mat3 = Eigen::Matrix3d;
using CVec4 = Eigen::Matrix<std::complex<double>, 4, 1>;

/// Minkowski product with signature (+,-,-,-).
inline double minkowski(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

inline std::complex<double> minkowski(const CVec4& a, const CVec4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

inline Vec4 four(double t, const Vec3& x) { return Vec4(t, x[0], x[1], x[2]); }
inline Vec3 spatial(const Vec4& v) { return v.tail<3>(); }

/// Non-finite input or a value outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Evaluation outside the time span a solution was built for.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// ODE solver or quadrature did not reach the requested accuracy.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The reference particle turned around inside the potential.
struct ReflectedTrajectory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller broke a precondition of an API (mismatched inputs, bad window, ...).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Time grid too coarse for the oscillation it has to carry.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// k-space integral whose tail did not die off within the allowed range.
struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite-difference step outside its linear regime.
struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rrshift
