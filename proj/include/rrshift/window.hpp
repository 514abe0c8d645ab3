#pragma once

#include "rrshift/dynamics.hpp"
#include "rrshift/potentials.hpp"

#include <array>

namespace rrshift {

/// Retarded-time variable xi = t - n.x(t) along a world line.
double xi_of(const Worldline& wl, const Vec3& n, double t);
/// Inverse of xi_of (xi is strictly increasing in t for |v| < 1).
double t_of_xi(const Worldline& wl, const Vec3& n, double xi);

/// Smooth cut-off chi(xi): 1 on [xi_on, xi_off], rising over
/// [xi_on - taper, xi_on] and falling over [xi_off, xi_off + taper] with a
/// C3 transition shape, 0 elsewhere.
struct CutoffWindow {
  double xi_on = 0.0;
  double xi_off = 0.0;
  double taper = 1.0;
  ShapeKind shape = ShapeKind::smoothstep7;

  double lo() const { return xi_on - taper; }
  double hi() const { return xi_off + taper; }
  /// Points where chi loses smoothness, ascending.
  std::array<double, 4> joints() const { return {lo(), xi_on, xi_off, hi()}; }

  double value(double xi) const { return derivative(xi, 0); }
  double derivative(double xi, int order) const;
};

/// Per-direction window construction. With D the xi-length of the image of
/// the acceleration interval, the plateau is that image padded by
/// pad_fraction * D on each side and the taper is taper_fraction * D.
struct WindowPolicy {
  double taper_fraction = 0.5;
  double pad_fraction = 0.5;
  ShapeKind shape = ShapeKind::smoothstep7;

  CutoffWindow for_direction(const Worldline& wl, const Vec3& n) const;
};

/// UsageError unless the plateau contains the xi-image of the world line's
/// acceleration support.
void require_plateau_covers(const CutoffWindow& w, const Worldline& wl, const Vec3& n);

}  // namespace rrshift
