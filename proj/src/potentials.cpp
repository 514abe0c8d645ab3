#include "rrshift/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rrshift {

std::optional<Axis> parse_axis(std::string_view name) {
  if (name == "time" || name == "t") return Axis::time;
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  return std::nullopt;
}

std::optional<ShapeKind> parse_shape(std::string_view name) {
  if (name == "smoothstep7") return ShapeKind::smoothstep7;
  if (name == "raised_cosine") return ShapeKind::raised_cosine;
  if (name == "smoothstep3") return ShapeKind::smoothstep3;
  return std::nullopt;
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::time: return "time";
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

std::string to_string(ShapeKind shape) {
  switch (shape) {
    case ShapeKind::smoothstep7: return "smoothstep7";
    case ShapeKind::raised_cosine: return "raised_cosine";
    case ShapeKind::smoothstep3: return "smoothstep3";
  }
  return "?";
}

int axis_index(Axis axis) {
  switch (axis) {
    case Axis::time: return -1;
    case Axis::x: return 0;
    case Axis::y: return 1;
    case Axis::z: return 2;
  }
  return -1;
}

namespace {

double smoothstep7(double u, int order) {
  const double w = 1.0 - u;
  switch (order) {
    case 0: return u * u * u * u * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
    case 1: return 140.0 * u * u * u * w * w * w;
    case 2: return 420.0 * u * u * w * w * (1.0 - 2.0 * u);
    case 3: return 840.0 * u * w * (1.0 - 5.0 * u + 5.0 * u * u);
    default: break;
  }
  throw DomainError("shape derivative order must be 0..3");
}

double raised_cosine(double u, int order) {
  constexpr double pi = std::numbers::pi;
  const double q = u * u * (3.0 - 2.0 * u);
  const double q1 = 6.0 * u * (1.0 - u);
  const double q2 = 6.0 - 12.0 * u;
  const double q3 = -12.0;
  const double s = std::sin(pi * q);
  const double c = std::cos(pi * q);
  switch (order) {
    case 0: return 0.5 * (1.0 - c);
    case 1: return 0.5 * pi * s * q1;
    case 2: return 0.5 * pi * pi * c * q1 * q1 + 0.5 * pi * s * q2;
    case 3:
      return -0.5 * pi * pi * pi * s * q1 * q1 * q1 + 1.5 * pi * pi * c * q1 * q2 +
             0.5 * pi * s * q3;
    default: break;
  }
  throw DomainError("shape derivative order must be 0..3");
}

double smoothstep3(double u, int order) {
  switch (order) {
    case 0: return u * u * (3.0 - 2.0 * u);
    case 1: return 6.0 * u * (1.0 - u);
    case 2: return 6.0 - 12.0 * u;
    case 3: return -12.0;
    default: break;
  }
  throw DomainError("shape derivative order must be 0..3");
}

void require_finite(double s) {
  if (!std::isfinite(s)) throw DomainError("potential evaluated at a non-finite coordinate");
}

}  // namespace

double shape_derivative(ShapeKind shape, double u, int order) {
  switch (shape) {
    case ShapeKind::smoothstep7: return smoothstep7(u, order);
    case ShapeKind::raised_cosine: return raised_cosine(u, order);
    case ShapeKind::smoothstep3: return smoothstep3(u, order);
  }
  return 0.0;
}

ValidationReport validate_profile(const PotentialProfile& p) {
  ValidationReport report;
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2) || !p.v_past.allFinite()) {
    report.fail("profile parameters must be finite");
    return report;
  }
  if (p.x2 <= 0.0) report.fail("x2 must be positive");
  if (p.x1 == p.x2) {
    report.fail("degenerate transition region");
  } else if (p.x1 < p.x2) {
    report.fail("x1 must exceed x2");
  }
  if (p.axis == Axis::time && p.v_past[0] != 0.0) {
    report.fail("time component must be gauged away");
  }

  // C3 joins: derivatives 1..3 of the shape must vanish at both ends
  // relative to their interior magnitude.
  for (int k = 1; k <= 3; ++k) {
    double interior = 0.0;
    for (int i = 1; i < 200; ++i) {
      interior = std::max(interior, std::abs(shape_derivative(p.shape, i / 200.0, k)));
    }
    const double at0 = std::abs(shape_derivative(p.shape, 0.0, k));
    const double at1 = std::abs(shape_derivative(p.shape, 1.0, k));
    if (std::max(at0, at1) > 1e-10 * interior) {
      report.fail("transition shape '" + to_string(p.shape) + "' is not C3 at the joins (derivative " +
                  std::to_string(k) + ")");
      break;
    }
  }
  return report;
}

Vec4 eval_derivative(const PotentialProfile& p, double s, int order) {
  require_finite(s);
  if (order < 0 || order > 3) throw DomainError("potential derivative order must be 0..3");
  if (s <= -p.x1) return order == 0 ? p.v_past : Vec4::Zero();
  if (s >= -p.x2) return Vec4::Zero();
  const double width = p.width();
  const double u = (s + p.x1) / width;
  if (order == 0) return p.v_past * (1.0 - shape_derivative(p.shape, u, 0));
  return p.v_past * (-shape_derivative(p.shape, u, order) / std::pow(width, order));
}

Vec4 eval_potential(const PotentialProfile& p, double s) { return eval_derivative(p, s, 0); }

Vec4 eval_gradient(const PotentialProfile& p, double s) { return eval_derivative(p, s, 1); }

}  // namespace rrshift
