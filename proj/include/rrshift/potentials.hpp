#pragma once

#include "rrshift/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rrshift {

/// Spacetime coordinate the external potential depends on.
enum class Axis { time, x, y, z };

/// Transition shapes S(u) on u in [0,1], S(0)=0, S(1)=1.
///   smoothstep7   -20u^7 + 70u^6 - 84u^5 + 35u^4 (C3 at both ends)
///   raised_cosine (1 - cos(pi q(u)))/2 with q = 3u^2 - 2u^3 (C3 at both ends)
///   smoothstep3   3u^2 - 2u^3, only C1; kept so profile validation has something to reject
enum class ShapeKind { smoothstep7, raised_cosine, smoothstep3 };

std::optional<Axis> parse_axis(std::string_view name);
std::optional<ShapeKind> parse_shape(std::string_view name);
std::string to_string(Axis axis);
std::string to_string(ShapeKind shape);

/// Spatial index (0,1,2) of a space axis, -1 for the time axis.
int axis_index(Axis axis);

/// k-th derivative (k = 0..3) of the transition shape at u in [0,1].
double shape_derivative(ShapeKind shape, double u, int order);

/// External potential V^mu(x^a): equal to v_past for x^a <= -x1, zero for
/// x^a >= -x2, and v_past * (1 - S((x^a + x1)/(x1 - x2))) in between.
struct PotentialProfile {
  Axis axis = Axis::time;
  Vec4 v_past = Vec4::Zero();
  double x1 = 2.0;
  double x2 = 1.0;
  ShapeKind shape = ShapeKind::smoothstep7;

  double width() const { return x1 - x2; }
  bool time_dependent() const { return axis == Axis::time; }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> messages;

  void fail(std::string msg) {
    ok = false;
    messages.push_back(std::move(msg));
  }
};

ValidationReport validate_profile(const PotentialProfile& profile);

Vec4 eval_potential(const PotentialProfile& profile, double s);

/// dV^mu/dx^a.
Vec4 eval_gradient(const PotentialProfile& profile, double s);

/// d^k V^mu / (dx^a)^k for k = 0..3.
Vec4 eval_derivative(const PotentialProfile& profile, double s, int order);

}  // namespace rrshift
