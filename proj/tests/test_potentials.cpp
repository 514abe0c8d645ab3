#include "rrshift/potentials.hpp"

#include <doctest.h>

using namespace rrshift;

namespace {

PotentialProfile profile(Axis axis = Axis::z) {
  PotentialProfile p;
  p.axis = axis;
  p.v_past = Vec4(-0.3, 0.3, -0.2, 0.05);
  return p;
}

}  // namespace

TEST_CASE("shapes run from 0 to 1 with C3 joins") {
  for (ShapeKind s : {ShapeKind::smoothstep7, ShapeKind::raised_cosine}) {
    CHECK(shape_derivative(s, 0.0, 0) == doctest::Approx(0.0));
    CHECK(shape_derivative(s, 1.0, 0) == doctest::Approx(1.0));
    for (int k = 1; k <= 3; ++k) {
      CHECK(std::abs(shape_derivative(s, 0.0, k)) < 1e-12);
      CHECK(std::abs(shape_derivative(s, 1.0, k)) < 1e-12);
    }
  }
  CHECK(shape_derivative(ShapeKind::smoothstep7, 0.5, 0) == doctest::Approx(0.5));
}

TEST_CASE("shape derivatives match finite differences") {
  const double h = 1e-5;
  for (ShapeKind s : {ShapeKind::smoothstep7, ShapeKind::raised_cosine, ShapeKind::smoothstep3}) {
    for (double u : {0.13, 0.5, 0.77}) {
      for (int k = 1; k <= 3; ++k) {
        const double fd = (shape_derivative(s, u + h, k - 1) - shape_derivative(s, u - h, k - 1)) / (2 * h);
        CHECK(shape_derivative(s, u, k) == doctest::Approx(fd).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("potential is constant outside the transition") {
  const PotentialProfile p = profile();
  CHECK((eval_potential(p, -5.0) - p.v_past).norm() == 0.0);
  CHECK(eval_potential(p, -0.5).norm() == 0.0);
  CHECK(eval_potential(p, -1.5)[1] == doctest::Approx(0.5 * p.v_past[1]));
  CHECK(eval_gradient(p, -3.0).norm() == 0.0);
}

TEST_CASE("potential derivatives match finite differences") {
  const PotentialProfile p = profile();
  const double h = 1e-6;
  for (double s : {-1.9, -1.4, -1.05}) {
    for (int k = 1; k <= 3; ++k) {
      const Vec4 fd = (eval_derivative(p, s + h, k - 1) - eval_derivative(p, s - h, k - 1)) / (2 * h);
      CHECK((eval_derivative(p, s, k) - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("validation rejects bad profiles") {
  CHECK(validate_profile(profile()).ok);

  PotentialProfile p = profile();
  p.shape = ShapeKind::smoothstep3;
  CHECK_FALSE(validate_profile(p).ok);

  p = profile();
  p.x1 = p.x2;
  CHECK_FALSE(validate_profile(p).ok);

  p = profile();
  p.x1 = 0.5;
  CHECK_FALSE(validate_profile(p).ok);

  p = profile(Axis::time);
  CHECK_FALSE(validate_profile(p).ok);  // nonzero V^0 for the time axis
  p.v_past[0] = 0.0;
  CHECK(validate_profile(p).ok);

  p.v_past[2] = std::nan("");
  CHECK_FALSE(validate_profile(p).ok);
}

TEST_CASE("names round trip") {
  for (Axis a : {Axis::time, Axis::x, Axis::y, Axis::z}) CHECK(parse_axis(to_string(a)) == a);
  for (ShapeKind s : {ShapeKind::smoothstep7, ShapeKind::raised_cosine, ShapeKind::smoothstep3}) {
    CHECK(parse_shape(to_string(s)) == s);
  }
  CHECK_FALSE(parse_axis("w").has_value());
}
