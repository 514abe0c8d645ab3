#include "rrshift/angular.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <numbers>

using namespace rrshift;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double pi = std::numbers::pi;

// Moments along v = |v| e_z reduce to 1D integrals in c = cos(theta).
double axial_moment(double v, int power, int n_cos) {
  auto f = [&](double c) { return 2 * pi * std::pow(c, n_cos) * std::pow(1 - v * c, -power); };
  return gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-14);
}

}  // namespace

TEST_CASE("rest values") {
  const AngularIntegrals a = angular_integrals(Vec3::Zero());
  CHECK(a.I0 == doctest::Approx(4 * pi));
  CHECK(a.I1.norm() < 1e-14);
  CHECK((a.I2 - Mat3::Identity() * 4 * pi / 3).norm() < 1e-13);
  for (const Mat3& m : a.I3) CHECK(m.norm() < 1e-13);
}

TEST_CASE("I0 closed form") {
  for (double v : {0.1, 0.5, 0.9}) CHECK(angular_integrals(Vec3(0, 0, v)).I0 == doctest::Approx(4 * pi / (1 - v * v)));
}

TEST_CASE("axial components against 1D quadrature") {
  for (double v : {1e-4, 0.3, 0.85}) {
    const AngularIntegrals a = angular_integrals(Vec3(0, 0, v));
    CHECK(a.I1[2] == doctest::Approx(axial_moment(v, 3, 1)).epsilon(1e-12));
    CHECK(a.I2(2, 2) == doctest::Approx(axial_moment(v, 4, 2)).epsilon(1e-12));
    CHECK(a.I3[2](2, 2) == doctest::Approx(axial_moment(v, 5, 3)).epsilon(1e-12));
    // trace identities: n.n = 1
    CHECK(a.I2.trace() == doctest::Approx(axial_moment(v, 4, 0)).epsilon(1e-12));
    CHECK((a.I3[0](0, 2) + a.I3[1](1, 2) + a.I3[2](2, 2)) == doctest::Approx(axial_moment(v, 5, 1)).epsilon(1e-12));
  }
}

TEST_CASE("closed forms agree with direct quadrature off axis") {
  const Vec3 v(0.3, -0.5, 0.4);
  const AngularIntegrals c = angular_integrals(v), q = angular_integrals_quadrature(v);
  CHECK(c.I0 == doctest::Approx(q.I0).epsilon(1e-12));
  CHECK((c.I1 - q.I1).norm() < 1e-11 * c.I1.norm());
  CHECK((c.I2 - q.I2).norm() < 1e-11 * c.I2.norm());
  for (int i = 0; i < 3; ++i) CHECK((c.I3[i] - q.I3[i]).norm() < 1e-11 * c.I3[2].norm() + 1e-12);
}

TEST_CASE("tensors are symmetric") {
  const AngularIntegrals a = angular_integrals(Vec3(0.2, 0.6, -0.1));
  CHECK((a.I2 - a.I2.transpose()).norm() < 1e-13);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        CHECK(a.I3[i](j, k) == doctest::Approx(a.I3[j](i, k)));
        CHECK(a.I3[i](j, k) == doctest::Approx(a.I3[k](j, i)));
      }
    }
  }
}

TEST_CASE("superluminal velocity is rejected") {
  CHECK_THROWS_AS(angular_integrals(Vec3(0, 0, 1.0)), DomainError);
  CHECK_THROWS_AS(angular_integrals(Vec3(std::nan(""), 0, 0)), DomainError);
}
