#include "rrshift/semiclassical.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <numbers>

using namespace rrshift;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double pi = std::numbers::pi;

PotentialProfile time_profile() {
  PotentialProfile p;
  p.v_past = Vec4(0, 0, 0, -0.8);
  return p;
}

// -e int dt (1, v) chi(xi(t)) exp(i k xi(t)) by adaptive quadrature in t.
CVec4 amplitude_oracle(const Worldline& wl, double k, const Vec3& n, double e, const CutoffWindow& w) {
  std::vector<double> cuts;
  for (double xi : w.joints()) cuts.push_back(t_of_xi(wl, n, xi));
  const auto [t0, t1] = wl.acceleration_support();
  for (double t : {t0, t1}) {
    if (t > cuts.front() && t < cuts.back()) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  CVec4 out = CVec4::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int part = 0; part < 2; ++part) {
      auto f = [&](double t) {
        const double xi = t - n.dot(wl.position(t));
        const double c = mu == 0 ? 1.0 : wl.velocity(t)[mu - 1];
        return -e * c * w.value(xi) * (part == 0 ? std::cos(k * xi) : std::sin(k * xi));
      };
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        sum += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 20, 1e-13);
      }
      out[mu] += part == 0 ? cplx(sum, 0) : cplx(0, sum);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("mode function Wronskian") {
  const ModeFunction phi = solve_mode_function(time_profile(), Vec3(0.1, 0, 0.5), 1.0, 0.05);
  for (double t : {-6.0, -2.0, -1.6, -1.2, -0.5, 1.0}) {
    CHECK(phi.wronskian(t) == doctest::Approx(2 * phi.p0()).epsilon(1e-9));
  }
}

TEST_CASE("free mode function is a plane wave") {
  PotentialProfile p = time_profile();
  p.v_past = Vec4::Zero();
  const ModeFunction phi = solve_mode_function(p, Vec3(0, 0, 0.5), 1.0, 0.1);
  for (double t : {-3.0, -1.5, 0.5}) {
    CHECK(std::abs(phi.value(t) - std::exp(cplx(0, -phi.p0() * t / 0.1))) < 1e-9);
  }
}

TEST_CASE("WKB density error falls as hbar squared") {
  const Vec3 p(0, 0, 0.5);
  auto err = [&](double hbar) {
    const ModeFunction phi = solve_mode_function(time_profile(), p, 1.0, hbar);
    double e = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = -2.0 + i / 200.0;
      e = std::max(e, std::abs(std::norm(phi.value(t)) - phi.p0() / phi.sigma(t)));
    }
    return e;
  };
  const double e1 = err(0.05), e2 = err(0.025);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("mode function preconditions") {
  PotentialProfile z = time_profile();
  z.axis = Axis::z;
  z.v_past = Vec4(0.2, 0, 0, 0);
  CHECK_THROWS_AS(solve_mode_function(z, Vec3(0, 0, 0.5), 1.0, 0.1), UsageError);
  CHECK_THROWS_AS(solve_mode_function(time_profile(), Vec3(0, 0, 0.5), 1.0, 0.01, ModeGridSpec{-3.0, 1.0, 50}),
                  ResolutionError);
}

TEST_CASE("k grid integrates polynomials exactly") {
  const KGrid g(0.5, 2.5, 3, 6);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weight(i) * std::pow(g.node(i), 9);
  CHECK(sum == doctest::Approx((std::pow(2.5, 10) - std::pow(0.5, 10)) / 10).epsilon(1e-13));
}

TEST_CASE("classical amplitude matches direct quadrature in t") {
  const PulseWorldline wl(Vec3(0, 0.1, 0.2), Vec3(0.2, 0, 0.4), 1.0, {-3.0});
  WindowPolicy pol;
  for (const Vec3& n : {Vec3(Vec3::UnitZ()), Vec3(0.6, 0, -0.8)}) {
    const CutoffWindow w = pol.for_direction(wl, n);
    for (double k : {0.3, 2.0, 9.0}) {
      const CVec4 a = amplitude_classical(wl, k, n, 0.3, w).A;
      const CVec4 b = amplitude_oracle(wl, k, n, 0.3, w);
      CHECK((a - b).norm() < 1e-10 * std::max(1.0, b.norm()));
    }
    const AmplitudeSampler s(wl, n, w, 9.0);
    CHECK((s(2.0, 0.3) - amplitude_oracle(wl, 2.0, n, 0.3, w)).norm() < 1e-10);
  }
}

TEST_CASE("amplitude needs a plateau over the acceleration") {
  const PulseWorldline wl(Vec3::Zero(), Vec3(0, 0, 0.3), 1.0, {-2.0});
  CutoffWindow narrow{-1.5, -1.4, 0.1};
  CHECK_THROWS_AS(amplitude_classical(wl, 1.0, Vec3::UnitZ(), 0.3, narrow), UsageError);
}

TEST_CASE("quantum amplitude approaches the classical one") {
  const Trajectory tr = integrate_trajectory(time_profile(), Vec3(0, 0, 0.5), 1.0, 1e-12);
  const auto res = hbar_convergence(tr, 0.3, {0.1, 0.05, 0.025}, {{1.0, Vec3(1, 0, 0)}});
  REQUIRE(res.size() == 1);
  CHECK(res[0].error[2] < res[0].error[1]);
  CHECK(res[0].error[1] < res[0].error[0]);
  CHECK(res[0].ratio[0] > 1.7);
}

TEST_CASE("Larmor energy of a collinear pulse") {
  const Trajectory tr = integrate_trajectory(time_profile(), Vec3(0, 0, 0.5), 1.0, 1e-12);
  auto f = [&](double t) {
    const Kinematics k = tr.kinematics(t);
    return std::pow(k.gamma, 6) * k.a.squaredNorm();
  };
  const double oracle = (2.0 / 3.0) * 0.01 * gauss_kronrod<double, 61>::integrate(f, -2.0, -1.0, 20, 1e-13);
  CHECK(larmor_energy(tr, 0.01) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("emission probability: double form equals the squared amplitude") {
  const PulseWorldline wl(Vec3(0, 0, 0.1), Vec3(0, 0.2, 0.3), 1.0, {-2.0});
  WindowPolicy pol;
  SpectralSpec spec;
  spec.n_polar = 2;
  spec.n_azimuth = 2;
  spec.tail_tol = 1e-6;
  const EmissionProbability p =
      emission_probability_reduced(wl, [&](const Vec3& n) { return pol.for_direction(wl, n); }, spec);
  CHECK(p.single_form == doctest::Approx(p.double_form).epsilon(1e-9));
}
