#include "rrshift/acceptance.hpp"
#include "rrshift/angular.hpp"
#include "rrshift/lorentz_dirac.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace rrshift {

namespace {

// Pinned tolerances, one block per criterion.
constexpr double kRoutesFast = 1e-4;
constexpr double kRoutesFull = 1e-5;
constexpr double kAngular = 1e-10;
constexpr double kLadder = 1e-7;
constexpr double kLadderStep = 1e-4;
constexpr double kSymplectic = 1e-9;
constexpr double kSwap = 1e-7;
constexpr double kJacobiEps = 1e-5;
constexpr double kJacobi = 1e-5;
constexpr double kLorentzDirac = 1e-8;
constexpr double kEnergy = 1e-3;
constexpr double kHbarRatio = 1.7;
constexpr double kCutoff = 1e-3;
constexpr double kParseval = 1e-8;

constexpr double kCharge = 0.3;

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Scenario make(std::string name, Axis axis, Vec4 v_past, Vec3 p, double x1 = 2.0, double x2 = 1.0) {
  Scenario s;
  s.name = std::move(name);
  s.profile.axis = axis;
  s.profile.v_past = v_past;
  s.profile.x1 = x1;
  s.profile.x2 = x2;
  s.mass = 1.0;
  s.charge = kCharge;
  s.p_final = p;
  s.tol = 1e-12;
  return s;
}

CriterionResult start(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

Trajectory trajectory_of(const Scenario& s) { return build_trajectory(s); }

Trajectory reanchored(const Trajectory& traj, const Vec3& dp) {
  return integrate_trajectory(traj.profile(), traj.p_final() + dp, traj.mass(), traj.tol());
}

CriterionResult criterion_routes(Suite suite) {
  CriterionResult r = start(1, "shift routes agree");
  r.tolerance = suite == Suite::fast ? kRoutesFast : kRoutesFull;
  double worst = 0.0;
  for (Scenario s : reference_scenarios()) {
    if (suite == Suite::fast) {
      s.tol = 1e-10;
      s.shift.time_rel_tol = 1e-9;
      s.shift.angular_polar = 32;
      s.shift.angular_azimuth = 64;
    } else {
      s.shift.green_mode = GreenMode::fresh;
    }
    s.shift.threshold = r.tolerance;
    const ShiftReport rep = compare_routes(trajectory_of(s), s.alpha_c(), s.shift);
    if (!rep.errors.empty() || !std::isfinite(rep.max_residual)) {
      r.detail += s.name + ": route failure; ";
      worst = std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, rep.max_residual);
  }
  r.value = worst;
  r.pass = worst < r.tolerance;
  r.detail += "max relative residual " + sci(worst) + " over 4 scenarios x 4 routes";
  return r;
}

double tensor_gap(const AngularIntegrals& a, const AngularIntegrals& b) {
  double num0 = std::abs(a.I0 - b.I0) / std::abs(a.I0);
  double num1 = (a.I1 - b.I1).cwiseAbs().maxCoeff() / std::max(a.I1.cwiseAbs().maxCoeff(), 1e-300);
  double num2 = (a.I2 - b.I2).cwiseAbs().maxCoeff() / a.I2.cwiseAbs().maxCoeff();
  double d3 = 0.0, s3 = 0.0;
  for (int i = 0; i < 3; ++i) {
    d3 = std::max(d3, (a.I3[i] - b.I3[i]).cwiseAbs().maxCoeff());
    s3 = std::max(s3, a.I3[i].cwiseAbs().maxCoeff());
  }
  return std::max({num0, num1, num2, d3 / s3});
}

double ladder_gap(const Vec3& v) {
  const AngularIntegrals c = angular_integrals(v);
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;
  double s1 = c.I1.cwiseAbs().maxCoeff(), s2 = c.I2.cwiseAbs().maxCoeff(), s3 = 0.0;
  for (int i = 0; i < 3; ++i) s3 = std::max(s3, c.I3[i].cwiseAbs().maxCoeff());
  s1 = std::max(s1, 1e-300);
  // five-point derivative along v^k
  auto deriv = [&](int k) {
    const Vec3 h = kLadderStep * Vec3::Unit(k);
    const AngularIntegrals p1 = angular_integrals(v + h), m1 = angular_integrals(v - h);
    const AngularIntegrals p2 = angular_integrals(v + 2 * h), m2 = angular_integrals(v - 2 * h);
    AngularIntegrals d;
    const double w = 1.0 / (12.0 * kLadderStep);
    d.I0 = w * (8 * (p1.I0 - m1.I0) - (p2.I0 - m2.I0));
    d.I1 = w * (8 * (p1.I1 - m1.I1) - (p2.I1 - m2.I1));
    d.I2 = w * (8 * (p1.I2 - m1.I2) - (p2.I2 - m2.I2));
    return d;
  };
  for (int k = 0; k < 3; ++k) {
    const AngularIntegrals d = deriv(k);
    // dI0/dv^k = 2 I1^k, dI1^i/dv^k = 3 I2^ik, dI2^ij/dv^k = 4 I3^ijk
    g1 = std::max(g1, std::abs(d.I0 - 2 * c.I1[k]) / s1);
    for (int i = 0; i < 3; ++i) {
      g2 = std::max(g2, std::abs(d.I1[i] - 3 * c.I2(i, k)) / s2);
      for (int j = 0; j < 3; ++j) g3 = std::max(g3, std::abs(d.I2(i, j) - 4 * c.I3[i](j, k)) / s3);
    }
  }
  return std::max({g1, g2, g3});
}

CriterionResult criterion_angular(std::uint64_t seed) {
  CriterionResult r = start(2, "angular integrals");
  r.tolerance = kAngular;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double worst = 0.0, worst_ladder = 0.0;
  for (int s = 0; s < 50; ++s) {
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    const Vec3 v = 0.9 * std::cbrt(unif(rng)) * dir.normalized();
    worst = std::max(worst, tensor_gap(angular_integrals(v), angular_integrals_quadrature(v, 64, 128)));
    worst_ladder = std::max(worst_ladder, ladder_gap(v));
  }
  r.value = worst;
  r.pass = worst < kAngular && worst_ladder < kLadder;
  r.detail = "closed vs 64x128 " + sci(worst) + " < " + sci(kAngular) + ", ladder " + sci(worst_ladder) + " < " +
             sci(kLadder) + " (50 random v)";
  return r;
}

CriterionResult criterion_symplectic() {
  CriterionResult r = start(3, "symplectic structure");
  r.tolerance = kSymplectic;
  const auto scen = reference_scenarios();
  double worst_product = 0.0, worst_swap = 0.0;
  for (int which : {1, 2}) {
    const Trajectory traj = trajectory_of(scen[which]);
    std::vector<double> kicks;
    for (int k = 0; k < 5; ++k) kicks.push_back(traj.t_min() + (k + 0.5) / 5.0 * (0.0 - traj.t_min()));
    std::vector<JacobiField> fields;
    for (double u : kicks) {
      for (int d = 0; d < 3; ++d) fields.push_back(jacobi_field(traj, d, u));
    }
    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(traj.t_min() * (1.0 - i / 40.0));
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        double scale = 0.0, lo = 1e300, hi = -1e300;
        for (double t : ts) {
          const JacobiField &A = fields[a], &B = fields[b];
          scale = std::max(scale, A.dx(t).norm() * B.dP(t).norm() + B.dx(t).norm() * A.dP(t).norm());
          const double w = symplectic_product(A, B, t);
          lo = std::min(lo, w);
          hi = std::max(hi, w);
        }
        worst_product = std::max(worst_product, (hi - lo) / scale);
      }
    }
    // dx^i_(j)(s; u) = -dx^j_(i)(u; s)
    double dscale = 0.0, dgap = 0.0;
    for (std::size_t si = 0; si < kicks.size(); ++si) {
      for (std::size_t ui = 0; ui < kicks.size(); ++ui) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            const double lhs = fields[3 * ui + j].dx(kicks[si])[i];
            const double rhs = -fields[3 * si + i].dx(kicks[ui])[j];
            dscale = std::max(dscale, std::abs(lhs));
            dgap = std::max(dgap, std::abs(lhs - rhs));
          }
        }
      }
    }
    worst_swap = std::max(worst_swap, dgap / dscale);
  }
  r.value = worst_product;
  r.pass = worst_product < kSymplectic && worst_swap < kSwap;
  r.detail = "product drift " + sci(worst_product) + " < " + sci(kSymplectic) + ", swap " + sci(worst_swap) + " < " +
             sci(kSwap) + " (5x5 kick grid)";
  return r;
}

CriterionResult criterion_jacobi() {
  CriterionResult r = start(4, "Jacobi fields vs finite differences");
  r.tolerance = kJacobi;
  const auto scen = reference_scenarios();
  double worst = 0.0;
  for (int which : {0, 2}) {
    const Trajectory traj = trajectory_of(scen[which]);
    const auto fields = momentum_derivative_fields(traj);
    for (int i = 0; i < 3; ++i) {
      const Vec3 dp = kJacobiEps * Vec3::Unit(i);
      const Trajectory plus = reanchored(traj, dp), minus = reanchored(traj, -dp);
      const double lo = std::max({traj.t_min(), plus.t_min(), minus.t_min()});
      double gap = 0.0, scale = 0.0;
      for (int k = 0; k < 50; ++k) {
        const double t = lo * (1.0 - k / 49.0);
        const Vec3 fd = (plus.state(t).x - minus.state(t).x) / (2 * kJacobiEps);
        const Vec3 jf = fields[i].dx(t);
        gap = std::max(gap, (fd - jf).cwiseAbs().maxCoeff());
        scale = std::max(scale, jf.cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, gap / scale);
    }
  }
  r.value = worst;
  r.pass = worst < kJacobi;
  r.detail = "max relative deviation " + sci(worst) + " (eps " + sci(kJacobiEps) + ", 50 t, 2 scenarios x 3 kicks)";
  return r;
}

CriterionResult criterion_lorentz_dirac(std::uint64_t seed) {
  CriterionResult r = start(5, "Lorentz-Dirac consistency");
  r.tolerance = kLorentzDirac;
  double worst_coord = 0.0, worst_orth = 0.0, worst_rest = 0.0;
  for (const Scenario& s : reference_scenarios()) {
    const Trajectory traj = trajectory_of(s);
    const double alpha = s.alpha_c();
    double fscale = 0.0, oscale = 0.0, gap = 0.0, orth = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double t = traj.t_min() * (1.0 - i / 199.0);
      const Kinematics k = traj.kinematics(t);
      const Vec4 F = ld_four_force(k, alpha);
      const Vec3 f = ld_coordinate_force(k, alpha);
      const Vec4 u = four_velocity(k);
      fscale = std::max(fscale, spatial(F).norm());
      oscale = std::max(oscale, u.norm() * F.norm());
      gap = std::max(gap, (k.gamma * f - spatial(F)).norm());
      orth = std::max(orth, std::abs(minkowski(u, F)));
    }
    worst_coord = std::max(worst_coord, gap / fscale);
    worst_orth = std::max(worst_orth, orth / oscale);
  }
  // Instantaneous rest frame: random a, adot with v = 0.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 20; ++i) {
    Kinematics k;
    k.a = Vec3(gauss(rng), gauss(rng), gauss(rng));
    k.adot = Vec3(gauss(rng), gauss(rng), gauss(rng));
    const Vec3 expect = (2.0 / 3.0) * 0.01 * k.adot;
    worst_rest = std::max(worst_rest, (ld_coordinate_force(k, 0.01) - expect).norm() / expect.norm());
    worst_rest = std::max(worst_rest, (spatial(ld_four_force(k, 0.01)) - expect).norm() / expect.norm());
  }
  // A trajectory whose velocity passes through zero.
  {
    Scenario s = make("rest_crossing", Axis::time, Vec4(0, 0, 0, 0.6), Vec3(0, 0, 0.3));
    const Trajectory traj = trajectory_of(s);
    auto vz = [&](double t) { return traj.kinematics(t).v[2]; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 100;
    const auto root = boost::math::tools::toms748_solve(vz, traj.t_enter(), traj.t_exit(), tol, iters);
    const Kinematics k = traj.kinematics(0.5 * (root.first + root.second));
    const Vec3 expect = (2.0 / 3.0) * s.alpha_c() * k.adot;
    worst_rest = std::max(worst_rest, (ld_coordinate_force(k, s.alpha_c()) - expect).norm() / expect.norm());
  }
  r.value = std::max(worst_coord, worst_orth);
  r.pass = worst_coord < kLorentzDirac && worst_orth < kLorentzDirac && worst_rest < kLorentzDirac;
  r.detail = "gamma*F vs F^i " + sci(worst_coord) + ", u.F " + sci(worst_orth) + ", v=0 limit " + sci(worst_rest) +
             " (all < " + sci(kLorentzDirac) + ")";
  return r;
}

CriterionResult criterion_energy(Suite suite) {
  CriterionResult r = start(6, "radiated energy vs Larmor");
  r.tolerance = kEnergy;
  const auto scen = reference_scenarios();
  std::vector<std::pair<int, SpectralSpec>> runs;
  SpectralSpec a;
  a.n_polar = 16;
  a.n_azimuth = 8;
  a.tail_tol = 1e-7;
  runs.emplace_back(0, a);
  if (suite == Suite::full) {
    SpectralSpec b = a;
    b.n_azimuth = 16;
    runs.emplace_back(1, b);
  }
  double worst = 0.0;
  for (const auto& [which, spec] : runs) {
    const EnergyCheck c = radiated_energy_check(trajectory_of(scen[which]), kCharge, WindowPolicy{}, spec);
    worst = std::max(worst, c.relative_error());
    r.detail += scen[which].name + " " + sci(c.relative_error()) + "; ";
  }
  r.value = worst;
  r.pass = worst < kEnergy;
  r.detail += "max " + sci(worst) + " < " + sci(kEnergy);
  return r;
}

CriterionResult criterion_hbar() {
  CriterionResult r = start(7, "hbar convergence of the amplitude");
  r.tolerance = kHbarRatio;
  Scenario s = make("collinear_long", Axis::time, Vec4(0, 0, 0, -0.8), Vec3(0, 0, 0.5), 4.0, 1.0);
  const Trajectory traj = trajectory_of(s);
  const std::vector<std::pair<double, Vec3>> kn = {{0.5, Vec3(0, 0, 1)},
                                                   {1.0, Vec3(1, 0, 0)},
                                                   {1.5, Vec3(0.6, 0, 0.8)},
                                                   {0.8, Vec3(0.6, 0, -0.8)},
                                                   {1.2, Vec3(0, 0.8, 0.6)}};
  const auto res = hbar_convergence(traj, kCharge, {0.1, 0.05, 0.025}, kn);
  double worst = 1e300;
  for (const auto& c : res) {
    for (double q : c.ratio) worst = std::min(worst, q);
  }
  r.value = worst;
  r.pass = worst >= kHbarRatio;
  r.detail = "min error ratio per halving " + sci(worst) + " >= " + sci(kHbarRatio) + " (hbar 0.1, 0.05, 0.025; 5 k,n)";
  return r;
}

CriterionResult criterion_cutoff() {
  CriterionResult r = start(8, "cutoff independence of the amplitude shift");
  r.tolerance = kCutoff;
  const auto scen = reference_scenarios();
  double worst_taper = 0.0, worst_closed = 0.0;
  for (int which : {0, 2}) {
    const Trajectory traj = trajectory_of(scen[which]);
    SpectralSpec spec;
    spec.n_polar = 16;
    spec.n_azimuth = which == 0 ? 8 : 16;
    spec.tail_tol = 1e-7;
    const Vec3 closed = shift_quantum_closed(traj, momentum_derivative_fields(traj), scen[which].alpha_c());
    WindowPolicy narrow, wide;
    wide.taper_fraction = 2.0 * narrow.taper_fraction;
    const AmplitudeShift s1 = shift_from_amplitudes(traj, kCharge, narrow, spec);
    const AmplitudeShift s2 = shift_from_amplitudes(traj, kCharge, wide, spec);
    worst_taper = std::max(worst_taper, (s1.shift - s2.shift).norm() / s1.shift.norm());
    worst_closed = std::max(worst_closed, (s1.shift - closed).norm() / closed.norm());
    worst_closed = std::max(worst_closed, (s2.shift - closed).norm() / closed.norm());
  }
  r.value = std::max(worst_taper, worst_closed);
  r.pass = worst_taper < kCutoff && worst_closed < kCutoff;
  r.detail = "taper doubling " + sci(worst_taper) + ", vs closed form " + sci(worst_closed) + " (both < " +
             sci(kCutoff) + ")";
  return r;
}

CriterionResult criterion_parseval(Suite suite) {
  CriterionResult r = start(9, "emission probability: double-xi vs |A|^2 forms");
  r.tolerance = kParseval;
  const auto scen = reference_scenarios();
  std::vector<int> which{0};
  if (suite == Suite::full) which.push_back(2);
  double worst = 0.0;
  for (int w : which) {
    const Trajectory traj = trajectory_of(scen[w]);
    SpectralSpec spec;
    spec.n_polar = 6;
    spec.n_azimuth = 4;
    spec.tail_tol = 1e-7;
    WindowPolicy policy;
    const EmissionProbability p =
        emission_probability_reduced(traj, [&](const Vec3& n) { return policy.for_direction(traj, n); }, spec);
    worst = std::max(worst, std::abs(p.single_form - p.double_form) / std::abs(p.single_form));
  }
  r.value = worst;
  r.pass = worst < kParseval;
  r.detail = "max relative difference " + sci(worst) + " < " + sci(kParseval);
  return r;
}

CriterionResult skipped(int id, std::string title) {
  CriterionResult r = start(id, std::move(title));
  r.skipped = true;
  r.pass = true;
  r.detail = "full suite only";
  return r;
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "fast") return Suite::fast;
  if (name == "full") return Suite::full;
  return std::nullopt;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  %d  ", r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL"), r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
  return head + r.title + ": " + r.detail + (r.skipped ? "" : tail);
}

std::vector<Scenario> reference_scenarios() {
  const double s60 = std::sin(std::numbers::pi / 3), c60 = std::cos(std::numbers::pi / 3);
  return {make("a_collinear", Axis::time, Vec4(0, 0, 0, -0.8), Vec3(0, 0, 0.5)),
          make("b_sixty_degrees", Axis::time, Vec4(0, 1.5 * s60, 0, 1.5 * c60), Vec3(0, 0, 0.6)),
          make("c_z_axis_oblique", Axis::z, Vec4(-0.3, 0.3, -0.2, 0.05), Vec3(0.3, 0.1, 0.6)),
          make("d_weak_field", Axis::time, Vec4(0, 0.01, 0, 0.02), Vec3(0.1, 0, 0.3))};
}

std::vector<CriterionResult> run_acceptance(Suite suite, const std::function<void(const CriterionResult&)>& on_result) {
  const std::uint64_t seed = 20240611;
  std::vector<std::function<CriterionResult()>> jobs{
      [&] { return criterion_routes(suite); },
      [&] { return criterion_angular(seed); },
      [] { return criterion_symplectic(); },
      [] { return criterion_jacobi(); },
      [&] { return criterion_lorentz_dirac(seed); },
      [&] { return criterion_energy(suite); },
      [&] { return suite == Suite::full ? criterion_hbar() : skipped(7, "hbar convergence of the amplitude"); },
      [&] {
        return suite == Suite::full ? criterion_cutoff() : skipped(8, "cutoff independence of the amplitude shift");
      },
      [&] { return criterion_parseval(suite); },
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Stopwatch sw;
    CriterionResult r;
    try {
      r = jobs[i]();
    } catch (const std::exception& e) {
      r.id = static_cast<int>(i) + 1;
      r.title = "criterion " + std::to_string(i + 1);
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = sw.seconds();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

}  // namespace rrshift
