#include "rrshift/semiclassical.hpp"
#include "rrshift/parallel.hpp"
#include "rrshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rrshift {

namespace {

constexpr double pi = std::numbers::pi;
const double spectral_norm = 1.0 / (2.0 * std::pow(2.0 * pi, 3));

cplx minkowski_conj(const CVec4& a, const CVec4& b) {
  // a^mu conj(b)_mu
  cplx s = a[0] * std::conj(b[0]);
  for (int i = 1; i < 4; ++i) s -= a[i] * std::conj(b[i]);
  return s;
}

double sigma_of(const PotentialProfile& prof, const Vec3& p, double mass, double t) {
  return std::sqrt((p - spatial(eval_potential(prof, t))).squaredNorm() + mass * mass);
}

double max_sigma(const PotentialProfile& prof, const Vec3& p, double mass) {
  double s = std::max(sigma_of(prof, p, mass, 0.0), sigma_of(prof, p, mass, -prof.x1));
  for (int i = 1; i < 200; ++i) s = std::max(s, sigma_of(prof, p, mass, -prof.x1 + prof.width() * i / 200.0));
  return s;
}

std::vector<double> sorted_unique(std::vector<double> v, double lo, double hi) {
  std::vector<double> out;
  for (double x : v) {
    if (x >= lo && x <= hi) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Vec3 peak_velocity_axis(const Worldline& wl) {
  const auto [a, b] = wl.acceleration_support();
  Vec3 best = wl.velocity(b);
  for (int i = 0; i <= 64; ++i) {
    const Vec3 v = wl.velocity(a + (b - a) * i / 64.0);
    if (v.norm() > best.norm()) best = v;
  }
  return best.norm() > 1e-12 ? Vec3(best.normalized()) : Vec3(Vec3::UnitZ());
}

quad::SphereRule directions_for(const Worldline& wl, const SpectralSpec& spec) {
  return quad::sphere_rule(spec.n_polar, spec.n_azimuth, spec.polar_axis ? *spec.polar_axis : peak_velocity_axis(wl));
}

// Block-adaptive k integral of a per-block sum. `block(hi, grid)` returns
// the grid-weighted sum of the integrand over [grid.lo, hi].
template <class T, class Block>
T integrate_k(const CutoffWindow& w, const SpectralSpec& spec, Block&& block, double* k_reached = nullptr) {
  const double span = w.hi() - w.lo();
  const double k0 = 8.0 / w.taper;
  double lo = 0.0, hi = k0;
  T total{};
  bool first = true;
  for (int b = 0;; ++b) {
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * span / (2.0 * pi))));
    const KGrid grid(lo, hi, panels, spec.k_order);
    const T part = block(hi, grid);
    total = first ? part : T(total + part);
    first = false;
    if (b >= 2 && quad::magnitude(part) <= spec.tail_tol * quad::magnitude(total)) break;
    if (b + 1 >= spec.max_blocks) throw SpectralError("k integral tail did not converge");
    lo = hi;
    hi *= 2.0;
  }
  if (k_reached) *k_reached = hi;
  return total;
}

double cutoff_phase_panels(double k_max, double dxi, int min_panels, double phase = 6.0) {
  return std::max(min_panels, static_cast<int>(std::ceil(k_max * std::abs(dxi) / phase)));
}

}  // namespace

// ---------------------------------------------------------------- modes

ModeFunction::ModeFunction(PotentialProfile profile, Vec3 p, double mass, double hbar,
                           std::shared_ptr<const ode::DenseSolution<4>> transition, Past past, ModeGridSpec grid)
    : profile_(std::move(profile)),
      p_(std::move(p)),
      mass_(mass),
      hbar_(hbar),
      p0_(std::sqrt(p_.squaredNorm() + mass * mass)),
      transition_(std::move(transition)),
      past_(past),
      grid_(grid) {}

double ModeFunction::sigma(double t) const { return sigma_of(profile_, p_, mass_, t); }

cplx ModeFunction::value(double t) const {
  if (t >= -profile_.x2) return std::polar(1.0, -p0_ * t / hbar_);
  if (t <= -profile_.x1) {
    const double th = past_.sigma0 * t / hbar_;
    return past_.A * std::polar(1.0, -th) + past_.B * std::polar(1.0, th);
  }
  const ode::State<4> y = (*transition_)(t);
  return {y[0], y[1]};
}

cplx ModeFunction::derivative(double t) const {
  const cplx I(0.0, 1.0);
  if (t >= -profile_.x2) return -I * (p0_ / hbar_) * std::polar(1.0, -p0_ * t / hbar_);
  if (t <= -profile_.x1) {
    const double th = past_.sigma0 * t / hbar_;
    const double r = past_.sigma0 / hbar_;
    return -I * r * past_.A * std::polar(1.0, -th) + I * r * past_.B * std::polar(1.0, th);
  }
  const ode::State<4> y = (*transition_)(t);
  return {y[2], y[3]};
}

double ModeFunction::wronskian(double t) const {
  const cplx f = value(t), d = derivative(t);
  // i hbar (f* d - conj(d) f) = -2 hbar Im(f* d)
  return -2.0 * hbar_ * std::imag(std::conj(f) * d);
}

std::vector<double> ModeFunction::grid_times() const {
  std::vector<double> ts(static_cast<std::size_t>(grid_.points));
  for (int i = 0; i < grid_.points; ++i) {
    ts[i] = grid_.t_lo + (grid_.t_hi - grid_.t_lo) * i / std::max(1, grid_.points - 1);
  }
  return ts;
}

ModeFunction solve_mode_function(const PotentialProfile& profile, const Vec3& p, double mass, double hbar,
                                 ModeGridSpec grid, double tol) {
  if (profile.axis != Axis::time) throw UsageError("mode functions need a time-dependent potential");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
  if (grid.t_lo == grid.t_hi) {
    grid.t_lo = -profile.x1 - 0.1 * profile.width();
    grid.t_hi = 0.0;
  }
  const double smax = max_sigma(profile, p, mass);
  const double period = 2.0 * pi * hbar / smax;
  const double span = grid.t_hi - grid.t_lo;
  if (grid.points == 0) grid.points = static_cast<int>(std::ceil(40.0 * span / period)) + 1;
  if (grid.points < 2 || span / (grid.points - 1) > period / 20.0) {
    throw ResolutionError("mode grid under-resolved: fewer than 20 points per period");
  }

  const double p0 = std::sqrt(p.squaredNorm() + mass * mass);
  auto rhs = [&](double t, const ode::State<4>& y) {
    const double s = sigma_of(profile, p, mass, t);
    const double w2 = s * s / (hbar * hbar);
    return ode::State<4>(y[2], y[3], -w2 * y[0], -w2 * y[1]);
  };
  const double t2 = -profile.x2;
  const cplx f2 = std::polar(1.0, -p0 * t2 / hbar);
  const cplx d2 = cplx(0.0, -p0 / hbar) * f2;
  ode::Options opts;
  opts.rtol = tol;
  opts.atol = tol;
  auto dense = std::make_shared<const ode::DenseSolution<4>>(
      ode::integrate<4>(rhs, t2, ode::State<4>(f2.real(), f2.imag(), d2.real(), d2.imag()), -profile.x1, opts));

  ModeFunction::Past past;
  past.sigma0 = sigma_of(profile, p, mass, -profile.x1);
  const ode::State<4> y1 = (*dense)(-profile.x1);
  const cplx f1(y1[0], y1[1]), d1(y1[2], y1[3]);
  const double th = past.sigma0 * (-profile.x1) / hbar;
  const cplx I(0.0, 1.0);
  past.A = 0.5 * (f1 + I * hbar * d1 / past.sigma0) * std::polar(1.0, th);
  past.B = 0.5 * (f1 - I * hbar * d1 / past.sigma0) * std::polar(1.0, -th);
  return ModeFunction(profile, p, mass, hbar, std::move(dense), past, grid);
}

// ---------------------------------------------------------- amplitudes

KGrid::KGrid(double lo_, double hi, int panels_, int order) : lo(lo_), dk((hi - lo_) / panels_), panels(panels_) {
  const quad::Rule base = quad::gauss_legendre(order, 0.0, dk);
  offsets = base.nodes;
  weights = base.weights;
}

AmplitudeSampler::AmplitudeSampler(const Worldline& wl, const Vec3& n, const CutoffWindow& window, double k_max,
                                   int order) {
  const auto joints = window.joints();
  const double t_lo = t_of_xi(wl, n, joints[0]);
  const double t_hi = t_of_xi(wl, n, joints[3]);
  const auto [ta, tb] = wl.acceleration_support();
  const std::vector<double> cuts =
      sorted_unique({t_lo, t_of_xi(wl, n, joints[1]), t_of_xi(wl, n, joints[2]), t_hi, ta, tb}, t_lo, t_hi);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const bool accelerating = a < tb && b > ta;
    const int panels = cutoff_phase_panels(k_max, xi_of(wl, n, b) - xi_of(wl, n, a), accelerating ? 12 : 4);
    const quad::Rule rule = quad::composite_gauss_legendre(order, panels, a, b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      const double xi = xi_of(wl, n, t);
      const double chi = window.value(xi);
      if (chi == 0.0) continue;
      xi_.push_back(xi);
      weight_.push_back(rule.weights[q] * chi);
      u_.push_back(four(1.0, wl.velocity(t)));
    }
  }
}

CVec4 AmplitudeSampler::operator()(double k, double charge) const {
  CVec4 A = CVec4::Zero();
  for (std::size_t q = 0; q < xi_.size(); ++q) {
    const cplx z = weight_[q] * std::polar(1.0, k * xi_[q]);
    for (int mu = 0; mu < 4; ++mu) A[mu] += z * u_[q][mu];
  }
  return -charge * A;
}

std::vector<CVec4> AmplitudeSampler::on_grid(const KGrid& grid, double charge) const {
  const std::size_t m = grid.offsets.size();
  const std::size_t total = grid.size();
  // Split real/imaginary accumulators; std::complex multiply is slow here.
  std::vector<double> re(4 * total, 0.0), im(4 * total, 0.0);
  std::vector<double> zr(m), zi(m);
  for (std::size_t q = 0; q < xi_.size(); ++q) {
    for (std::size_t j = 0; j < m; ++j) {
      const double ph = (grid.lo + grid.offsets[j]) * xi_[q];
      zr[j] = weight_[q] * std::cos(ph);
      zi[j] = weight_[q] * std::sin(ph);
    }
    const double sr = std::cos(grid.dk * xi_[q]), si = std::sin(grid.dk * xi_[q]);
    const double u0 = u_[q][0], u1 = u_[q][1], u2 = u_[q][2], u3 = u_[q][3];
    std::size_t i = 0;
    for (int p = 0; p < grid.panels; ++p) {
      for (std::size_t j = 0; j < m; ++j, ++i) {
        const double a = zr[j], b = zi[j];
        double* r = &re[4 * i];
        double* s = &im[4 * i];
        r[0] += a * u0; r[1] += a * u1; r[2] += a * u2; r[3] += a * u3;
        s[0] += b * u0; s[1] += b * u1; s[2] += b * u2; s[3] += b * u3;
        zr[j] = a * sr - b * si;
        zi[j] = a * si + b * sr;
      }
    }
  }
  std::vector<CVec4> out(total);
  for (std::size_t i = 0; i < total; ++i) {
    for (int mu = 0; mu < 4; ++mu) out[i][mu] = -charge * cplx(re[4 * i + mu], im[4 * i + mu]);
  }
  return out;
}

EmissionAmplitude amplitude_classical(const Worldline& wl, double k, const Vec3& n, double charge,
                                      const CutoffWindow& window) {
  require_plateau_covers(window, wl, n);
  EmissionAmplitude out;
  out.k = k;
  out.n = n;
  out.A = AmplitudeSampler(wl, n, window, std::abs(k))(k, charge);
  return out;
}

EmissionAmplitude amplitude_quantum(const ModeFunction& phi_P, const ModeFunction& phi_p, double k, const Vec3& n,
                                    double charge, const CutoffWindow& window, const Worldline& reference) {
  const double hbar = phi_p.hbar();
  if (phi_P.hbar() != hbar) throw UsageError("mode functions solved with different hbar");
  const Vec3 P = phi_p.p() - hbar * k * n;
  if ((phi_P.p() - P).norm() > 1e-12 * (1.0 + phi_p.p().norm())) {
    throw UsageError("mode pair does not satisfy P = p - hbar k n");
  }
  require_plateau_covers(window, reference, n);
  const PotentialProfile& prof = phi_p.profile();

  const auto joints = window.joints();
  const double t_lo = t_of_xi(reference, n, joints[0]);
  const double t_hi = t_of_xi(reference, n, joints[3]);
  const std::vector<double> cuts = sorted_unique(
      {t_lo, t_of_xi(reference, n, joints[1]), t_of_xi(reference, n, joints[2]), t_hi, -prof.x1, -prof.x2}, t_lo,
      t_hi);
  const double rate = std::abs(k) + 2.0 * std::max(max_sigma(prof, phi_p.p(), phi_p.mass()),
                                                   max_sigma(prof, phi_P.p(), phi_P.mass())) / hbar;
  const double p0 = phi_p.p0();

  cplx A0 = 0.0;
  Eigen::Vector3cd Av = Eigen::Vector3cd::Zero();
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const int panels = cutoff_phase_panels(rate, b - a, 8);
    const quad::Rule rule = quad::composite_gauss_legendre(16, panels, a, b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      const double chi = window.value(xi_of(reference, n, t));
      if (chi == 0.0) continue;
      const cplx z = rule.weights[q] * chi * std::polar(1.0, k * t);
      const cplx fP = std::conj(phi_P.value(t)), dP = std::conj(phi_P.derivative(t));
      const cplx fp = phi_p.value(t), dp = phi_p.derivative(t);
      const Vec3 mech = phi_p.p() - spatial(eval_potential(prof, t));
      Av += (z * fP * fp / p0) * mech.cast<cplx>();
      A0 += z * (fP * dp - dP * fp);
    }
  }
  EmissionAmplitude out;
  out.p = phi_p.p();
  out.k = k;
  out.n = n;
  out.A[0] = -cplx(0.0, charge * hbar / (2.0 * p0)) * A0;
  out.A.tail<3>() = -charge * Av;
  return out;
}

EmissionAmplitude amplitude_quantum(const Trajectory& traj, double hbar, double k, const Vec3& n, double charge,
                                    const CutoffWindow& window) {
  const Vec3& p = traj.p_final();
  const ModeFunction phi_p = solve_mode_function(traj.profile(), p, traj.mass(), hbar);
  const ModeFunction phi_P = solve_mode_function(traj.profile(), Vec3(p - hbar * k * n), traj.mass(), hbar);
  return amplitude_quantum(phi_P, phi_p, k, n, charge, window, traj);
}

// ------------------------------------------------------------- spectra

double radiated_energy(const Worldline& wl, double charge, const WindowFn& window, const SpectralSpec& spec) {
  const quad::SphereRule dirs = directions_for(wl, spec);
  std::vector<double> per(dirs.directions.size());
  parallel_for(per.size(), [&](std::size_t d) {
    const Vec3& n = dirs.directions[d];
    const CutoffWindow w = window(n);
    per[d] = integrate_k<double>(w, spec, [&](double hi, const KGrid& grid) {
      const std::vector<CVec4> A = AmplitudeSampler(wl, n, w, hi).on_grid(grid, charge);
      double sum = 0.0;
      for (std::size_t q = 0; q < A.size(); ++q) {
        const double k = grid.node(q);
        sum += grid.weight(q) * k * k * (-std::real(minkowski_conj(A[q], A[q])));
      }
      return sum;
    });
  });
  double E = 0.0;
  for (std::size_t d = 0; d < per.size(); ++d) E += dirs.weights[d] * per[d];
  return spectral_norm * E;
}

double larmor_energy(const Trajectory& traj, double alpha_c, double rel_tol) {
  auto f = [&](double t) {
    const Kinematics k = traj.kinematics(t);
    const double g2 = k.gamma * k.gamma;
    return g2 * g2 * g2 * (k.a.squaredNorm() - k.v.cross(k.a).squaredNorm());
  };
  const auto r = quad::gauss_kronrod(f, traj.t_enter(), traj.t_exit(), rel_tol);
  return 2.0 * alpha_c / 3.0 * r.value;
}

EnergyCheck radiated_energy_check(const Trajectory& traj, double charge, const WindowPolicy& policy,
                                  const SpectralSpec& spec_in) {
  SpectralSpec spec = spec_in;
  if (!spec.polar_axis) spec.polar_axis = peak_velocity_axis(traj);
  const WindowFn window = [&](const Vec3& n) { return policy.for_direction(traj, n); };
  EnergyCheck c;
  c.windowed = radiated_energy(traj, charge, window, spec);
  const FreeWorldline past(traj.v_past()), future(traj.v_future());
  c.baseline = 0.5 * (radiated_energy(past, charge, window, spec) + radiated_energy(future, charge, window, spec));
  c.net = c.windowed - c.baseline;
  c.larmor = larmor_energy(traj, charge * charge / (4.0 * pi));
  return c;
}

EmissionProbability emission_probability_reduced(const Worldline& wl, const WindowFn& window,
                                                 const SpectralSpec& spec) {
  const quad::SphereRule dirs = directions_for(wl, spec);
  std::vector<std::array<double, 2>> per(dirs.directions.size());
  parallel_for(per.size(), [&](std::size_t d) {
    const Vec3& n = dirs.directions[d];
    const CutoffWindow w = window(n);
    std::vector<double> ks, kw;
    double k_max = 0.0;
    const double single = integrate_k<double>(
        w, spec,
        [&](double hi, const KGrid& grid) {
          const std::vector<CVec4> A = AmplitudeSampler(wl, n, w, hi).on_grid(grid, 1.0);
          double sum = 0.0;
          for (std::size_t q = 0; q < A.size(); ++q) {
            const double k = grid.node(q);
            sum += grid.weight(q) * k * (-std::real(minkowski_conj(A[q], A[q])));
            ks.push_back(k);
            kw.push_back(grid.weight(q));
          }
          return sum;
        },
        &k_max);

    // Double xi-integral on xi-nodes, same k nodes.
    const auto [ta, tb] = wl.acceleration_support();
    const auto j = w.joints();
    const std::vector<double> cuts =
        sorted_unique({j[0], j[1], j[2], j[3], xi_of(wl, n, ta), xi_of(wl, n, tb)}, j[0], j[3]);
    std::vector<double> xi, W;
    std::vector<Vec4> u;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double a = cuts[s], b = cuts[s + 1];
      const bool accelerating = a < xi_of(wl, n, tb) && b > xi_of(wl, n, ta);
      const int panels = cutoff_phase_panels(k_max, b - a, accelerating ? 12 : 4, 8.0);
      const quad::Rule rule = quad::composite_gauss_legendre(16, panels, a, b);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double chi = w.value(rule.nodes[q]);
        if (chi == 0.0) continue;
        const Vec3 v = wl.velocity(t_of_xi(wl, n, rule.nodes[q]));
        xi.push_back(rule.nodes[q]);
        W.push_back(rule.weights[q] * chi);
        u.push_back(four(1.0, v) / (1.0 - n.dot(v)));
      }
    }
    const Eigen::Index N = static_cast<Eigen::Index>(xi.size());
    Eigen::MatrixXd G(N, N);
    for (Eigen::Index a = 0; a < N; ++a) {
      for (Eigen::Index b = 0; b < N; ++b) G(a, b) = W[a] * W[b] * minkowski(u[a], u[b]);
    }
    Eigen::VectorXd c(N), s(N);
    double dbl = 0.0;
    for (std::size_t q = 0; q < ks.size(); ++q) {
      for (Eigen::Index a = 0; a < N; ++a) {
        c[a] = std::cos(ks[q] * xi[a]);
        s[a] = std::sin(ks[q] * xi[a]);
      }
      // sum_ab G_ab cos(k (xi_a - xi_b))
      const double re = c.dot(G * c) + s.dot(G * s);
      dbl += kw[q] * ks[q] * (-re);
    }
    per[d] = {single, dbl};
  });
  EmissionProbability out;
  for (std::size_t d = 0; d < per.size(); ++d) {
    out.single_form += dirs.weights[d] * per[d][0];
    out.double_form += dirs.weights[d] * per[d][1];
  }
  out.single_form *= spectral_norm;
  out.double_form *= spectral_norm;
  return out;
}

AmplitudeShift shift_from_amplitudes(const Trajectory& traj, double charge, const WindowPolicy& policy,
                                     const SpectralSpec& spec, double eps_rel) {
  const Vec3& p = traj.p_final();
  const double eps = eps_rel * p.norm();
  if (!(eps > 0.0)) throw StepError("finite-difference step must be positive");
  // family[i][0..3]: p + eps, p - eps, p + 2 eps, p - 2 eps along e_i
  std::vector<Trajectory> family;
  for (int i = 0; i < 3; ++i) {
    for (double f : {1.0, -1.0, 2.0, -2.0}) {
      family.push_back(integrate_trajectory(traj.profile(), Vec3(p + f * eps * Vec3::Unit(i)), traj.mass(), traj.tol()));
    }
  }
  const quad::SphereRule dirs = directions_for(traj, spec);
  using V6 = Eigen::Matrix<double, 6, 1>;
  std::vector<V6> per(dirs.directions.size());
  parallel_for(per.size(), [&](std::size_t d) {
    const Vec3& n = dirs.directions[d];
    const CutoffWindow w = policy.for_direction(traj, n);
    per[d] = integrate_k<V6>(w, spec, [&](double hi, const KGrid& grid) {
      const std::vector<CVec4> A = AmplitudeSampler(traj, n, w, hi).on_grid(grid, charge);
      std::vector<std::vector<CVec4>> F;
      F.reserve(family.size());
      for (const auto& tr : family) F.push_back(AmplitudeSampler(tr, n, w, hi).on_grid(grid, charge));
      V6 sum = V6::Zero();
      for (std::size_t q = 0; q < A.size(); ++q) {
        V6 val;
        for (int i = 0; i < 3; ++i) {
          const CVec4 d1 = (F[4 * i][q] - F[4 * i + 1][q]) / (2.0 * eps);
          const CVec4 d2 = (F[4 * i + 2][q] - F[4 * i + 3][q]) / (4.0 * eps);
          val[i] = std::imag(minkowski_conj(d1, A[q]));
          val[3 + i] = std::imag(minkowski_conj(d2, A[q]));
        }
        sum += grid.weight(q) * grid.node(q) * val;
      }
      return sum;
    });
  });
  V6 total = V6::Zero();
  for (std::size_t d = 0; d < per.size(); ++d) total += dirs.weights[d] * per[d];
  total *= spectral_norm;
  AmplitudeShift out;
  out.shift = total.head<3>();
  out.shift_2eps = total.tail<3>();
  out.eps = eps;
  out.quadratic_fraction = (out.shift_2eps - out.shift).norm() / (3.0 * std::max(out.shift.norm(), 1e-300));
  if (out.quadratic_fraction > 0.01) throw StepError("finite-difference step too large for the momentum derivative");
  return out;
}

std::vector<ConvergenceSample> hbar_convergence(const Trajectory& traj, double charge,
                                                const std::vector<double>& hbars,
                                                const std::vector<std::pair<double, Vec3>>& kn,
                                                const WindowPolicy& policy) {
  std::vector<ConvergenceSample> out(kn.size());
  std::vector<CVec4> classical(kn.size());
  for (std::size_t s = 0; s < kn.size(); ++s) {
    out[s].k = kn[s].first;
    out[s].n = kn[s].second.normalized();
    out[s].hbar = hbars;
    out[s].error.assign(hbars.size(), 0.0);
    classical[s] =
        amplitude_classical(traj, out[s].k, out[s].n, charge, policy.for_direction(traj, out[s].n)).A;
  }
  parallel_for(kn.size() * hbars.size(), [&](std::size_t idx) {
    const std::size_t s = idx / hbars.size(), h = idx % hbars.size();
    const CutoffWindow w = policy.for_direction(traj, out[s].n);
    const CVec4 Aq = amplitude_quantum(traj, hbars[h], out[s].k, out[s].n, charge, w).A;
    out[s].error[h] = (Aq - classical[s]).norm() / classical[s].norm();
  });
  for (auto& s : out) {
    for (std::size_t h = 0; h + 1 < s.error.size(); ++h) s.ratio.push_back(s.error[h] / s.error[h + 1]);
  }
  return out;
}

// ------------------------------------------------------- pulse world line

namespace {
const double smoothstep7_peak = 140.0 / 64.0;  // S'(1/2)
}

PulseWorldline::PulseWorldline(Vec3 v0, Vec3 delta, double duration, std::vector<double> starts)
    : v0_(std::move(v0)), delta_(std::move(delta)), duration_(duration), starts_(std::move(starts)) {
  if (starts_.empty() || !(duration_ > 0.0)) throw UsageError("pulse world line needs pulses of positive duration");
  std::sort(starts_.begin(), starts_.end());
}

Vec3 PulseWorldline::position(double t) const {
  Vec3 x = v0_ * t;
  for (double s : starts_) {
    const double u = std::clamp((t - s) / duration_, 0.0, 1.0);
    x += delta_ * (duration_ * shape_derivative(ShapeKind::smoothstep7, u, 0) / smoothstep7_peak);
  }
  return x;
}

Vec3 PulseWorldline::velocity(double t) const {
  Vec3 v = v0_;
  for (double s : starts_) {
    const double u = (t - s) / duration_;
    if (u > 0.0 && u < 1.0) v += delta_ * (shape_derivative(ShapeKind::smoothstep7, u, 1) / smoothstep7_peak);
  }
  return v;
}

std::pair<double, double> PulseWorldline::acceleration_support() const {
  return {starts_.front(), starts_.back() + duration_};
}

}  // namespace rrshift
