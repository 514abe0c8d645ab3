#pragma once

#include "rrshift/dynamics.hpp"
#include "rrshift/ode.hpp"
#include "rrshift/window.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace rrshift {

using cplx = std::complex<double>;

/// Uniform sampling grid for a mode function. points = 0 picks 40 points per
/// shortest local period 2 pi hbar / sigma.
struct ModeGridSpec {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int points = 0;
};

/// Solution of {hbar^2 d_t^2 + (p - V(t))^2 + m^2} phi = 0 with
/// phi = exp(-i p0 t / hbar) where V = 0. Numerical on the transition
/// interval, closed form on both constant-potential sides, so value() is
/// defined for every t.
class ModeFunction {
 public:
  struct Past {
    cplx A, B;  // phi = A exp(-i s0 t / hbar) + B exp(+i s0 t / hbar) for t <= -x1
    double sigma0;
  };

  ModeFunction(PotentialProfile profile, Vec3 p, double mass, double hbar,
               std::shared_ptr<const ode::DenseSolution<4>> transition, Past past, ModeGridSpec grid);

  const Vec3& p() const { return p_; }
  double p0() const { return p0_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  const PotentialProfile& profile() const { return profile_; }

  cplx value(double t) const;
  cplx derivative(double t) const;
  /// Local energy sqrt((p - V(t))^2 + m^2).
  double sigma(double t) const;
  /// i hbar (phi* phi' - phi*' phi), real; 2 p0 for the chosen normalization.
  double wronskian(double t) const;

  const ModeGridSpec& grid() const { return grid_; }
  std::vector<double> grid_times() const;

 private:
  PotentialProfile profile_;
  Vec3 p_;
  double mass_, hbar_, p0_;
  std::shared_ptr<const ode::DenseSolution<4>> transition_;
  Past past_;
  ModeGridSpec grid_;
};

/// Throws UsageError unless the profile depends on time only, ResolutionError
/// if the grid has fewer than 20 points per local period.
ModeFunction solve_mode_function(const PotentialProfile& profile, const Vec3& p, double mass, double hbar,
                                 ModeGridSpec grid = {}, double tol = 1e-12);

struct EmissionAmplitude {
  Vec3 p = Vec3::Zero();
  double k = 0.0;
  Vec3 n = Vec3::UnitZ();
  CVec4 A = CVec4::Zero();
};

/// Quadrature nodes for -e int dt (1, v) chi(xi) exp(i k xi) along a world
/// line (dxi = (1 - n.v) dt cancels the 1/(1 - n.v) of dx/dxi). Panels
/// follow the window joints and the acceleration support and keep at most
/// 6 radians of phase at k_max.
/// k nodes: `panels` equal panels of width dk starting at lo, each carrying
/// the same Gauss offsets; node (p, j) = lo + p dk + offsets[j].
struct KGrid {
  double lo = 0.0;
  double dk = 1.0;
  int panels = 1;
  std::vector<double> offsets, weights;

  KGrid(double lo, double hi, int panels, int order);
  std::size_t size() const { return static_cast<std::size_t>(panels) * offsets.size(); }
  double node(std::size_t i) const { return lo + static_cast<double>(i / offsets.size()) * dk + offsets[i % offsets.size()]; }
  double weight(std::size_t i) const { return weights[i % offsets.size()]; }
};

class AmplitudeSampler {
 public:
  AmplitudeSampler(const Worldline& wl, const Vec3& n, const CutoffWindow& window, double k_max, int order = 16);

  CVec4 operator()(double k, double charge) const;
  /// Amplitudes at every node of the grid, in KGrid order. Phases advance by
  /// recurrence from panel to panel.
  std::vector<CVec4> on_grid(const KGrid& grid, double charge) const;
  std::size_t size() const { return xi_.size(); }

 private:
  std::vector<double> xi_, weight_;
  std::vector<Vec4> u_;
};

/// Classical amplitude -e int dxi (dx/dxi) chi(xi) exp(i k xi).
/// UsageError if the window plateau misses part of the acceleration.
EmissionAmplitude amplitude_classical(const Worldline& wl, double k, const Vec3& n, double charge,
                                      const CutoffWindow& window);

/// Finite-hbar amplitude from the mode pair (phi_P, phi_p), P = p - hbar k n:
///   A^i = -e int dt exp(ikt) phi_P* phi_p (p^i - V^i)/p0 chi
///   A^0 = -(i e hbar / 2 p0) int dt (phi_P* phi_p' - phi_P*' phi_p) exp(ikt) chi
/// with chi evaluated at the classical xi(t) of `reference`.
EmissionAmplitude amplitude_quantum(const ModeFunction& phi_P, const ModeFunction& phi_p, double k, const Vec3& n,
                                    double charge, const CutoffWindow& window, const Worldline& reference);

/// Solves both mode functions and evaluates amplitude_quantum.
EmissionAmplitude amplitude_quantum(const Trajectory& traj, double hbar, double k, const Vec3& n, double charge,
                                    const CutoffWindow& window);

/// Outer (direction, k) quadrature for spectral integrals. Directions: Gauss
/// in cos(theta) about polar_axis (default: velocity at peak speed) times a
/// uniform azimuth. k: blocks [0, k0], [k0, 2k0], ... with k0 = 8/taper, each
/// split into panels of 2 pi / (window span) carrying k_order Gauss nodes;
/// stops once a block adds less than tail_tol of the running total.
struct SpectralSpec {
  int n_polar = 24;
  int n_azimuth = 48;
  std::optional<Vec3> polar_axis;
  double tail_tol = 1e-8;
  int k_order = 12;
  int max_blocks = 14;
};

using WindowFn = std::function<CutoffWindow(const Vec3&)>;

/// int dOmega int k^2 dk / (2 (2 pi)^3) (-A.A*).
double radiated_energy(const Worldline& wl, double charge, const WindowFn& window, const SpectralSpec& spec);

/// (2 alpha_c / 3) int gamma^6 [a^2 - (v x a)^2] dt.
double larmor_energy(const Trajectory& traj, double alpha_c, double rel_tol = 1e-12);

struct EnergyCheck {
  double windowed = 0.0;
  double baseline = 0.0;  // (E0(v_past) + E0(v_future)) / 2 with the same windows
  double net = 0.0;
  double larmor = 0.0;
  double relative_error() const { return std::abs(net - larmor) / std::abs(larmor); }
};

EnergyCheck radiated_energy_check(const Trajectory& traj, double charge, const WindowPolicy& policy,
                                  const SpectralSpec& spec);

/// int dOmega int k dk / (2 (2 pi)^3) (-A.A*) / e^2, once from |A|^2 with
/// t-nodes and once as the double xi-integral on xi-nodes.
struct EmissionProbability {
  double single_form = 0.0;
  double double_form = 0.0;
};

EmissionProbability emission_probability_reduced(const Worldline& wl, const WindowFn& window,
                                                 const SpectralSpec& spec);

/// delta x^i = int dOmega int k dk / (2 (2 pi)^3) Im(A*^mu d_{p^i} A_mu), the
/// derivative by central differences over trajectories re-anchored at
/// p +- eps e_i, eps = eps_rel |p|. Also evaluated at 2 eps; StepError when the
/// two differ by more than 3% (quadratic term above 1% of the linear one).
struct AmplitudeShift {
  Vec3 shift = Vec3::Zero();
  Vec3 shift_2eps = Vec3::Zero();
  double eps = 0.0;
  double quadratic_fraction = 0.0;
};

AmplitudeShift shift_from_amplitudes(const Trajectory& traj, double charge, const WindowPolicy& policy,
                                     const SpectralSpec& spec, double eps_rel = 1e-4);

/// Relative amplitude error |A_quantum(hbar) - A_classical| / |A_classical|
/// for each hbar at one (k, n).
struct ConvergenceSample {
  double k = 0.0;
  Vec3 n = Vec3::UnitZ();
  std::vector<double> hbar;
  std::vector<double> error;
  std::vector<double> ratio;  // error[i] / error[i + 1]
};

std::vector<ConvergenceSample> hbar_convergence(const Trajectory& traj, double charge,
                                                const std::vector<double>& hbars,
                                                const std::vector<std::pair<double, Vec3>>& kn,
                                                const WindowPolicy& policy = {});

/// Worldline with constant velocity v0 plus identical velocity pulses
/// delta * S'(u) / max S' (S = smoothstep7, u = (t - start)/duration) starting
/// at each entry of `starts`.
class PulseWorldline final : public Worldline {
 public:
  PulseWorldline(Vec3 v0, Vec3 delta, double duration, std::vector<double> starts);
  Vec3 position(double t) const override;
  Vec3 velocity(double t) const override;
  std::pair<double, double> acceleration_support() const override;

 private:
  Vec3 v0_, delta_;
  double duration_;
  std::vector<double> starts_;
};

}  // namespace rrshift
