#pragma once

// Adaptive Dormand-Prince 5(4) integrator with Hairer's continuous extension.
// Solutions keep every accepted step so they can be evaluated anywhere in
// their span; evaluation is const and thread-safe.

#include "rrshift/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace rrshift::ode {

template <int N>
using State = Eigen::Matrix<double, N, 1>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 0.0;  // 0: pick automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

/// One accepted step with its interpolation coefficients.
template <int N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  State<N> r1, r2, r3, r4, r5;

  double t1() const { return t0 + h; }

  State<N> eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

/// Piecewise dense output; steps are stored sorted by increasing time.
template <int N>
class DenseSolution {
 public:
  DenseSolution() = default;

  bool empty() const { return steps_.empty(); }
  double t_lo() const { return steps_.front().t0 < steps_.front().t1() ? steps_.front().t0 : steps_.front().t1(); }
  double t_hi() const { return steps_.back().t0 < steps_.back().t1() ? steps_.back().t1() : steps_.back().t0; }
  std::size_t size() const { return steps_.size(); }
  const std::vector<DenseStep<N>>& steps() const { return steps_; }

  bool contains(double t) const { return !empty() && t >= t_lo() && t <= t_hi(); }

  State<N> operator()(double t) const {
    if (!contains(t)) throw RangeError("dense solution evaluated outside its span");
    // Step intervals [lo_k, hi_k] are contiguous and sorted.
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const DenseStep<N>& s, double v) { return std::max(s.t0, s.t1()) < v; });
    if (it == steps_.end()) it = std::prev(steps_.end());
    return it->eval(t);
  }

  /// Step boundaries, ascending.
  std::vector<double> knots() const {
    std::vector<double> out;
    out.reserve(steps_.size() + 1);
    out.push_back(t_lo());
    for (const auto& s : steps_) out.push_back(std::max(s.t0, s.t1()));
    return out;
  }

  void push(const DenseStep<N>& s) { raw_.push_back(s); }

  /// Sort the raw steps into ascending order. Must be called once after all pushes.
  void finalize() {
    steps_ = std::move(raw_);
    raw_.clear();
    std::sort(steps_.begin(), steps_.end(),
              [](const DenseStep<N>& a, const DenseStep<N>& b) { return std::min(a.t0, a.t1()) < std::min(b.t0, b.t1()); });
  }

 private:
  std::vector<DenseStep<N>> raw_;
  std::vector<DenseStep<N>> steps_;
};

/// Single-step engine; keeps the FSAL derivative between calls.
template <int N>
class Dopri5 {
 public:
  explicit Dopri5(Options opts) : opts_(opts) {}

  struct Result {
    bool accepted = false;
    double h_next = 0.0;
    State<N> y1;
    DenseStep<N> dense;
  };

  template <class F>
  void reset(F&& f, double t, const State<N>& y) {
    k1_ = f(t, y);
    have_k1_ = true;
  }

  template <class F>
  double initial_step(F&& f, double t, const State<N>& y, double direction) {
    if (opts_.h_init > 0.0) return direction * opts_.h_init;
    if (!have_k1_) reset(f, t, y);
    const State<N> sc = (opts_.atol + opts_.rtol * y.cwiseAbs().array()).matrix();
    const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
    const double d1 = std::sqrt((k1_.array() / sc.array()).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, opts_.h_max);
    const State<N> y1 = y + direction * h0 * k1_;
    const State<N> f1 = f(t + direction * h0, y1);
    const double d2 = std::sqrt(((f1 - k1_).array() / sc.array()).square().mean()) / h0;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    return direction * std::min({100.0 * h0, h1, opts_.h_max});
  }

  template <class F>
  Result try_step(F&& f, double t, const State<N>& y, double h) {
    if (!have_k1_) reset(f, t, y);
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const State<N>& k1 = k1_;
    const State<N> k2 = f(t + c2 * h, State<N>(y + h * a21 * k1));
    const State<N> k3 = f(t + c3 * h, State<N>(y + h * (a31 * k1 + a32 * k2)));
    const State<N> k4 = f(t + c4 * h, State<N>(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State<N> k5 = f(t + c5 * h, State<N>(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State<N> k6 = f(t + h, State<N>(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State<N> y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State<N> k7 = f(t + h, y1);

    const State<N> err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const State<N> sc = (opts_.atol + opts_.rtol * y.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
    double en = std::sqrt((err.array() / sc.array()).square().mean());
    if (!std::isfinite(en)) en = 1e10;

    Result r;
    const double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
    r.h_next = std::copysign(std::min(std::abs(h) * fac, opts_.h_max), h);
    if (en <= 1.0) {
      r.accepted = true;
      r.y1 = y1;
      DenseStep<N>& d = r.dense;
      d.t0 = t;
      d.h = h;
      d.r1 = y;
      d.r2 = y1 - y;
      d.r3 = h * k1 - d.r2;
      d.r4 = d.r2 - h * k7 - d.r3;
      d.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      k1_ = k7;
    } else {
      r.h_next = std::copysign(std::abs(h) * std::max(0.2, 0.9 * std::pow(en, -0.2)), h);
    }
    return r;
  }

  const Options& options() const { return opts_; }

 private:
  Options opts_;
  State<N> k1_;
  bool have_k1_ = false;
};

/// Drives a Dopri5 stepper across successive segments and collects the
/// accepted steps into one dense solution.
template <int N>
class Integrator {
 public:
  explicit Integrator(Options opts) : opts_(opts) {}

  /// Advance (t, y) toward `stop`. If `crossing` is given and changes sign
  /// from positive to non-positive inside a step, the segment ends exactly at
  /// the located root instead. Returns true when it stopped on a crossing.
  template <class F, class G>
  bool advance(F&& f, double& t, State<N>& y, double stop, G&& crossing) {
    if (t == stop) return false;
    const double dir = stop > t ? 1.0 : -1.0;
    Dopri5<N> stepper(opts_);
    stepper.reset(f, t, y);
    double h = stepper.initial_step(f, t, y, dir);
    bool event = false;
    while ((stop - t) * dir > 0) {
      const double remaining = stop - t;
      const bool last = std::abs(h) >= std::abs(remaining);
      if (last) h = remaining;
      auto res = stepper.try_step(f, t, y, h);
      if (++steps_ > opts_.max_steps) throw IntegrationError("ODE integration exceeded the step budget");
      if (!res.accepted) {
        h = res.h_next;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError("ODE step size underflow");
        continue;
      }
      if constexpr (!std::is_same_v<std::decay_t<G>, std::nullptr_t>) {
        if (!event && crossing(t + h, res.y1) <= 0.0) {
          // Bisect on the dense step for the crossing time, then redo the
          // step so that the segment ends on it.
          double lo = t, hi = t + h;
          for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(t)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (crossing(mid, res.dense.eval(mid)) > 0.0) lo = mid; else hi = mid;
          }
          stop = hi;
          event = true;
          stepper.reset(f, t, y);
          h = stop - t;
          continue;
        }
      }
      sol_.push(res.dense);
      t = last ? stop : t + h;
      y = res.y1;
      h = res.h_next;
    }
    return event;
  }

  template <class F>
  void advance(F&& f, double& t, State<N>& y, double stop) {
    advance(f, t, y, stop, nullptr);
  }

  DenseSolution<N> finish() {
    sol_.finalize();
    return std::move(sol_);
  }

 private:
  Options opts_;
  DenseSolution<N> sol_;
  std::size_t steps_ = 0;
};

/// Integrate from t0 to t1 (either direction), restarting exactly at every
/// breakpoint strictly between them. Breakpoints mark places where the
/// right-hand side loses smoothness.
template <int N, class F>
DenseSolution<N> integrate(F&& f, double t0, const State<N>& y0, double t1, const Options& opts,
                           std::span<const double> breakpoints = {}) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> stops;
  for (double b : breakpoints) {
    if ((b - t0) * dir > 0 && (t1 - b) * dir > 0) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
  stops.push_back(t1);

  Integrator<N> integ(opts);
  double t = t0;
  State<N> y = y0;
  for (double stop : stops) integ.advance(f, t, y, stop);
  return integ.finish();
}

}  // namespace rrshift::ode
