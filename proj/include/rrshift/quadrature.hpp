#pragma once

#include "rrshift/types.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace rrshift::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n).
Rule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes on [lo, hi].
Rule composite_gauss_legendre(int order, int panels, double lo, double hi);

/// Direction set on the unit sphere: Gauss-Legendre in cos(theta) about a
/// polar axis times an equally spaced azimuth grid (trapezoid, periodic).
struct SphereRule {
  std::vector<Vec3> directions;
  std::vector<double> weights;
};

SphereRule sphere_rule(int n_polar, int n_azimuth, const Vec3& polar_axis = Vec3::UnitZ());

/// Orthonormal pair completing `axis` (unit) to a right-handed frame.
std::pair<Vec3, Vec3> transverse_frame(const Vec3& axis);

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& x) {
  return x.norm();
}

template <class T>
struct Result {
  T value;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Globally adaptive 7/15-point Gauss-Kronrod for scalar or Eigen-valued integrands.
/// Stops once the summed error estimate is below max(abs_tol, rel_tol * |I|).
template <class F>
auto gauss_kronrod(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0, int max_intervals = 4000)
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& xk = gauss_kronrod<double, 15>::abscissa();
  const auto& wk = gauss_kronrod<double, 15>::weights();
  const auto& wg = gauss<double, 7>::weights();

  struct Interval {
    double lo, hi;
    T value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
  };

  int evals = 0;
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    const T f0 = f(c);
    T kron = wk[0] * f0;
    T gs = wg[0] * f0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
      const T fs = f(c - r * xk[i]) + f(c + r * xk[i]);
      kron = kron + wk[i] * fs;
      if (i % 2 == 0) gs = gs + wg[i / 2] * fs;
    }
    evals += 15;
    T value = r * kron;
    const double err = magnitude(T(r * (kron - gs)));
    return Interval{lo, hi, value, err};
  };

  std::priority_queue<Interval> heap;
  Interval first = panel(a, b);
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  bool converged = true;
  while (total_err > std::max(abs_tol, rel_tol * magnitude(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      converged = false;
      break;
    }
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      converged = false;
      heap.push(worst);
      break;
    }
    Interval left = panel(worst.lo, mid);
    Interval right = panel(mid, worst.hi);
    total = total - worst.value + left.value + right.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to avoid drift from the running updates.
  T sum = heap.top().value;
  double err = 0.0;
  bool init = false;
  while (!heap.empty()) {
    const Interval& iv = heap.top();
    if (!init) {
      sum = iv.value;
      init = true;
    } else {
      sum = sum + iv.value;
    }
    err += iv.error;
    heap.pop();
  }
  return Result<T>{sum, err, evals, converged};
}

}  // namespace rrshift::quad
