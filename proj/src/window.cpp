#include "rrshift/window.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>

namespace rrshift {

double xi_of(const Worldline& wl, const Vec3& n, double t) { return t - n.dot(wl.position(t)); }

double t_of_xi(const Worldline& wl, const Vec3& n, double xi) {
  auto g = [&](double t) { return xi_of(wl, n, t) - xi; };
  // Bracket by expansion, then safeguarded Newton.
  double lo = xi, hi = xi;
  double step = 1.0;
  while (g(lo) > 0.0) {
    lo -= step;
    step *= 2.0;
  }
  step = 1.0;
  while (g(hi) < 0.0) {
    hi += step;
    step *= 2.0;
  }
  if (g(lo) == 0.0) return lo;
  if (g(hi) == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double CutoffWindow::derivative(double xi, int order) const {
  if (xi <= lo() || xi >= hi()) return 0.0;
  if (xi >= xi_on && xi <= xi_off) return order == 0 ? 1.0 : 0.0;
  const double scale = std::pow(taper, -order);
  if (xi < xi_on) return shape_derivative(shape, (xi - lo()) / taper, order) * scale;
  // falling side: chi = S((hi - xi)/taper)
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * shape_derivative(shape, (hi() - xi) / taper, order) * scale;
}

CutoffWindow WindowPolicy::for_direction(const Worldline& wl, const Vec3& n) const {
  const auto [t_enter, t_exit] = wl.acceleration_support();
  const double a = xi_of(wl, n, t_enter);
  const double b = xi_of(wl, n, t_exit);
  const double D = b - a;
  CutoffWindow w;
  w.xi_on = a - pad_fraction * D;
  w.xi_off = b + pad_fraction * D;
  w.taper = taper_fraction * D;
  w.shape = shape;
  return w;
}

void require_plateau_covers(const CutoffWindow& w, const Worldline& wl, const Vec3& n) {
  const auto [t_enter, t_exit] = wl.acceleration_support();
  if (!(w.taper > 0.0)) throw UsageError("window taper must be positive");
  if (xi_of(wl, n, t_enter) < w.xi_on || xi_of(wl, n, t_exit) > w.xi_off) {
    throw UsageError("window plateau does not cover the acceleration interval");
  }
}

}  // namespace rrshift
