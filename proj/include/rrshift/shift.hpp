#pragma once

#include "rrshift/dynamics.hpp"
#include "rrshift/variational.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rrshift {

/// Jacobi fields Delta_(i)(t; 0), i = 0, 1, 2.
using AnchorFields = std::array<JacobiField, 3>;

enum class ClosedForm {
  green,  // -int F_LD . Delta x_(i)(t; 0) dt
  parts   // the same after integrating the total-derivative term by parts
};

enum class GreenMode {
  swap,  // reuse the t = 0 fields through the swap identity
  fresh  // a new forward Jacobi solve at every time node
};

struct ShiftOptions {
  double time_rel_tol = 1e-11;  // adaptive Gauss-Kronrod over the force support
  int angular_polar = 64;
  int angular_azimuth = 128;
  GreenMode green_mode = GreenMode::swap;
  int fresh_order = 12;   // Gauss-Legendre nodes per panel in fresh mode
  int fresh_panels = 16;
  double threshold = 1e-4;  // pass threshold on the max pairwise relative residual
};

/// delta x_Q from the Jacobi fields anchored at t = 0.
Vec3 shift_quantum_closed(const Trajectory& traj, const AnchorFields& fields, double alpha_c,
                          ClosedForm form = ClosedForm::parts, double rel_tol = 1e-11);

/// delta x_Q from the angular integral carried out numerically (directions
/// aligned with v(t)) before the time integral.
Vec3 shift_quantum_quadrature(const Trajectory& traj, const AnchorFields& fields, double alpha_c, int n_polar = 64,
                              int n_azimuth = 128, double rel_tol = 1e-10);

/// delta x_C^i = int F_LD^j(t) Delta x^i_(j)(0; t) dt.
Vec3 classical_shift_green(const Trajectory& traj, const AnchorFields& fields, double alpha_c,
                           const ShiftOptions& opts = {});

/// delta x(0) of the retarded perturbation.
Vec3 classical_shift_direct(const Trajectory& traj, double alpha_c);

enum class Route { direct, green, quantum, quadrature };
inline constexpr std::array<Route, 4> all_routes{Route::direct, Route::green, Route::quantum, Route::quadrature};
std::string to_string(Route r);
std::optional<Route> parse_route(const std::string& name);

struct ShiftReport {
  std::vector<Route> routes;
  std::map<Route, Vec3> shift;          // successful routes
  std::map<Route, std::string> errors;  // failed routes
  std::map<Route, double> seconds;      // wall time per route
  /// residual[i][j] = |dx_i - dx_j| / max(|dx_green|, 1e-16 L); NaN when a route is missing.
  std::array<std::array<double, 4>, 4> residual{};
  double max_residual = 0.0;
  double length_scale = 1.0;
  double threshold = 1e-4;
  bool pass = false;
};

/// Runs the requested routes; route failures are recorded, not thrown.
ShiftReport compare_routes(const Trajectory& traj, double alpha_c, const ShiftOptions& opts = {},
                           const std::vector<Route>& routes = {all_routes.begin(), all_routes.end()});

}  // namespace rrshift
