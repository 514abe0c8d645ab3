#include "rrshift/shift.hpp"
#include "rrshift/lorentz_dirac.hpp"
#include "rrshift/parallel.hpp"
#include "rrshift/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace rrshift {

namespace {

template <class F>
Vec3 support_integral(const Trajectory& traj, F&& f, double rel_tol) {
  auto r = quad::gauss_kronrod(f, traj.t_enter(), traj.t_exit(), rel_tol);
  if (!r.converged) throw IntegrationError("time quadrature did not converge");
  return r.value;
}

}  // namespace

Vec3 shift_quantum_closed(const Trajectory& traj, const AnchorFields& fields, double alpha_c, ClosedForm form,
                          double rel_tol) {
  if (form == ClosedForm::green) {
    auto f = [&](double t) -> Vec3 {
      const Vec3 F = ld_coordinate_force(traj, t, 1.0);
      return Vec3(-F.dot(fields[0].dx(t)), -F.dot(fields[1].dx(t)), -F.dot(fields[2].dx(t)));
    };
    return alpha_c * support_integral(traj, f, rel_tol);
  }
  auto f = [&](double t) -> Vec3 {
    const Kinematics k = traj.kinematics(t);
    const double g2 = k.gamma * k.gamma, g4 = g2 * g2, g6 = g4 * g2;
    const double av = k.a.dot(k.v);
    const Vec3 G = g4 * av * k.v + g2 * k.a;
    const double Q = g6 * av * av + g4 * k.a.squaredNorm();
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = G.dot(fields[i].dx_rate(t)) + Q * k.v.dot(fields[i].dx(t));
    return out;
  };
  return (2.0 * alpha_c / 3.0) * support_integral(traj, f, rel_tol);
}

Vec3 shift_quantum_quadrature(const Trajectory& traj, const AnchorFields& fields, double alpha_c, int n_polar,
                              int n_azimuth, double rel_tol) {
  const quad::Rule mu = quad::gauss_legendre(n_polar);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  std::vector<double> cphi(n_azimuth), sphi(n_azimuth);
  for (int j = 0; j < n_azimuth; ++j) {
    cphi[j] = std::cos((j + 0.5) * dphi);
    sphi[j] = std::sin((j + 0.5) * dphi);
  }

  auto f = [&](double t) -> Vec3 {
    const Kinematics k = traj.kinematics(t);
    std::array<Vec3, 3> J, Jd;
    for (int i = 0; i < 3; ++i) {
      J[i] = fields[i].dx(t);
      Jd[i] = fields[i].dx_rate(t);
    }
    const double speed = k.v.norm();
    const Vec3 ez = speed > 0.0 ? Vec3(k.v / speed) : Vec3(Vec3::UnitZ());
    const auto [e1, e2] = quad::transverse_frame(ez);
    Vec3 sum = Vec3::Zero();
    for (int p = 0; p < n_polar; ++p) {
      const double c = mu.nodes[p];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      Vec3 ring = Vec3::Zero();
      for (int q = 0; q < n_azimuth; ++q) {
        const Vec3 n = c * ez + s * (cphi[q] * e1 + sphi[q] * e2);
        const double xd = 1.0 - n.dot(k.v);
        const double na = n.dot(k.a);
        const double inv3 = 1.0 / (xd * xd * xd);
        // weights of Y^0 and Y^j
        const double c0 = na * inv3;
        const Vec3 cj = (xd * k.a + na * k.v) * inv3;
        for (int i = 0; i < 3; ++i) {
          const double T = n.dot(J[i]) / xd;
          const double Td = n.dot(Jd[i]) / xd + n.dot(J[i]) * na / (xd * xd);
          const Vec3 Y = Jd[i] + k.a * T + k.v * Td;
          ring[i] += c0 * Td - cj.dot(Y);
        }
      }
      sum += mu.weights[p] * dphi * ring;
    }
    return sum;
  };
  return (-alpha_c / (4.0 * std::numbers::pi)) * support_integral(traj, f, rel_tol);
}

Vec3 classical_shift_green(const Trajectory& traj, const AnchorFields& fields, double alpha_c,
                           const ShiftOptions& opts) {
  if (opts.green_mode == GreenMode::swap) {
    // Delta x^i_(j)(0; t) = -Delta x^j_(i)(t; 0)
    auto f = [&](double t) -> Vec3 {
      const Vec3 F = ld_coordinate_force(traj, t, 1.0);
      Vec3 out;
      for (int i = 0; i < 3; ++i) out[i] = -F.dot(fields[i].dx(t));
      return out;
    };
    return alpha_c * support_integral(traj, f, opts.time_rel_tol);
  }
  const quad::Rule rule =
      quad::composite_gauss_legendre(opts.fresh_order, opts.fresh_panels, traj.t_enter(), traj.t_exit());
  std::vector<Vec3> terms(rule.nodes.size());
  parallel_for(rule.nodes.size(), [&](std::size_t q) {
    const double t = rule.nodes[q];
    terms[q] = rule.weights[q] * (kick_response_at_anchor(traj, t) * ld_coordinate_force(traj, t, 1.0));
  });
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : terms) sum += v;
  return alpha_c * sum;
}

Vec3 classical_shift_direct(const Trajectory& traj, double alpha_c) {
  return retarded_perturbation(traj, alpha_c).dx(0.0);
}

std::string to_string(Route r) {
  switch (r) {
    case Route::direct: return "direct";
    case Route::green: return "green";
    case Route::quantum: return "quantum";
    case Route::quadrature: return "quadrature";
  }
  return "?";
}

std::optional<Route> parse_route(const std::string& name) {
  for (Route r : all_routes) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

ShiftReport compare_routes(const Trajectory& traj, double alpha_c, const ShiftOptions& opts,
                           const std::vector<Route>& routes) {
  ShiftReport rep;
  rep.routes = routes;
  rep.threshold = opts.threshold;
  rep.length_scale = std::max(std::abs(traj.t_min()), traj.position(traj.t_min()).norm());

  std::optional<AnchorFields> fields;
  std::string fields_error;
  auto need_fields = [&]() -> const AnchorFields& {
    if (!fields && fields_error.empty()) {
      try {
        fields = momentum_derivative_fields(traj);
      } catch (const std::exception& e) {
        fields_error = e.what();
      }
    }
    if (!fields) throw IntegrationError("Jacobi fields unavailable: " + fields_error);
    return *fields;
  };

  using clock = std::chrono::steady_clock;
  for (Route r : routes) {
    const auto start = clock::now();
    try {
      Vec3 dx;
      switch (r) {
        case Route::direct: dx = classical_shift_direct(traj, alpha_c); break;
        case Route::green: dx = classical_shift_green(traj, need_fields(), alpha_c, opts); break;
        case Route::quantum:
          dx = shift_quantum_closed(traj, need_fields(), alpha_c, ClosedForm::parts, opts.time_rel_tol);
          break;
        case Route::quadrature:
          dx = shift_quantum_quadrature(traj, need_fields(), alpha_c, opts.angular_polar, opts.angular_azimuth,
                                        std::max(opts.time_rel_tol, 1e-12));
          break;
      }
      if (!dx.allFinite()) throw IntegrationError("non-finite shift");
      rep.shift[r] = dx;
    } catch (const std::exception& e) {
      rep.errors[r] = e.what();
    }
    rep.seconds[r] = std::chrono::duration<double>(clock::now() - start).count();
  }

  double ref = 0.0;
  if (rep.shift.count(Route::green)) {
    ref = rep.shift[Route::green].norm();
  } else if (!rep.shift.empty()) {
    ref = rep.shift.begin()->second.norm();
  }
  const double denom = std::max(ref, 1e-16 * rep.length_scale);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.max_residual = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Route a = all_routes[i], b = all_routes[j];
      if (rep.shift.count(a) && rep.shift.count(b)) {
        rep.residual[i][j] = (rep.shift[a] - rep.shift[b]).norm() / denom;
        rep.max_residual = std::max(rep.max_residual, rep.residual[i][j]);
      } else {
        rep.residual[i][j] = nan;
      }
    }
  }
  rep.pass = rep.errors.empty() && !rep.shift.empty() && rep.max_residual < opts.threshold;
  return rep;
}

}  // namespace rrshift
