#include "rrshift/angular.hpp"
#include "rrshift/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace rrshift {

namespace quad {

Rule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  Rule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (hi + lo);
  const double xl = 0.5 * (hi - lo);
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) {
        // one more evaluation of pp at the converged node
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        break;
      }
    }
    r.nodes[i - 1] = xm - xl * z;
    r.nodes[n - i] = xm + xl * z;
    r.weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.weights[n - i] = r.weights[i - 1];
  }
  return r;
}

Rule composite_gauss_legendre(int order, int panels, double lo, double hi) {
  const Rule base = gauss_legendre(order);
  Rule r;
  r.nodes.reserve(static_cast<std::size_t>(order) * panels);
  r.weights.reserve(static_cast<std::size_t>(order) * panels);
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (int i = 0; i < order; ++i) {
      r.nodes.push_back(a + 0.5 * width * (base.nodes[i] + 1.0));
      r.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return r;
}

std::pair<Vec3, Vec3> transverse_frame(const Vec3& axis) {
  const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = axis.cross(helper).normalized();
  const Vec3 e2 = axis.cross(e1);
  return {e1, e2};
}

SphereRule sphere_rule(int n_polar, int n_azimuth, const Vec3& polar_axis) {
  if (n_polar < 1 || n_azimuth < 1) throw DomainError("sphere rule needs positive node counts");
  const Vec3 ez = polar_axis.norm() > 0 ? Vec3(polar_axis.normalized()) : Vec3(Vec3::UnitZ());
  const auto [e1, e2] = transverse_frame(ez);
  const Rule mu = gauss_legendre(n_polar);
  SphereRule s;
  s.directions.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  s.weights.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double c = mu.nodes[i];
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      s.directions.push_back(c * ez + sn * (std::cos(phi) * e1 + std::sin(phi) * e2));
      s.weights.push_back(mu.weights[i] * dphi);
    }
  }
  return s;
}

}  // namespace quad

namespace {
constexpr double pi = std::numbers::pi;
}

AngularIntegrals angular_integrals(const Vec3& v) {
  const double v2 = v.squaredNorm();
  if (!v.allFinite() || v2 >= 1.0) throw DomainError("angular integrals need |v| < 1");
  const double g2 = 1.0 / (1.0 - v2);
  const double g4 = g2 * g2, g6 = g4 * g2, g8 = g4 * g4;
  AngularIntegrals out;
  out.v = v;
  out.I0 = 4.0 * pi * g2;
  out.I1 = 4.0 * pi * g4 * v;
  out.I2 = (16.0 / 3.0) * pi * g6 * v * v.transpose() + (4.0 / 3.0) * pi * g4 * Mat3::Identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const double sym = v[i] * (j == k) + v[j] * (i == k) + v[k] * (i == j);
        out.I3[i](j, k) = 8.0 * pi * g8 * v[i] * v[j] * v[k] + (4.0 / 3.0) * pi * g6 * sym;
      }
    }
  }
  return out;
}

AngularIntegrals angular_integrals_quadrature(const Vec3& v, int n_polar, int n_azimuth) {
  if (!v.allFinite() || v.squaredNorm() >= 1.0) throw DomainError("angular integrals need |v| < 1");
  const quad::SphereRule rule = quad::sphere_rule(n_polar, n_azimuth, v.norm() > 0 ? v : Vec3(Vec3::UnitZ()));
  AngularIntegrals out;
  out.v = v;
  out.I0 = 0.0;
  out.I1.setZero();
  out.I2.setZero();
  for (auto& m : out.I3) m.setZero();
  for (std::size_t q = 0; q < rule.directions.size(); ++q) {
    const Vec3& n = rule.directions[q];
    const double xi_dot = 1.0 - n.dot(v);
    const double w2 = rule.weights[q] / (xi_dot * xi_dot);
    const double w3 = w2 / xi_dot, w4 = w3 / xi_dot, w5 = w4 / xi_dot;
    out.I0 += w2;
    out.I1 += w3 * n;
    const Mat3 nn = n * n.transpose();
    out.I2 += w4 * nn;
    for (int i = 0; i < 3; ++i) out.I3[i] += (w5 * n[i]) * nn;
  }
  return out;
}

}  // namespace rrshift
