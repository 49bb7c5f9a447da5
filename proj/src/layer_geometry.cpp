#include "isolab/layer_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isolab/sphere_quadrature.hpp"

namespace isolab {

CapAngle cap_from_offset(double t, double one_minus_t2, double R) {
  const double s = R + t;
  if (!(s > 0) || !(one_minus_t2 >= 0) || std::abs(t) > 1.0)
    throw std::domain_error("cap geometry: sphere does not meet the ball");
  CapAngle c;
  // 1 - cos gamma = (1 - (s - R)^2) / (2 s R)
  c.one_minus_cos = one_minus_t2 / (2.0 * s * R);
  c.cos_gamma = 1.0 - c.one_minus_cos;
  const double sum = s + R;
  c.sin_gamma = std::sqrt(one_minus_t2 * (sum * sum - 1.0)) / (2.0 * s * R);
  c.gamma = std::atan2(c.sin_gamma, c.cos_gamma);
  return c;
}

CapAngle cap_geometry(double s, double R) {
  if (!(s > 0) || !(R > 1)) throw std::domain_error("cap geometry: need s > 0 and R > 1");
  const double cosg = (s * s + R * R - 1.0) / (2.0 * s * R);
  if (cosg > 1.0 + 1e-12 || cosg < -1.0 - 1e-12)
    throw std::domain_error("cap geometry: sphere does not meet the ball");
  const double t = s - R;
  return cap_from_offset(t, std::max(0.0, (1.0 - t) * (1.0 + t)), R);
}

double sin_power_integral(int m, const CapAngle& cap) {
  if (m < 0) throw std::invalid_argument("sin_power_integral: negative power");
  if (m == 0) return cap.gamma;
  if (m == 1) return cap.one_minus_cos;
  const double x = cap.one_minus_cos;
  if (x < 0.1) {
    // int_0^x (w (2 - w))^q dw, q = (m - 1) / 2, expanded binomially in w / 2.
    const double q = 0.5 * (m - 1);
    double coef = 1.0;  // binom(q, k) (-1/2)^k
    double xp = std::pow(x, q + 1.0);
    double sum = 0;
    for (int k = 0; k < 60; ++k) {
      const double term = coef * xp / (q + 1.0 + k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      coef *= -(q - k) / (2.0 * (k + 1));
      xp *= x;
    }
    return std::pow(2.0, q) * sum;
  }
  double lo = (m % 2 == 0) ? cap.gamma : cap.one_minus_cos;
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2)
    lo = -std::pow(cap.sin_gamma, k - 1) * cap.cos_gamma / k + (k - 1.0) / k * lo;
  return lo;
}

double cap_area(int dim, double s, const CapAngle& cap) {
  if (dim < 2) throw std::invalid_argument("cap_area: dim must be >= 2");
  return std::pow(s, dim - 1) * (dim - 1) * unit_ball_volume(dim - 1) * sin_power_integral(dim - 2, cap);
}

double cap_area(int dim, double s, double gamma) {
  if (!(gamma >= 0) || gamma > std::numbers::pi)
    throw std::invalid_argument("cap_area: gamma out of [0, pi]");
  CapAngle c;
  c.gamma = gamma;
  c.cos_gamma = std::cos(gamma);
  c.sin_gamma = std::sin(gamma);
  // 1 - cos = 2 sin^2(gamma / 2)
  const double h = std::sin(0.5 * gamma);
  c.one_minus_cos = 2.0 * h * h;
  return cap_area(dim, s, c);
}

namespace {

// sin^2(alpha) / (1 - t^2) for the boundary point at layer t.
double boundary_stretch(double t, double one_minus_t2, double R) {
  return 1.0 + t / R - one_minus_t2 / (4.0 * R * R);
}

double exact_phi(int n, double R, double t, double one_minus_t2, double cos_u_pow) {
  // (N-1) w_{N-1} sin^{N-3}(alpha) s / R with sin^2 alpha = (1 - t^2) k;
  // cos_u_pow carries the (1 - t^2)^{(N-3)/2} (or the substituted) factor.
  const double k = boundary_stretch(t, one_minus_t2, R);
  return (n - 1) * unit_ball_volume(n - 1) * cos_u_pow * std::pow(k, 0.5 * (n - 3)) * (R + t) / R;
}

}  // namespace

LayerKernelPair exact_kernels(int dim, double R) {
  if (dim < 2) throw std::invalid_argument("exact_kernels: dim must be >= 2");
  if (!(R > 1)) throw std::invalid_argument("exact_kernels: offset R must exceed 1");
  LayerKernelPair k;
  k.dim = dim;
  k.offset = R;
  k.kind = KernelKind::exact;
  const int n = dim;
  k.phi = [n, R](double t) {
    const double q = (1.0 - t) * (1.0 + t);
    return exact_phi(n, R, t, q, std::pow(q, 0.5 * (n - 3)));
  };
  k.phi_sub = [n, R](double u) {
    const double c = std::cos(u);
    return exact_phi(n, R, std::sin(u), c * c, std::pow(c, n - 2));
  };
  k.psi = [n, R](double t) {
    const double q = (1.0 - t) * (1.0 + t);
    if (q <= 0) return 0.0;
    return cap_area(n, R + t, cap_from_offset(t, q, R));
  };
  k.psi_sub = [n, R](double u) {
    const double c = std::cos(u);
    if (c <= 0) return 0.0;
    const double t = std::sin(u);
    return cap_area(n, R + t, cap_from_offset(t, c * c, R)) * c;
  };
  return k;
}

LayerKernelPair asymptotic_kernels(int dim) {
  if (dim < 2) throw std::invalid_argument("asymptotic_kernels: dim must be >= 2");
  LayerKernelPair k;
  k.dim = dim;
  k.kind = KernelKind::asymptotic;
  const double w = unit_ball_volume(dim - 1);
  const int n = dim;
  k.phi = [n, w](double t) { return (n - 1) * w * std::pow((1.0 - t) * (1.0 + t), 0.5 * (n - 3)); };
  k.psi = [n, w](double t) { return w * std::pow((1.0 - t) * (1.0 + t), 0.5 * (n - 1)); };
  k.phi_sub = [n, w](double u) { return (n - 1) * w * std::pow(std::cos(u), n - 2); };
  k.psi_sub = [n, w](double u) { return w * std::pow(std::cos(u), n); };
  return k;
}

double integrate_phi(const LayerKernelPair& k, double rel_tol) {
  return integrate_substituted(k.phi_sub, {}, rel_tol).value;
}

double integrate_psi(const LayerKernelPair& k, double rel_tol) {
  return integrate_substituted(k.psi_sub, {}, rel_tol).value;
}

std::vector<double> t_grid(int points, double margin) {
  if (points < 2) throw std::invalid_argument("t_grid: need at least two points");
  std::vector<double> g(points);
  const double edge = 1.0 - margin;
  for (int i = 0; i < points; ++i) g[i] = -edge + 2.0 * edge * i / (points - 1);
  return g;
}

KernelDeviation kernel_deviation(int dim, double R, const std::vector<double>& grid) {
  const LayerKernelPair ex = exact_kernels(dim, R);
  const LayerKernelPair as = asymptotic_kernels(dim);
  KernelDeviation dev;
  for (double t : grid) {
    if (std::abs(t) > 1.0 - 1e-6 * (1 - 1e-12))
      throw std::invalid_argument("kernel_deviation: grid must stay 1e-6 away from the endpoints");
    const double dp = std::abs(ex.phi(t) / as.phi(t) - 1.0);
    const double ds = std::abs(ex.psi(t) / as.psi(t) - 1.0);
    if (dp > dev.phi) {
      dev.phi = dp;
      dev.phi_at = t;
    }
    if (ds > dev.psi) {
      dev.psi = ds;
      dev.psi_at = t;
    }
  }
  return dev;
}

}  // namespace isolab
