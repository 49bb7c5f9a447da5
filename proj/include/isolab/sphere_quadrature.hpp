#pragma once

// Fixed-node and adaptive quadrature used by every measure in the library:
// Gauss-Legendre rules, product rules on spheres spanned by an orthonormal
// frame, and an adaptive Gauss-Kronrod wrapper for one-dimensional layers.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "isolab/vec.hpp"

namespace isolab {

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached; the returned
/// reference stays valid for the lifetime of the program.
const GaussRule& gauss_legendre(int n);

/// Orthonormal frame; the last vector is the pole axis of the sphere it spans.
using Frame = std::vector<Vec>;

/// Completes `leading` (orthonormal) to an orthonormal basis of R^dim.
/// The completion vectors come first, `leading` is appended in order, so the
/// last given vector becomes the pole axis.
Frame complete_frame(int dim, const std::vector<Vec>& leading);

/// Euclidean volume of the unit ball of R^n.
double unit_ball_volume(int n);

/// Hausdorff measure of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

namespace detail {

template <class F>
double sphere_full(const Frame& frame, int m, const Vec& base, double scale, int n, F& f);

template <class F>
double sphere_range(const Frame& frame, int m, const Vec& base, double scale, int n, double lo, double hi,
                    F& f) {
  if (m == 1) {
    double s = 0;
    if (lo <= 0.0) {
      Vec p = base;
      axpy(scale, frame[0], p);
      s += f(p);
    }
    if (hi >= std::numbers::pi) {
      Vec p = base;
      axpy(-scale, frame[0], p);
      s += f(p);
    }
    return s;
  }
  const GaussRule& g = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  const Vec& pole = frame[m - 1];
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double psi = mid + half * g.nodes[i];
    const double c = std::cos(psi), sn = std::sin(psi);
    Vec p = base;
    axpy(scale * c, pole, p);
    const double w = g.weights[i] * half * (m > 2 ? std::pow(sn, m - 2) : 1.0);
    s += w * sphere_full(frame, m - 1, p, scale * sn, n, f);
  }
  return s;
}

template <class F>
double sphere_full(const Frame& frame, int m, const Vec& base, double scale, int n, F& f) {
  if (m == 2) {
    // Uniform azimuth: exact for trigonometric polynomials of degree < n.
    double s = 0;
    const double h = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
      const double psi = h * j;
      Vec p = base;
      axpy(scale * std::cos(psi), frame[0], p);
      axpy(scale * std::sin(psi), frame[1], p);
      s += f(p);
    }
    return s * h;
  }
  return sphere_range(frame, m, base, scale, n, 0.0, std::numbers::pi, f);
}

}  // namespace detail

/// Integral of f over the sphere of radius `radius` centred at `center` inside
/// span(frame), restricted to polar angles [polar_lo, polar_hi] measured from
/// frame.back(). Hausdorff measure of dimension frame.size() - 1.
template <class F>
double integrate_sphere(const Frame& frame, const Vec& center, double radius, F&& f, int nodes = 64,
                        double polar_lo = 0.0, double polar_hi = std::numbers::pi) {
  const int m = static_cast<int>(frame.size());
  const double jac = std::pow(radius, m - 1);
  if (polar_lo <= 0.0 && polar_hi >= std::numbers::pi)
    return jac * detail::sphere_full(frame, m, center, radius, nodes, f);
  return jac * detail::sphere_range(frame, m, center, radius, nodes, polar_lo, polar_hi, f);
}

/// Integral of f over the (frame.size())-dimensional ball of radius `radius`
/// in span(frame) centred at `center`, restricted to the given polar range.
template <class F>
double integrate_ball(const Frame& frame, const Vec& center, double radius, F&& f, int radial_nodes,
                      int angular_nodes, double polar_lo = 0.0, double polar_hi = std::numbers::pi) {
  const GaussRule& g = gauss_legendre(radial_nodes);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double r = 0.5 * radius * (1.0 + g.nodes[i]);
    const double w = 0.5 * radius * g.weights[i];
    // integrate_sphere already carries the r^{m-1} Jacobian.
    s += w * integrate_sphere(frame, center, r, f, angular_nodes, polar_lo, polar_hi);
  }
  return s;
}

struct SphereNode {
  Vec point;
  double weight = 0;
};

/// The nodes and weights integrate_sphere uses on the unit sphere of
/// span(frame) centred at the origin; the weights sum to its area.
std::vector<SphereNode> sphere_rule(const Frame& frame, int nodes);

struct Integral {
  double value = 0;
  double error = 0;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b]; `rel_tol` is relative to the
/// L1 norm of the integrand.
Integral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-12, int max_depth = 18);

/// Integral over t in (-1, 1) of an integrand given in the substituted
/// variable t = sin u, i.e. `sub(u)` must already include the cos u Jacobian.
/// The interval is split at the given t-breakpoints.
Integral integrate_substituted(const std::function<double(double)>& sub,
                               const std::vector<double>& t_breakpoints = {}, double rel_tol = 1e-12);

}  // namespace isolab
