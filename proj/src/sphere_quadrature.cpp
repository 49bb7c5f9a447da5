#include "isolab/sphere_quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <map>
#include <memory>
#include <mutex>

namespace isolab {

namespace {

GaussRule build_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<GaussRule>(GaussRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<GaussRule>(build_gauss_legendre(n));
    }
  }
  return *slot;
}

namespace {

void collect(const Frame& frame, int m, const Vec& base, double scale, double weight, int n,
             std::vector<SphereNode>& out) {
  if (m == 1) {
    Vec p = base, q = base;
    axpy(scale, frame[0], p);
    axpy(-scale, frame[0], q);
    out.push_back({p, weight});
    out.push_back({q, weight});
    return;
  }
  if (m == 2) {
    const double h = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
      Vec p = base;
      axpy(scale * std::cos(h * j), frame[0], p);
      axpy(scale * std::sin(h * j), frame[1], p);
      out.push_back({p, weight * h});
    }
    return;
  }
  const GaussRule& g = gauss_legendre(n);
  const double half = 0.5 * std::numbers::pi;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double psi = half * (1.0 + g.nodes[i]);
    Vec p = base;
    axpy(scale * std::cos(psi), frame[m - 1], p);
    const double w = g.weights[i] * half * std::pow(std::sin(psi), m - 2);
    collect(frame, m - 1, p, scale * std::sin(psi), weight * w, n, out);
  }
}

}  // namespace

std::vector<SphereNode> sphere_rule(const Frame& frame, int nodes) {
  std::vector<SphereNode> out;
  collect(frame, static_cast<int>(frame.size()), Vec(frame.front().dim), 1.0, 1.0, nodes, out);
  return out;
}

Frame complete_frame(int dim, const std::vector<Vec>& leading) {
  Frame extra;
  for (int axis = 0; axis < dim && static_cast<int>(extra.size() + leading.size()) < dim; ++axis) {
    Vec v = Vec::unit(dim, axis);
    for (const Vec& u : leading) axpy(-dot(v, u), u, v);
    for (const Vec& u : extra) axpy(-dot(v, u), u, v);
    const double n = norm(v);
    if (n < 1e-8) continue;
    v = (1.0 / n) * v;
    // second pass for orthogonality to rounding
    for (const Vec& u : leading) axpy(-dot(v, u), u, v);
    for (const Vec& u : extra) axpy(-dot(v, u), u, v);
    extra.push_back(normalized(v));
  }
  Frame frame = extra;
  frame.insert(frame.end(), leading.begin(), leading.end());
  return frame;
}

double unit_ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
  // omega_0 = 1, omega_1 = 2, omega_n = 2 pi / n omega_{n-2}
  double w0 = 1.0, w1 = 2.0;
  if (n == 0) return w0;
  for (int k = 2; k <= n; ++k) {
    const double w2 = 2.0 * std::numbers::pi / k * w0;
    w0 = w1;
    w1 = w2;
  }
  return w1;
}

Integral integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                            int max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  Integral out;
  if (a == b) return out;
  double l1 = 0;
  out.value = gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &out.error, &l1);
  return out;
}

Integral integrate_substituted(const std::function<double(double)>& sub,
                               const std::vector<double>& t_breakpoints, double rel_tol) {
  std::vector<double> us{-std::numbers::pi / 2};
  for (double t : t_breakpoints)
    if (t > -1.0 && t < 1.0) us.push_back(std::asin(t));
  us.push_back(std::numbers::pi / 2);
  std::sort(us.begin(), us.end());
  Integral total;
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    if (us[i + 1] <= us[i]) continue;
    const Integral piece = integrate_adaptive(sub, us[i], us[i + 1], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

}  // namespace isolab
