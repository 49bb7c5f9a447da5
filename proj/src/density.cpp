#include "isolab/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "isolab/rng.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

namespace {

void check_common(int dim, double a) {
  if (dim < 2 || dim > kMaxDim) throw ConfigError("dim: must be in [2, " + std::to_string(kMaxDim) + "]");
  if (!(a > 0) || !std::isfinite(a)) throw ConfigError("a: must be a positive finite number");
}

Density make_radial(int dim, double a, std::function<double(double)> g, std::string label,
                    nlohmann::json cfg) {
  check_common(dim, a);
  Density d;
  d.dim = dim;
  d.limit_a = a;
  d.radial = true;
  d.label = std::move(label);
  d.radial_deficit_fn = g;
  d.deficit_fn = [g](std::span<const double> x) { return g(norm(x)); };
  d.config = std::move(cfg);
  return d;
}

Frame standard_frame(int dim) {
  Frame f;
  for (int i = 0; i < dim; ++i) f.push_back(Vec::unit(dim, i));
  return f;
}

}  // namespace

Density make_constant(int dim, double a) {
  return make_radial(dim, a, [](double) { return 0.0; }, "constant",
                     {{"family", "constant"},
                      {"dim", dim},
                      {"a", a},
                      {"params", nlohmann::json::object()},
                      {"envelope_radius", 0.0}});
}

Density make_radial_exp(int dim, double a, double c) {
  if (!(c > 0)) throw ConfigError("params.c: must be positive");
  return make_radial(
      dim, a, [a, c](double r) { return a * std::exp(-c * r); }, "radial_exp",
      {{"family", "radial_exp"}, {"dim", dim}, {"a", a}, {"params", {{"c", c}}}, {"envelope_radius", 0.0}});
}

Density make_radial_power(int dim, double a, double p) {
  if (!(p > 0)) throw ConfigError("params.p: must be positive");
  return make_radial(
      dim, a, [a, p](double r) { return a * std::pow(1.0 + r, -p); }, "radial_power",
      {{"family", "radial_power"}, {"dim", dim}, {"a", a}, {"params", {{"p", p}}}, {"envelope_radius", 0.0}});
}

Density make_angular_mod(int dim, double a, double c, double eta, int k) {
  check_common(dim, a);
  if (!(c > 0)) throw ConfigError("params.c: must be positive");
  if (!(eta >= 0) || !std::isfinite(eta)) throw ConfigError("params.eta: must be nonnegative");
  if (k < 0) throw ConfigError("params.k: must be a nonnegative integer");
  Density d;
  d.dim = dim;
  d.limit_a = a;
  d.radial = eta == 0.0 || k == 0;
  d.label = "angular_mod";
  d.deficit_fn = [a, c, eta, k](std::span<const double> x) {
    const double r = norm(x);
    const double theta = std::atan2(x[1], x[0]);
    const double g = a * std::exp(-c * r) * (1.0 + eta * std::cos(k * theta));
    return std::min(g, a);
  };
  if (d.radial) {
    const double amp = 1.0 + eta * (k == 0 ? 1.0 : 0.0);
    d.radial_deficit_fn = [a, c, amp](double r) { return std::min(a, a * std::exp(-c * r) * amp); };
  }
  d.config = {{"family", "angular_mod"},
              {"dim", dim},
              {"a", a},
              {"params", {{"c", c}, {"eta", eta}, {"k", k}}},
              {"envelope_radius", 0.0}};
  return d;
}

Density make_custom(int dim, double a, double envelope_radius,
                    std::function<double(std::span<const double>)> deficit, std::string label,
                    std::function<double(double)> radial_deficit) {
  check_common(dim, a);
  Density d;
  d.dim = dim;
  d.limit_a = a;
  d.envelope_radius = envelope_radius;
  d.label = std::move(label);
  d.deficit_fn = std::move(deficit);
  if (radial_deficit) {
    d.radial = true;
    d.radial_deficit_fn = std::move(radial_deficit);
  }
  d.config = {
      {"family", "custom"}, {"label", d.label}, {"dim", dim}, {"a", a}, {"envelope_radius", envelope_radius}};
  return d;
}

Density density_from_json(const nlohmann::json& cfg) {
  if (!cfg.is_object()) throw ConfigError("density: expected a JSON object");
  if (!cfg.contains("family")) throw ConfigError("family: required");
  if (!cfg.contains("dim")) throw ConfigError("dim: required");
  if (!cfg["dim"].is_number_integer()) throw ConfigError("dim: must be an integer");
  if (!cfg["family"].is_string()) throw ConfigError("family: must be a string");
  const int dim = cfg["dim"].get<int>();
  double a = 1.0;
  if (cfg.contains("a")) {
    if (!cfg["a"].is_number()) throw ConfigError("a: must be a number");
    a = cfg["a"].get<double>();
  }
  const nlohmann::json params = cfg.value("params", nlohmann::json::object());
  if (!params.is_object()) throw ConfigError("params: must be an object");
  auto param = [&](const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) throw ConfigError(std::string("params.") + key + ": must be a number");
    return params[key].get<double>();
  };
  const std::string family = cfg["family"].get<std::string>();
  Density d;
  if (family == "constant") {
    check_common(dim, a);
    d = make_constant(dim, a);
  } else if (family == "radial_exp") {
    check_common(dim, a);
    d = make_radial_exp(dim, a, param("c", 1.0));
  } else if (family == "radial_power") {
    check_common(dim, a);
    d = make_radial_power(dim, a, param("p", 1.0));
  } else if (family == "angular_mod") {
    const double k = param("k", 1.0);
    if (k != std::floor(k)) throw ConfigError("params.k: must be an integer");
    d = make_angular_mod(dim, a, param("c", 1.0), param("eta", 0.5), static_cast<int>(k));
  } else {
    throw ConfigError("family: unknown family '" + family + "'");
  }
  if (cfg.contains("envelope_radius")) {
    if (!cfg["envelope_radius"].is_number() || cfg["envelope_radius"].get<double>() < 0)
      throw ConfigError("envelope_radius: must be a nonnegative number");
    d.envelope_radius = cfg["envelope_radius"].get<double>();
  }
  d.config["envelope_radius"] = d.envelope_radius;
  return d;
}

double eval_weight(const Density& d, std::span<const double> x) {
  const double f = d.limit_a - d.deficit(x);
  if (!std::isfinite(f)) throw std::domain_error("density '" + d.label + "' produced a non-finite weight");
  return f;
}

double radial_deficit_average(const Density& d, double r, int node_count) {
  if (r < 0) throw std::invalid_argument("radial average: negative radius");
  if (d.radial) return d.radial_deficit_fn(r);
  if (node_count < 16) throw std::invalid_argument("radial average: node_count must be >= 16");
  const Vec origin(d.dim);
  if (r == 0) return d.deficit(origin);
  if (d.dim > 3)
    node_count = std::max(16, std::min(node_count, static_cast<int>(std::pow(4096.0, 1.0 / (d.dim - 1)))));
  const Frame frame = standard_frame(d.dim);
  // Unit sphere, scaled inside the integrand, so no r^{N-1} Jacobian appears.
  const double s =
      integrate_sphere(frame, origin, 1.0, [&](const Vec& w) { return d.deficit(r * w); }, node_count);
  return s / unit_sphere_area(d.dim);
}

double radial_average(const Density& d, double r, int node_count) {
  if (d.radial) {
    Vec x(d.dim);
    x[0] = r;
    return eval_weight(d, x);
  }
  return d.limit_a - radial_deficit_average(d, r, node_count);
}

RadialDeficit deficit_profile(const Density& d, int node_count) {
  RadialDeficit g;
  g.dim = d.dim;
  g.node_count = node_count;
  if (d.radial) {
    g.profile = d.radial_deficit_fn;
  } else {
    g.profile = [d, node_count](double r) { return radial_deficit_average(d, r, node_count); };
  }
  if (d.config.value("family", "") == "constant") g.support_hint = 0.0;
  return g;
}

std::vector<Vec> probe_directions(int dim, int extra, unsigned long long seed) {
  std::vector<Vec> dirs;
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(Vec::unit(dim, i));
    dirs.push_back(-1.0 * Vec::unit(dim, i));
  }
  Rng rng(seed);
  for (int i = 0; i < extra; ++i) dirs.push_back(rng.on_sphere(dim));
  return dirs;
}

namespace {

std::vector<double> probe_radii(const Density& d, const SampleSpec& spec) {
  if (!spec.radii.empty()) return spec.radii;
  const double r0 = d.envelope_radius;
  const double top = 100.0 * std::max(r0, 1.0);
  std::vector<double> radii;
  const double start = std::max(r0, 1e-3);
  for (double r = start; r <= top * (1 + 1e-12); r *= 1.25) radii.push_back(r);
  if (r0 == 0.0) radii.insert(radii.begin(), 0.0);
  return radii;
}

}  // namespace

ConvergenceReport validate_convergence(const Density& d, const SampleSpec& spec) {
  ConvergenceReport rep;
  const auto dirs = probe_directions(d.dim, spec.random_directions, spec.seed);
  const auto radii = probe_radii(d, spec);
  for (double r : radii) {
    if (r < d.envelope_radius) continue;
    for (const Vec& w : dirs) {
      const Vec x = r * w;
      // f <= a  <=>  deficit >= 0
      if (d.deficit(x) < -1e-12) rep.violations.push_back({r, w, eval_weight(d, x)});
    }
  }
  auto max_decay = [&](double r) {
    double m = 0;
    for (const Vec& w : dirs) m = std::max(m, std::abs(d.deficit(r * w)) / d.limit_a);
    return m;
  };
  rep.decay_radius = 10.0 * std::max(d.envelope_radius, 1.0);
  rep.decay = max_decay(rep.decay_radius);
  rep.far_decay = max_decay(radii.empty() ? rep.decay_radius : std::max(radii.back(), rep.decay_radius));
  rep.pass = rep.violations.empty() && rep.decay <= spec.decay_bound && rep.far_decay <= rep.decay;
  return rep;
}

bool is_ray_monotone(const Density& d, const SampleSpec& spec) {
  const auto dirs = probe_directions(d.dim, spec.random_directions, spec.seed);
  const double r0 = d.envelope_radius;
  const double top = 100.0 * std::max(r0, 1.0);
  for (const Vec& w : dirs) {
    double prev = d.deficit(r0 * w);
    for (int i = 1; i <= 400; ++i) {
      const double r = r0 + (top - r0) * i / 400.0;
      const double cur = d.deficit(r * w);
      // f non-decreasing  <=>  deficit non-increasing
      if (cur > prev + 1e-14 * std::max(1.0, std::abs(prev))) return false;
      prev = cur;
    }
  }
  return true;
}

Rescaled rescale(const Density& d, double target_volume) {
  if (!(target_volume > 0)) throw std::invalid_argument("rescale: target_volume must be positive");
  const int n = d.dim;
  const double a = d.limit_a;
  const double lambda = std::pow(target_volume / (a * unit_ball_volume(n)), 1.0 / n);
  Density out = d;
  out.limit_a = 1.0;
  out.envelope_radius = d.envelope_radius / lambda;
  out.scale = d.scale * lambda;
  auto base = d.deficit_fn;
  out.deficit_fn = [base, lambda, a, n](std::span<const double> x) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = lambda * x[i];
    return base(y.span()) / a;
  };
  if (d.radial) {
    auto rb = d.radial_deficit_fn;
    out.radial_deficit_fn = [rb, lambda, a](double r) { return rb(lambda * r) / a; };
  }
  out.config["rescale"] = {{"target_volume", target_volume}, {"lambda", lambda}};
  return {std::move(out), lambda};
}

}  // namespace isolab

namespace isolab {

ProfileIntegral integrate_profile(const RadialDeficit& g, double R,
                                  const std::function<double(double, double)>& w, double rel_tol) {
  std::vector<double> rs{R - 1.0};
  for (double b : g.breakpoints)
    if (b > R - 1.0 && b < R + 1.0) rs.push_back(b);
  rs.push_back(R + 1.0);
  std::sort(rs.begin(), rs.end());
  ProfileIntegral out;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const double r0 = rs[i], r1 = rs[i + 1];
    if (!(r1 > r0)) continue;
    const double u0 = i == 0 ? -std::numbers::pi / 2 : std::asin(r0 - R);
    const double u1 = i + 2 == rs.size() ? std::numbers::pi / 2 : std::asin(r1 - R);
    // Near a tangency cos u carries only ~1e-16 / (u1 - u0) relative accuracy.
    const double tol = std::max(rel_tol, 1e-14 / (u1 - u0));
    const Integral piece = integrate_adaptive(
        [&](double u) { return w(u, g.profile(std::clamp(R + std::sin(u), r0, r1))); }, u0, u1, tol);
    out.value += piece.value;
    out.error += piece.error;
  }
  return out;
}

}  // namespace isolab
