#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isolab/vec.hpp"

namespace isolab {

/// Malformed configuration; the message starts with the failing field name.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A density f on R^N converging to `limit_a`. The density is stored through
/// its deficit a - f so that far-field quantities keep full relative precision
/// (at |x| = 50 the weight 1 - e^{-|x|} rounds to exactly 1).
///
/// Only continuous closed-form families are provided; lower semicontinuity and
/// local integrability are assumed, not checked.
struct Density {
  int dim = 2;
  double limit_a = 1.0;
  double envelope_radius = 0.0;
  bool radial = false;
  std::string label;
  /// x -> a - f(x)
  std::function<double(std::span<const double>)> deficit_fn;
  /// r -> a - f(r e_1); set only for radial densities.
  std::function<double(double)> radial_deficit_fn;
  /// Coordinate factor of the accumulated rescalings: this density at y is
  /// the original one at scale * y (divided by the original a).
  double scale = 1.0;
  /// Config record the density was built from (echoed into outputs).
  nlohmann::json config;

  double deficit(std::span<const double> x) const { return deficit_fn(x); }
  double deficit(const Vec& x) const { return deficit_fn(x.span()); }
};

Density make_constant(int dim, double a);
/// f = a (1 - e^{-c r})
Density make_radial_exp(int dim, double a, double c);
/// f = a (1 - (1 + r)^{-p})
Density make_radial_power(int dim, double a, double p);
/// f = a (1 - h(r) (1 + eta cos(k theta))), theta = atan2(x_2, x_1) and
/// h(r) = e^{-c r}. Where the modulation would push f below zero the weight is
/// clipped to 0 (only possible for r < log(1 + eta) / c).
Density make_angular_mod(int dim, double a, double c, double eta, int k);
/// Arbitrary deficit, for experiments and tests.
Density make_custom(int dim, double a, double envelope_radius,
                    std::function<double(std::span<const double>)> deficit, std::string label,
                    std::function<double(double)> radial_deficit = {});

/// Parses the density config record
/// {"family", "dim", "a", "params": {...}, "envelope_radius"}.
Density density_from_json(const nlohmann::json& cfg);

/// f(x). Throws std::domain_error on a non-finite value.
double eval_weight(const Density& d, std::span<const double> x);
inline double eval_weight(const Density& d, const Vec& x) { return eval_weight(d, x.span()); }

/// Spherical mean of f over |x| = r with the product Gauss rule
/// (`node_count` nodes per angle, capped for N > 3 so that the rule keeps
/// about 64^2 nodes, never fewer than 16 per angle). Radial densities
/// short-circuit to f(r e_1).
double radial_average(const Density& d, double r, int node_count = 64);

/// Spherical mean of the deficit a - f over |x| = r (same rule as above).
double radial_deficit_average(const Density& d, double r, int node_count = 64);

/// Radial deficit g~(r) = a - f~(r).
struct RadialDeficit {
  int dim = 2;
  std::function<double(double)> profile;
  /// Radius beyond which the profile vanishes identically, when known.
  std::optional<double> support_hint;
  /// Radii where the profile is not smooth; quadratures split there.
  std::vector<double> breakpoints;
  int node_count = 64;

  double operator()(double r) const { return profile(r); }
};

RadialDeficit deficit_profile(const Density& d, int node_count = 64);

struct ProfileIntegral {
  double value = 0;
  double error = 0;
};

/// int_{-pi/2}^{pi/2} w(u, g(R + sin u)) du, split where R + sin u crosses a
/// breakpoint of g. On each piece the radius is clamped to the piece, so
/// rounding near a tangency never evaluates g on the wrong side.
ProfileIntegral integrate_profile(const RadialDeficit& g, double R,
                                  const std::function<double(double, double)>& w, double rel_tol = 1e-12);

struct SampleSpec {
  std::vector<double> radii;   // empty: geometric ladder from R0 to 100 max(R0, 1)
  int random_directions = 32;  // in addition to the +-coordinate axes
  unsigned long long seed = 12345;
  double decay_bound = 0.5;  // relative to a, checked at r = 10 max(R0, 1)
};

struct ConvergenceViolation {
  double radius = 0;
  Vec direction;
  double weight = 0;
};

struct ConvergenceReport {
  bool pass = true;
  std::vector<ConvergenceViolation> violations;
  double decay_radius = 0;
  double decay = 0;      // max |f - a| / a over directions at decay_radius
  double far_decay = 0;  // same at the largest probed radius
};

/// Probes f <= a beyond the envelope radius and the decay of |f - a|.
ConvergenceReport validate_convergence(const Density& d, const SampleSpec& spec = {});

/// Sampled check that f is non-decreasing along rays beyond the envelope radius.
bool is_ray_monotone(const Density& d, const SampleSpec& spec = {});

struct Rescaled {
  Density density;
  double lambda = 1.0;
};

/// x -> f(lambda x) / a with lambda = (target_volume / (a omega_N))^{1/N}:
/// the limit becomes 1 and an f-volume of target_volume maps to omega_N.
Rescaled rescale(const Density& d, double target_volume);

/// Deterministic probe directions: the +-axes followed by `extra` uniform
/// random directions from a fixed-seed generator.
std::vector<Vec> probe_directions(int dim, int extra, unsigned long long seed);

}  // namespace isolab
