#include "isolab/mass_escape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isolab/layer_geometry.hpp"
#include "isolab/monte_carlo.hpp"
#include "isolab/rng.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

MeasureResult tail_mass(const CompetitorSet& e, const Density& d, double t, const MeasureBudget& budget) {
  validate_set(e);
  if (!(t >= 0)) throw std::invalid_argument("tail_mass: t must be nonnegative");
  if (e.dim != d.dim) throw std::invalid_argument("tail_mass: set and density dimensions differ");
  const int n = e.dim;
  const double a = d.limit_a;
  MeasureResult r;
  if (const auto* b = std::get_if<PlainBall>(&e.shape); b && d.radial) {
    const double sc = e.scale, R = b->offset;
    const double lo = t / sc - R;
    r.method = Method::quadrature;
    if (lo >= 1.0) return r;
    const LayerKernelPair k = exact_kernels(n, R);
    const double u0 = lo <= -1.0 ? -std::numbers::pi / 2 : std::asin(lo);
    const auto& rad = d.radial_deficit_fn;
    const Integral v =
        integrate_adaptive([&](double u) { return k.psi_sub(u) * (a - rad(sc * (R + std::sin(u)))); }, u0,
                           std::numbers::pi / 2, budget.quadrature_tol);
    const double sv = std::pow(sc, n);
    r.value = sv * v.value;
    r.error_estimate = std::max(sv * v.error, budget.quadrature_tol * std::abs(r.value));
    r.samples_or_nodes = 31;
    return r;
  }
  const BoundingBox box = bounding_box(e);
  const CompetitorSet unit{e.shape, e.dim, 1.0};
  Rng rng(Rng::sub_seed(budget.seed, 0));
  const double sc = e.scale;
  const double tt = t / sc;
  double s = 0, s2 = 0;
  double c[kMaxDim];
  for (long long i = 0; i < budget.samples; ++i) {
    Vec x(n);
    for (int k = 0; k < n; ++k) c[k] = rng.uniform(box.lo[k], box.hi[k]);
    for (int k = 0; k < n; ++k) axpy(c[k], box.frame[k], x);
    if (norm(x) <= tt || !contains(unit, x)) continue;
    const double f = a - d.deficit(sc * x);
    s += f;
    s2 += f * f;
  }
  const double ns = static_cast<double>(budget.samples);
  const double mean = s / ns;
  const double scale = std::pow(sc, n) * box.volume();
  r.method = Method::monte_carlo;
  r.value = scale * mean;
  r.error_estimate = scale * std::sqrt(std::max(0.0, s2 / ns - mean * mean) / (ns - 1));
  r.samples_or_nodes = budget.samples;
  r.seed = budget.seed;
  return r;
}

TailMassCurve tail_mass_curve(const CompetitorSet& e, const Density& d, const std::vector<double>& times,
                              const MeasureBudget& budget) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("tail_mass_curve: times must be increasing");
  TailMassCurve c;
  c.times = times;
  for (double t : times) c.masses.push_back(tail_mass(e, d, t, budget).value);
  return c;
}

double extinction_time(double C2, int dim, double m0) {
  if (!(C2 > 0) || !(m0 > 0) || dim < 2)
    throw std::invalid_argument("extinction_time: inputs must be positive");
  return dim * std::pow(C2, (dim - 1.0) / dim) * std::pow(m0, 1.0 / dim);
}

double ode_mass(double C2, int dim, double m0, double t) {
  const double rate = 1.0 / (dim * std::pow(C2, (dim - 1.0) / dim));
  const double u = std::pow(m0, 1.0 / dim) - rate * t;
  return u > 0 ? std::pow(u, dim) : 0.0;
}

OdeCertificate simulate_comparison_ode(double C2, int dim, double m0, double step) {
  if (!(step > 0)) throw std::invalid_argument("simulate_comparison_ode: step must be positive");
  OdeCertificate cert;
  cert.predicted = extinction_time(C2, dim, m0);
  cert.curve.source = TailSource::analytic;
  const double rate = 1.0 / (dim * std::pow(C2, (dim - 1.0) / dim));
  const double u0 = std::pow(m0, 1.0 / dim);
  double t = 0;
  cert.curve.times.push_back(0.0);
  cert.curve.masses.push_back(m0);
  for (long long k = 1;; ++k) {
    // Position from the start rather than accumulated, so rounding does not drift.
    const double u = u0 - rate * step * k;
    if (u <= 0) {
      const double u_prev = u0 - rate * step * (k - 1);
      cert.extinction = t + u_prev / rate;
      cert.curve.times.push_back(cert.extinction);
      cert.curve.masses.push_back(0.0);
      cert.steps = k;
      break;
    }
    t = step * k;
    cert.curve.times.push_back(t);
    cert.curve.masses.push_back(std::pow(u, dim));
  }
  return cert;
}

std::vector<double> finite_difference(const TailMassCurve& c) {
  const std::size_t n = c.times.size();
  if (n < 2 || c.masses.size() != n)
    throw std::invalid_argument("finite_difference: need at least two points");
  std::vector<double> d(n);
  d[0] = (c.masses[1] - c.masses[0]) / (c.times[1] - c.times[0]);
  d[n - 1] = (c.masses[n - 1] - c.masses[n - 2]) / (c.times[n - 1] - c.times[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (c.masses[i + 1] - c.masses[i - 1]) / (c.times[i + 1] - c.times[i - 1]);
  return d;
}

double inequality_residual(const TailMassCurve& c, double C2, int dim) {
  const auto dm = finite_difference(c);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dm.size(); ++i) {
    const double speed = std::max(0.0, -dm[i]);
    worst = std::max(worst, c.masses[i] - C2 * std::pow(speed, dim / (dim - 1.0)));
  }
  return worst;
}

double comparison_excess(const TailMassCurve& c, double C2, int dim) {
  if (c.times.empty()) throw std::invalid_argument("comparison_excess: empty curve");
  double worst = -std::numeric_limits<double>::infinity();
  const double t0 = c.times.front(), m0 = c.masses.front();
  for (std::size_t i = 0; i < c.times.size(); ++i)
    worst = std::max(worst, c.masses[i] - ode_mass(C2, dim, m0, c.times[i] - t0));
  return worst;
}

}  // namespace isolab
