#include "isolab/kernel_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isolab/sphere_quadrature.hpp"

namespace isolab {

SlidingKernel beta_kernel(int dim) {
  if (dim < 2) throw std::invalid_argument("beta_kernel: dim must be >= 2");
  const int n = dim;
  const double w = unit_ball_volume(n - 1);
  SlidingKernel k;
  k.kind = SlidingKind::beta;
  k.dim = dim;
  k.values = [n, w](double t) {
    const double q = (1.0 - t) * (1.0 + t);
    return w * std::pow(q, 0.5 * (n - 3)) * (n * t * t - 1.0);
  };
  k.values_sub = [n, w](double u) {
    const double s = std::sin(u);
    return w * std::pow(std::cos(u), n - 2) * (n * s * s - 1.0);
  };
  k.primitive = [n, w](double t) {
    const double q = std::max(0.0, (1.0 - t) * (1.0 + t));
    return -w * t * std::pow(q, 0.5 * (n - 1));
  };
  k.second_primitive = [n, w](double s) {
    const double q = std::max(0.0, (1.0 - s) * (1.0 + s));
    return w * std::pow(q, 0.5 * (n + 1)) / (n + 1);
  };
  return k;
}

SlidingKernel make_kernel(SlidingKind kind, std::function<double(double)> values) {
  SlidingKernel k;
  k.kind = kind;
  k.values = values;
  k.values_sub = [values](double u) { return values(std::sin(u)) * std::cos(u); };
  k.primitive = [values](double s) {
    if (s <= -1.0) return 0.0;
    return integrate_adaptive(values, -1.0, std::min(s, 1.0), 1e-13).value;
  };
  // Cauchy's formula for the repeated integral.
  k.second_primitive = [values](double s) {
    if (s <= -1.0) return 0.0;
    const double top = std::min(s, 1.0);
    return integrate_adaptive([&](double t) { return (s - t) * values(t); }, -1.0, top, 1e-13).value;
  };
  return k;
}

AdmissibilityReport check_admissibility(const SlidingKernel& k, const std::vector<double>& grid, double tol) {
  if (grid.empty()) throw std::invalid_argument("check_admissibility: empty grid");
  const bool beta = k.kind == SlidingKind::beta;
  const auto& partial = beta ? k.second_primitive : k.primitive;
  AdmissibilityReport r;
  r.integral = partial(1.0);
  r.integral_zero = std::abs(r.integral) <= tol;
  r.min_partial = partial(grid.front());
  r.min_partial_at = grid.front();
  for (double s : grid) {
    if (!(std::abs(s) <= 1.0 - 1e-6 * (1 - 1e-9)))
      throw std::invalid_argument("check_admissibility: grid must stay 1e-6 inside (-1, 1)");
    const double v = partial(s);
    if (v < r.min_partial) {
      r.min_partial = v;
      r.min_partial_at = s;
    }
  }
  r.partial_positive = r.min_partial > 0;
  r.pass = r.integral_zero && r.partial_positive;
  if (beta) {
    r.alpha_at_one = k.primitive(1.0);
    r.alpha_one_zero = std::abs(*r.alpha_at_one) <= tol;
    r.pass = r.pass && *r.alpha_one_zero;
  }
  return r;
}

namespace {

double correlation_value(const SlidingKernel& k, const RadialDeficit& g, double R, double rel_tol) {
  if (g.support_hint && *g.support_hint <= R - 1.0) return 0.0;
  return integrate_profile(g, R, [&](double u, double gv) { return k.values_sub(u) * gv; }, rel_tol).value;
}

}  // namespace

Correlation correlation(const SlidingKernel& k, const RadialDeficit& g, double R, double rel_tol) {
  if (!(R > 1)) throw std::invalid_argument("correlation: R must exceed 1");
  Correlation c;
  if (g.support_hint && *g.support_hint <= R - 1.0) return c;
  const auto v = integrate_profile(g, R, [&](double u, double gv) { return k.values_sub(u) * gv; }, rel_tol);
  const auto a =
      integrate_profile(g, R, [&](double u, double gv) { return std::abs(k.values_sub(u) * gv); }, rel_tol);
  c.value = v.value;
  c.absolute = a.value;
  c.error = v.error;
  return c;
}

SignSearchOutcome sliding_sign_search(const SlidingKernel& k, const RadialDeficit& g, double R_min,
                                      double R_max, double step) {
  if (!(R_min > 1)) throw std::invalid_argument("sliding_sign_search: R_min must exceed 1");
  if (!(R_max >= R_min)) throw std::invalid_argument("sliding_sign_search: R_max must be >= R_min");
  if (!(step > 0)) throw std::invalid_argument("sliding_sign_search: step must be positive");
  SignSearchOutcome out;
  if (g.support_hint && *g.support_hint <= R_min - 1.0) {
    out.found = true;
    out.degenerate = true;
    out.R = R_min;
    return out;
  }
  const long long count = static_cast<long long>(std::floor((R_max - R_min) / step * (1 + 1e-12))) + 1;
  std::optional<std::size_t> hit;
  bool all_zero = true;
  for (long long i = 0; i < count; ++i) {
    const double R = R_min + step * i;
    const Correlation c = correlation(k, g, R);
    out.scan.emplace_back(R, c.value);
    if (c.absolute > 0) all_zero = false;
    // Windows that miss the deficit carry no information and are skipped.
    if (c.absolute > 0 && c.value >= 0) {
      hit = out.scan.size() - 1;
      break;
    }
  }
  if (all_zero) {
    out.found = true;
    out.degenerate = true;
    out.R = R_min;
    return out;
  }
  if (!hit) return out;
  out.found = true;
  out.R = out.scan[*hit].first;
  out.correlation = out.scan[*hit].second;
  out.strict = out.correlation > kStrictRelative * correlation(k, g, out.R).absolute;
  if (*hit > 0) {
    double lo = out.scan[*hit - 1].first, hi = out.R;
    for (int it = 0; it < 80 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (correlation(k, g, mid).value >= 0 ? hi : lo) = mid;
    }
    out.crossing = hi;
  }
  return out;
}

AveragingIdentity averaging_identity(const SlidingKernel& k, const RadialDeficit& g, double R1, double R2,
                                     double rel_tol) {
  if (!(R1 > 1) || !(R2 >= R1 + 2.0))
    throw std::invalid_argument("averaging_identity: need R1 > 1 and R2 >= R1 + 2");
  AveragingIdentity id;
  std::vector<double> bps;
  // corr(R) is only non-smooth where a window edge R +- 1 crosses a breakpoint.
  for (double b : g.breakpoints)
    for (double r : {b - 1.0, b + 1.0})
      if (r > R1 && r < R2) bps.push_back(r);
  std::sort(bps.begin(), bps.end());
  double lhs = 0, lo = R1;
  bps.push_back(R2);
  for (double b : bps) {
    // R = lo + (b - lo)(1 - cos phi)/2 smooths square-root behaviour at the kinks.
    const double half = 0.5 * (b - lo);
    lhs += integrate_adaptive(
               [&](double phi) {
                 const double R = lo + half * (1.0 - std::cos(phi));
                 return correlation_value(k, g, R, 0.1 * rel_tol) * half * std::sin(phi);
               },
               0.0, std::numbers::pi, rel_tol)
               .value;
    lo = b;
  }
  id.lhs = lhs;
  const double total = k.primitive(1.0);
  id.near_term =
      integrate_profile(
          g, R1, [&](double u, double gv) { return gv * k.primitive(std::sin(u)) * std::cos(u); }, rel_tol)
          .value;
  id.far_term =
      integrate_profile(
          g, R2, [&](double u, double gv) { return gv * (total - k.primitive(std::sin(u))) * std::cos(u); },
          rel_tol)
          .value;
  return id;
}

}  // namespace isolab
