#include "isolab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "isolab/rng.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

namespace {

bool in_ball(const Vec& x, const Vec& center, double radius) {
  const Vec d = x - center;
  return dot(d, d) <= radius * radius;
}

bool contains_unscaled(const PlainBall& b, const Vec& x) { return in_ball(x, b.offset * b.direction, 1.0); }

bool contains_unscaled(const CylinderExtended& s, const Vec& x) {
  const Vec& th = s.base.direction;
  const double R = s.base.offset;
  const double u = dot(x, th);
  if (u >= R) return in_ball(x, R * th, 1.0);
  if (u >= R - s.delta) {
    const Vec w = x - u * th;
    return dot(w, w) <= 1.0;
  }
  return in_ball(x, (R - s.delta) * th, (R - s.delta) / R);
}

bool contains_unscaled(const RotationSwept& s, const Vec& x) {
  const Vec& th = s.base.direction;
  const Vec& e = s.plane_dir;
  const double phi = std::atan2(dot(x, e), dot(x, th));
  if (phi <= 0) return contains_unscaled(s.base, x);
  if (phi <= s.delta) return contains_unscaled(s.base, rotate_in_plane(x, th, e, -phi));
  return contains_unscaled(s.base, rotate_in_plane(x, th, e, -s.delta));
}

// Point of the ambient space from coordinates `c` (one per frame vector).
Vec embed(const std::vector<Vec>& frame, const Vec& origin, const double* c) {
  Vec x = origin;
  for (std::size_t i = 0; i < frame.size(); ++i) axpy(c[i], frame[i], x);
  return x;
}

// Uniform direction on the unit sphere of span(frame).
Vec sphere_point(Rng& rng, const std::vector<Vec>& frame) {
  const int m = static_cast<int>(frame.size());
  const Vec w = rng.on_sphere(m);
  return embed(frame, Vec(frame.front().dim), w.x.data());
}

// Sample of one boundary patch: the point and the Jacobian factor relative
// to the uniform law (1 except on the swept wall).
struct PatchSample {
  Vec x;
  double weight = 1.0;
};

struct Patch {
  double area = 0;
  std::function<PatchSample(Rng&)> draw;
};

std::vector<Patch> patches(const PlainBall& b, int n) {
  const std::vector<Vec> fr = complete_frame(n, {b.direction});
  const Vec c = b.offset * b.direction;
  return {{unit_sphere_area(n), [fr, c](Rng& r) { return PatchSample{c + sphere_point(r, fr)}; }}};
}

std::vector<Patch> patches(const CylinderExtended& s, int n) {
  const Vec th = s.base.direction;
  const double R = s.base.offset, delta = s.delta, rho = (R - delta) / R;
  const std::vector<Vec> fr = complete_frame(n, {th});
  const std::vector<Vec> perp(fr.begin(), fr.end() - 1);
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  const double rho_p = std::pow(rho, n - 1);
  auto hemi = [th](Vec w, bool far) {
    const double u = dot(w, th);
    if ((u < 0) == far) axpy(-2.0 * u, th, w);
    return w;
  };
  std::vector<Patch> p;
  p.push_back({0.5 * n * wn, [=](Rng& r) { return PatchSample{R * th + hemi(sphere_point(r, fr), true)}; }});
  if (delta > 0) {
    p.push_back({(n - 1) * wn1 * delta, [=](Rng& r) {
                   const double h = r.uniform(R - delta, R);
                   return PatchSample{h * th + sphere_point(r, perp)};
                 }});
    p.push_back({wn1 * (1.0 - rho_p), [=](Rng& r) {
                   const double rad = std::pow(rho_p + r.uniform() * (1.0 - rho_p), 1.0 / (n - 1));
                   return PatchSample{(R - delta) * th + rad * sphere_point(r, perp)};
                 }});
  }
  p.push_back({0.5 * n * wn * rho_p, [=](Rng& r) {
                 return PatchSample{(R - delta) * th + rho * hemi(sphere_point(r, fr), false)};
               }});
  return p;
}

std::vector<Patch> patches(const RotationSwept& s, int n) {
  const Vec th = s.base.direction, e = s.plane_dir;
  const double R = s.base.offset, delta = s.delta;
  const std::vector<Vec> fr = complete_frame(n, {th, e});
  // Unit sphere of the diametral hyperplane e^perp.
  const std::vector<Vec> eperp(fr.begin(), fr.end() - 1);
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  auto side = [e](Vec w, bool upper) {
    const double v = dot(w, e);
    if ((v < 0) == upper) axpy(-2.0 * v, e, w);
    return w;
  };
  std::vector<Patch> p;
  p.push_back({0.5 * n * wn, [=](Rng& r) { return PatchSample{R * th + side(sphere_point(r, fr), false)}; }});
  p.push_back({0.5 * n * wn, [=](Rng& r) {
                 const Vec y = R * th + side(sphere_point(r, fr), true);
                 return PatchSample{rotate_in_plane(y, th, e, delta)};
               }});
  if (delta > 0) {
    // Uniform in (phi, y); the area element carries the distance y.theta to
    // the rotation axis, which averages to R.
    p.push_back({(n - 1) * wn1 * R * delta, [=](Rng& r) {
                   const double phi = r.uniform(0.0, delta);
                   const Vec y = R * th + sphere_point(r, eperp);
                   return PatchSample{rotate_in_plane(y, th, e, phi), dot(y, th) / R};
                 }});
  }
  return p;
}

}  // namespace

bool contains(const CompetitorSet& e, const Vec& x) {
  const Vec y = (1.0 / e.scale) * x;
  return std::visit([&](const auto& s) { return contains_unscaled(s, y); }, e.shape);
}

double BoundingBox::volume() const {
  double v = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

BoundingBox bounding_box(const CompetitorSet& e) {
  validate_set(e);
  const int n = e.dim;
  BoundingBox b;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RotationSwept>) {
          const double R = s.base.offset;
          const Frame fr = complete_frame(n, {s.base.direction, s.plane_dir});
          b.frame = {s.base.direction, s.plane_dir};
          b.frame.insert(b.frame.end(), fr.begin(), fr.end() - 2);
          b.lo = {R * std::cos(s.delta) - 1.0, -1.0};
          b.hi = {R + 1.0, R * std::sin(s.delta) + 1.0};
        } else {
          const PlainBall* pb;
          double lo;
          if constexpr (std::is_same_v<T, PlainBall>) {
            pb = &s;
            lo = s.offset - 1.0;
          } else {
            pb = &s.base;
            lo = (s.base.offset - s.delta) * (1.0 - 1.0 / s.base.offset);
          }
          const Frame fr = complete_frame(n, {pb->direction});
          b.frame = {pb->direction};
          b.frame.insert(b.frame.end(), fr.begin(), fr.end() - 1);
          b.lo = {lo};
          b.hi = {pb->offset + 1.0};
        }
        while (static_cast<int>(b.lo.size()) < n) {
          b.lo.push_back(-1.0);
          b.hi.push_back(1.0);
        }
      },
      e.shape);
  return b;
}

SetMeasures monte_carlo_measures(const CompetitorSet& e, const Density& d, const MeasureBudget& budget) {
  validate_set(e);
  if (e.dim != d.dim) throw std::invalid_argument("monte_carlo_measures: set and density dimensions differ");
  if (budget.samples < 10'000) throw std::invalid_argument("monte_carlo_measures: need at least 1e4 samples");
  const int n = e.dim;
  const double sc = e.scale;
  const double sv = std::pow(sc, n), sp = std::pow(sc, n - 1);
  const double a = d.limit_a;
  auto g_at = [&](const Vec& y) { return d.deficit(sc * y); };

  // Volume: rejection in the box.
  const BoundingBox box = bounding_box(e);
  const CompetitorSet unit{e.shape, e.dim, 1.0};
  Rng vr(Rng::sub_seed(budget.seed, 0));
  double sf = 0, sf2 = 0, sg = 0, sg2 = 0;
  double c[kMaxDim];
  const Vec origin(n);
  for (long long i = 0; i < budget.samples; ++i) {
    for (int k = 0; k < n; ++k) c[k] = vr.uniform(box.lo[k], box.hi[k]);
    const Vec x = embed(box.frame, origin, c);
    if (!contains(unit, x)) continue;
    const double g = g_at(x), f = a - g;
    sf += f;
    sf2 += f * f;
    sg += g;
    sg2 += g * g;
  }
  const double ns = static_cast<double>(budget.samples);
  auto mean_se = [ns](double s, double s2, double scale) {
    const double m = s / ns;
    const double var = std::max(0.0, s2 / ns - m * m);
    return std::pair{scale * m, scale * std::sqrt(var / (ns - 1))};
  };
  const double bv = box.volume();
  const auto [vf, vf_se] = mean_se(sf, sf2, bv);
  const auto [vg, vg_se] = mean_se(sg, sg2, bv);

  // Perimeter: each patch sampled in proportion to its area.
  const std::vector<Patch> ps = std::visit([&](const auto& s) { return patches(s, n); }, e.shape);
  double total_area = 0;
  for (const Patch& p : ps) total_area += p.area;
  double pf = 0, pf_var = 0, pg = 0, pg_var = 0;
  long long used = 0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const long long m = std::max<long long>(1000, static_cast<long long>(ns * ps[j].area / total_area));
    Rng pr(Rng::sub_seed(budget.seed, j + 1));
    double tf = 0, tf2 = 0, tg = 0, tg2 = 0;
    for (long long i = 0; i < m; ++i) {
      const PatchSample s = ps[j].draw(pr);
      const double g = g_at(s.x) * s.weight, f = a * s.weight - g;
      tf += f;
      tf2 += f * f;
      tg += g;
      tg2 += g * g;
    }
    const double mm = static_cast<double>(m);
    auto acc = [&](double t, double t2, double& sum, double& var) {
      const double mean = t / mm;
      sum += ps[j].area * mean;
      var += ps[j].area * ps[j].area * std::max(0.0, t2 / mm - mean * mean) / (mm - 1);
    };
    acc(tf, tf2, pf, pf_var);
    acc(tg, tg2, pg, pg_var);
    used += m;
  }

  const EuclidExcess ex = euclid_excess(e);
  const double wn = unit_ball_volume(n);
  SetMeasures out;
  out.perimeter_excess = sp * ex.perimeter;
  out.volume_excess = sv * ex.volume;
  out.perimeter_euclid = sp * (n * wn + ex.perimeter);
  out.volume_euclid = sv * (wn + ex.volume);
  auto result = [&](double value, double se, long long count) {
    return MeasureResult{value, Method::monte_carlo, se, count, budget.seed};
  };
  out.volume = result(sv * vf, sv * vf_se, budget.samples);
  out.volume_deficit = result(sv * vg, sv * vg_se, budget.samples);
  out.perimeter = result(sp * pf, sp * std::sqrt(pf_var), used);
  out.perimeter_deficit = result(sp * pg, sp * std::sqrt(pg_var), used);
  return out;
}

}  // namespace isolab
