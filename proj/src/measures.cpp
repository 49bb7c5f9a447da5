#include "isolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isolab/monte_carlo.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

const char* to_string(Method m) { return m == Method::quadrature ? "quadrature" : "monte_carlo"; }

CompetitorSet make_plain_ball(const Vec& direction, double offset) {
  CompetitorSet e{PlainBall{normalized(direction), offset}, direction.dim, 1.0};
  validate_set(e);
  return e;
}

CompetitorSet make_cylinder_extended(const Vec& direction, double offset, double delta) {
  CompetitorSet e{CylinderExtended{PlainBall{normalized(direction), offset}, delta}, direction.dim, 1.0};
  validate_set(e);
  return e;
}

CompetitorSet make_rotation_swept(const Vec& direction, double offset, double delta, const Vec& plane_dir) {
  CompetitorSet e{RotationSwept{PlainBall{normalized(direction), offset}, delta, normalized(plane_dir)},
                  direction.dim, 1.0};
  validate_set(e);
  return e;
}

namespace {

void check_ball(const PlainBall& b, int dim) {
  if (b.direction.dim != dim) throw std::invalid_argument("set: direction dimension mismatch");
  if (std::abs(norm(b.direction) - 1.0) > 1e-12)
    throw std::invalid_argument("set: direction must be a unit vector");
  if (!(b.offset > 1.0)) throw std::invalid_argument("set: offset R must exceed 1");
}

}  // namespace

void validate_set(const CompetitorSet& e) {
  if (e.dim < 2 || e.dim > kMaxDim) throw std::invalid_argument("set: dim out of range");
  if (!(e.scale > 0)) throw std::invalid_argument("set: scale must be positive");
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlainBall>) {
          check_ball(s, e.dim);
        } else if constexpr (std::is_same_v<T, CylinderExtended>) {
          check_ball(s.base, e.dim);
          if (!(s.delta >= 0) || !(s.delta < s.base.offset))
            throw std::invalid_argument("set: cylinder delta must lie in [0, R)");
        } else {
          check_ball(s.base, e.dim);
          if (!(s.delta >= 0) || !(s.delta <= std::numbers::pi / 2))
            throw std::invalid_argument("set: rotation delta must lie in [0, pi/2]");
          if (s.plane_dir.dim != e.dim || std::abs(norm(s.plane_dir) - 1.0) > 1e-12 ||
              std::abs(dot(s.plane_dir, s.base.direction)) > 1e-12)
            throw std::invalid_argument("set: plane_dir must be a unit vector orthogonal to direction");
        }
      },
      e.shape);
}

std::string variant_name(const CompetitorSet& e) {
  switch (e.shape.index()) {
    case 0:
      return "plain_ball";
    case 1:
      return "cylinder_extended";
    default:
      return "rotation_swept";
  }
}

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - (1 - delta/R)^k without cancellation.
double one_minus_ratio_pow(double delta, double R, int k) { return -std::expm1(k * std::log1p(-delta / R)); }

// Integral over [0, len] with a fixed Gauss rule.
template <class F>
double line_integral(double len, int nodes, F&& f) {
  if (len == 0) return 0.0;
  const GaussRule& g = gauss_legendre(nodes);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(0.5 * len * (1 + g.nodes[i]));
  return 0.5 * len * s;
}

struct Pieces {
  PieceFilter filter;
  std::vector<Piece> out;
  template <class F>
  void add(const char* name, bool boundary, double euclid, F&& deficit) {
    if (filter == PieceFilter::all || (filter == PieceFilter::boundary) == boundary)
      out.push_back({name, boundary, euclid, deficit()});
  }
};

Vec rotate(const Vec& y, const Vec& theta, const Vec& e, double phi) {
  return rotate_in_plane(y, theta, e, phi);
}

std::vector<Piece> pieces_for(const PlainBall& b, int n, const std::function<double(const Vec&)>& g,
                              const MeasureBudget& q, PieceFilter filter) {
  const Frame fr = complete_frame(n, {b.direction});
  const Vec c = b.offset * b.direction;
  const double w = unit_ball_volume(n);
  Pieces p{filter, {}};
  p.add("ball", false, w, [&] { return integrate_ball(fr, c, 1.0, g, q.radial_nodes, q.angular_nodes); });
  p.add("sphere", true, n * w, [&] { return integrate_sphere(fr, c, 1.0, g, q.angular_nodes); });
  return p.out;
}

std::vector<Piece> pieces_for(const CylinderExtended& s, int n, const std::function<double(const Vec&)>& g,
                              const MeasureBudget& q, PieceFilter filter) {
  const Vec& th = s.base.direction;
  const double R = s.base.offset, delta = s.delta;
  const double rho = (R - delta) / R;
  const Frame fr = complete_frame(n, {th});
  const Frame perp(fr.begin(), fr.end() - 1);
  const Vec c = R * th;
  const Vec cl = (R - delta) * th;
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  const double shrink_v = one_minus_ratio_pow(delta, R, n);
  const double shrink_p = one_minus_ratio_pow(delta, R, n - 1);
  Pieces p{filter, {}};
  p.add("right_half_ball", false, 0.5 * wn,
        [&] { return integrate_ball(fr, c, 1.0, g, q.radial_nodes, q.angular_nodes, 0.0, kPi / 2); });
  p.add("cylinder", false, wn1 * delta, [&] {
    return line_integral(delta, q.sweep_nodes, [&](double h) {
      return integrate_ball(perp, (R - delta + h) * th, 1.0, g, q.radial_nodes, q.angular_nodes);
    });
  });
  p.add("left_half_ball", false, 0.5 * wn * (1.0 - shrink_v),
        [&] { return integrate_ball(fr, cl, rho, g, q.radial_nodes, q.angular_nodes, kPi / 2, kPi); });
  p.add("right_hemisphere", true, 0.5 * n * wn,
        [&] { return integrate_sphere(fr, c, 1.0, g, q.angular_nodes, 0.0, kPi / 2); });
  p.add("cylinder_wall", true, (n - 1) * wn1 * delta, [&] {
    return line_integral(delta, q.sweep_nodes, [&](double h) {
      return integrate_sphere(perp, (R - delta + h) * th, 1.0, g, q.angular_nodes);
    });
  });
  // Flat annulus rho < r < 1 in the plane x.theta = R - delta.
  const double width = delta / R;
  p.add("annulus", true, wn1 * shrink_p, [&] {
    return line_integral(width, q.sweep_nodes,
                         [&](double h) { return integrate_sphere(perp, cl, 1.0 - h, g, q.angular_nodes); });
  });
  p.add("left_hemisphere", true, 0.5 * n * wn * (1.0 - shrink_p),
        [&] { return integrate_sphere(fr, cl, rho, g, q.angular_nodes, kPi / 2, kPi); });
  return p.out;
}

std::vector<Piece> pieces_for(const RotationSwept& s, int n, const std::function<double(const Vec&)>& g,
                              const MeasureBudget& q, PieceFilter filter) {
  const Vec& th = s.base.direction;
  const Vec& e = s.plane_dir;
  const double R = s.base.offset, delta = s.delta;
  const Frame fr = complete_frame(n, {th, e});
  const Frame eperp(fr.begin(), fr.end() - 1);  // ends with theta
  const Vec th2 = rotate(th, th, e, delta);
  const Vec e2 = rotate(e, th, e, delta);
  Frame fr2(fr.begin(), fr.end() - 2);
  fr2.push_back(th2);
  fr2.push_back(e2);
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  const Vec c = R * th;
  const Vec c2 = R * th2;
  Pieces p{filter, {}};
  p.add("lower_half_ball", false, 0.5 * wn,
        [&] { return integrate_ball(fr, c, 1.0, g, q.radial_nodes, q.angular_nodes, kPi / 2, kPi); });
  p.add("sweep", false, R * wn1 * delta, [&] {
    return line_integral(delta, q.sweep_nodes, [&](double phi) {
      return integrate_ball(
          eperp, c, 1.0, [&](const Vec& y) { return g(rotate(y, th, e, phi)) * dot(y, th); }, q.radial_nodes,
          q.angular_nodes);
    });
  });
  p.add("rotated_upper_half_ball", false, 0.5 * wn,
        [&] { return integrate_ball(fr2, c2, 1.0, g, q.radial_nodes, q.angular_nodes, 0.0, kPi / 2); });
  p.add("lower_hemisphere", true, 0.5 * n * wn,
        [&] { return integrate_sphere(fr, c, 1.0, g, q.angular_nodes, kPi / 2, kPi); });
  p.add("rotated_upper_hemisphere", true, 0.5 * n * wn,
        [&] { return integrate_sphere(fr2, c2, 1.0, g, q.angular_nodes, 0.0, kPi / 2); });
  p.add("sweep_wall", true, (n - 1) * wn1 * R * delta, [&] {
    return line_integral(delta, q.sweep_nodes, [&](double phi) {
      return integrate_sphere(
          eperp, c, 1.0, [&](const Vec& y) { return g(rotate(y, th, e, phi)) * dot(y, th); },
          q.angular_nodes);
    });
  });
  return p.out;
}

}  // namespace

EuclidExcess euclid_excess(const CompetitorSet& e) {
  const int n = e.dim;
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  return std::visit(
      [&](const auto& s) -> EuclidExcess {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlainBall>) {
          return {};
        } else if constexpr (std::is_same_v<T, CylinderExtended>) {
          const double R = s.base.offset;
          return {(n - 1) * wn1 * s.delta + (wn1 - 0.5 * n * wn) * one_minus_ratio_pow(s.delta, R, n - 1),
                  wn1 * s.delta - 0.5 * wn * one_minus_ratio_pow(s.delta, R, n)};
        } else {
          return {(n - 1) * wn1 * s.base.offset * s.delta, wn1 * s.base.offset * s.delta};
        }
      },
      e.shape);
}

std::vector<Piece> set_pieces(const CompetitorSet& e, const Density& d, const MeasureBudget& budget,
                              PieceFilter filter) {
  validate_set(e);
  const double sc = e.scale;
  std::function<double(const Vec&)> g;
  if (sc == 1.0) {
    g = [&d](const Vec& x) { return d.deficit(x); };
  } else {
    g = [&d, sc](const Vec& x) { return d.deficit(sc * x); };
  }
  return std::visit([&](const auto& s) { return pieces_for(s, e.dim, g, budget, filter); }, e.shape);
}

namespace {

SetMeasures assemble(const CompetitorSet& e, const Density& d, const std::vector<Piece>& pieces) {
  const int n = e.dim;
  const double sv = std::pow(e.scale, n), sp = std::pow(e.scale, n - 1);
  const double wn = unit_ball_volume(n);
  const EuclidExcess ex = euclid_excess(e);
  SetMeasures m;
  m.perimeter_excess = sp * ex.perimeter;
  m.volume_excess = sv * ex.volume;
  m.perimeter_euclid = sp * (n * wn + ex.perimeter);
  m.volume_euclid = sv * (wn + ex.volume);
  double pg = 0, vg = 0;
  for (const Piece& p : pieces) (p.boundary ? pg : vg) += p.deficit;
  m.perimeter_deficit.value = sp * pg;
  m.volume_deficit.value = sv * vg;
  m.perimeter.value = d.limit_a * m.perimeter_euclid - m.perimeter_deficit.value;
  m.volume.value = d.limit_a * m.volume_euclid - m.volume_deficit.value;
  m.pieces = pieces;
  return m;
}

}  // namespace

SetMeasures set_measures(const CompetitorSet& e, const Density& d, Method method,
                         const MeasureBudget& budget) {
  if (e.dim != d.dim) throw std::invalid_argument("set_measures: set and density dimensions differ");
  if (method == Method::monte_carlo) return monte_carlo_measures(e, d, budget);

  const auto fine = set_pieces(e, d, budget);
  // The error estimate compares against a coarser rule of the same family.
  MeasureBudget coarse = budget;
  coarse.radial_nodes = std::max(4, budget.radial_nodes * 2 / 3);
  coarse.angular_nodes = std::max(8, budget.angular_nodes * 2 / 3);
  coarse.sweep_nodes = std::max(2, budget.sweep_nodes * 2 / 3);
  SetMeasures m = assemble(e, d, fine);
  const SetMeasures c = assemble(e, d, set_pieces(e, d, coarse));
  auto fill = [&](MeasureResult& r, double coarse_value) {
    r.method = Method::quadrature;
    r.error_estimate = std::max(std::abs(r.value - coarse_value),
                                budget.quadrature_tol * std::max(1e-300, std::abs(r.value)));
    r.samples_or_nodes =
        budget.radial_nodes * static_cast<long long>(std::pow(budget.angular_nodes, e.dim - 1));
  };
  fill(m.perimeter_deficit, c.perimeter_deficit.value);
  fill(m.volume_deficit, c.volume_deficit.value);
  fill(m.perimeter, c.perimeter.value);
  fill(m.volume, c.volume.value);
  return m;
}

BallDeficit ball_deficit_quadrature(const Density& d, const Vec& center, const MeasureBudget& q) {
  const Frame fr = complete_frame(d.dim, {normalized(center)});
  auto g = [&d](const Vec& x) { return d.deficit(x); };
  return {integrate_sphere(fr, center, 1.0, g, q.angular_nodes),
          integrate_ball(fr, center, 1.0, g, q.radial_nodes, q.angular_nodes)};
}

std::pair<MeasureResult, MeasureResult> ball_deficit_measures(const RadialDeficit& g, int dim, double R,
                                                              const LayerKernelPair& kernels,
                                                              double rel_tol) {
  if (!(R > 1)) throw std::invalid_argument("ball_deficit_measures: R must exceed 1");
  if (kernels.dim != dim) throw std::invalid_argument("ball_deficit_measures: kernel dimension mismatch");
  if (kernels.kind == KernelKind::exact && std::abs(kernels.offset - R) > 1e-12 * R)
    throw std::invalid_argument("ball_deficit_measures: exact kernels built for a different R");
  if (g.support_hint && *g.support_hint <= R - 1.0) {
    MeasureResult zero;
    return {zero, zero};
  }
  const auto p =
      integrate_profile(g, R, [&](double u, double gv) { return kernels.phi_sub(u) * gv; }, rel_tol);
  const auto v =
      integrate_profile(g, R, [&](double u, double gv) { return kernels.psi_sub(u) * gv; }, rel_tol);
  MeasureResult pr{p.value, Method::quadrature, p.error, 31, std::nullopt};
  MeasureResult vr{v.value, Method::quadrature, v.error, 31, std::nullopt};
  return {pr, vr};
}

double mean_density(double perimeter, double volume, int dim) {
  if (!(volume > 0)) throw std::invalid_argument("mean_density: volume must be positive");
  if (perimeter < 0) throw std::invalid_argument("mean_density: perimeter must be nonnegative");
  return std::pow(perimeter / (dim * std::pow(volume, (dim - 1.0) / dim)), dim) / unit_ball_volume(dim);
}

double mean_density_minus_one(double p, double v, int dim) {
  // rho = (1 - p)^N / (1 + v)^{N-1}
  return std::expm1(dim * std::log1p(-p) - (dim - 1) * std::log1p(v));
}

double profile_upper_bound(double perimeter_e, double volume_e, double volume, double a, int dim) {
  if (volume < volume_e) throw std::invalid_argument("profile_upper_bound: V must be >= V_E");
  if (volume_e < 0) throw std::invalid_argument("profile_upper_bound: V_E must be >= 0");
  return perimeter_e + dim * std::pow(unit_ball_volume(dim) * a, 1.0 / dim) *
                           std::pow(volume - volume_e, (dim - 1.0) / dim);
}

}  // namespace isolab
