#include "isolab/competitor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isolab/layer_geometry.hpp"
#include "isolab/monte_carlo.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

namespace {

constexpr double kPi = std::numbers::pi;

CompetitorSet make_set(Variant v, const PlainBall& base, const Vec& plane, double delta) {
  if (v == Variant::cylinder) return make_cylinder_extended(base.direction, base.offset, delta);
  return make_rotation_swept(base.direction, base.offset, delta, plane);
}

double sum_deficit(const std::vector<Piece>& pieces, bool boundary) {
  double s = 0;
  for (const Piece& p : pieces)
    if (p.boundary == boundary) s += p.deficit;
  return s;
}

double piece_deficit(const std::vector<Piece>& pieces, const std::string& name) {
  for (const Piece& p : pieces)
    if (p.name == name) return p.deficit;
  throw std::logic_error("missing piece " + name);
}

Check strict_check(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs < rhs};
}

Vec circle_point(const Circle& c, double psi) { return std::cos(psi) * c.c0 + std::sin(psi) * c.c1; }
Vec circle_normal(const Circle& c, double psi) { return -std::sin(psi) * c.c0 + std::cos(psi) * c.c1; }

}  // namespace

Check make_check(std::string name, double lhs, double rhs) { return {std::move(name), lhs, rhs, lhs <= rhs}; }

VolumeMatch volume_match(Variant variant, const PlainBall& base, const Vec& plane_dir, const Density& d,
                         const MatchOptions& opt) {
  const int n = d.dim;
  const double a = d.limit_a;
  const double wn1 = unit_ball_volume(n - 1);
  const double R = base.offset;
  const double factor = opt.bound_factor > 0 ? opt.bound_factor : 1.0 + 2.0 * opt.eps;
  VolumeMatch m;
  const CompetitorSet ball = make_set(variant, base, plane_dir, 0.0);
  m.ball_deficit = sum_deficit(set_pieces(ball, d, opt.budget, PieceFilter::volume), false);
  const double reach = variant == Variant::cylinder ? 1.0 : R - 1.0;
  m.bound = factor * m.ball_deficit / (wn1 * reach);
  m.achieved_volume = a * unit_ball_volume(n) - m.ball_deficit;
  if (m.ball_deficit == 0) {
    m.status = "degenerate";
    m.converged = m.bound_ok = true;
    m.achieved_volume = a * unit_ball_volume(n);
    return m;
  }
  auto F = [&](double delta) {
    const CompetitorSet e = make_set(variant, base, plane_dir, delta);
    return a * euclid_excess(e).volume -
           sum_deficit(set_pieces(e, d, opt.budget, PieceFilter::volume), false);
  };
  double hi = opt.delta_max.value_or(4.0 * (1.0 + 2.0 * opt.eps) * m.ball_deficit /
                                     (wn1 * (variant == Variant::cylinder ? 1.0 : std::max(1.0, R - 1.0))));
  hi = std::min(hi, variant == Variant::cylinder ? R * (1 - 1e-12) : kPi / 2);
  double lo = 0, flo = -m.ball_deficit, fhi = F(hi);
  const double tol = opt.rel_tol * m.ball_deficit;
  if (fhi < 0) {
    m.delta_bar = hi;
    m.volume_error = fhi;
    m.achieved_volume = a * unit_ball_volume(n) + fhi;
    m.status = "delta_max_insufficient";
    m.bound_ok = hi <= m.bound;
    return m;
  }
  double x = hi, fx = fhi;
  int side = 0;
  for (m.iterations = 1; m.iterations < 200; ++m.iterations) {
    x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    fx = F(x);
    if (std::abs(fx) <= tol) {
      m.converged = true;
      break;
    }
    if (fx < 0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  m.delta_bar = x;
  m.volume_error = fx;
  m.achieved_volume = a * unit_ball_volume(n) + fx;
  m.status = m.converged ? "ok" : "bracket_collapsed";
  m.bound_ok = m.delta_bar <= m.bound;
  return m;
}

namespace {

// Measures and the checks shared by every construction.
Competitor finish(CompetitorSet set, VolumeMatch match, const Density& d, const MatchOptions& opt) {
  const int n = d.dim;
  const double a = d.limit_a;
  const double wn = unit_ball_volume(n);
  Competitor c;
  c.set = std::move(set);
  c.match = std::move(match);
  c.measures = set_measures(c.set, d, Method::quadrature, opt.budget);
  c.perimeter_gap = c.measures.perimeter_deficit.value - a * c.measures.perimeter_excess;
  c.volume_error = a * c.measures.volume_excess - c.measures.volume_deficit.value;
  c.rho_minus_one = mean_density_minus_one(c.perimeter_gap / (a * n * wn), c.volume_error / (a * wn), n);
  c.checks.push_back(make_check("volume_absolute", std::abs(c.volume_error), 1e-8 * a * wn));
  if (c.match.ball_deficit > 0)
    c.checks.push_back(make_check("volume_relative", std::abs(c.volume_error), 1e-7 * c.match.ball_deficit));
  c.checks.push_back(make_check("mean_density", c.rho_minus_one, 1e-9));
  c.checks.push_back(make_check("perimeter_at_most_ball", -c.perimeter_gap, 1e-9));
  if (c.measures.perimeter_deficit.value > 0 || c.measures.volume_deficit.value > 0)
    c.checks.push_back(strict_check("perimeter_strict", -c.perimeter_gap, 0.0));
  return c;
}

void settle(Competitor& c) {
  c.ok = c.match.status == "ok" || c.match.status == "degenerate";
  for (const Check& k : c.checks) c.ok = c.ok && k.pass;
}

Vec certificate_direction(const FarBallCertificate& cert, int n) {
  return cert.theta ? *cert.theta : Vec::unit(n, 0);
}

}  // namespace

Competitor build_step1(const FarBallCertificate& cert, const Density& d, const MatchOptions& opt) {
  const int n = d.dim;
  const double a = d.limit_a;
  const PlainBall base{certificate_direction(cert, n), cert.R};
  if (!is_ray_monotone(d)) {
    Competitor c;
    c.set = make_plain_ball(base.direction, base.offset);
    c.checks.push_back({"ray_monotone", 1, 0, false});
    return c;
  }
  VolumeMatch m = volume_match(Variant::cylinder, base, base.direction, d, opt);
  const double delta = m.delta_bar;
  Competitor c = finish(make_cylinder_extended(base.direction, base.offset, delta), m, d, opt);
  c.checks.push_back(make_check("delta_bound_step1", c.match.delta_bar, c.match.bound));

  const CompetitorSet ball = make_cylinder_extended(base.direction, base.offset, 0.0);
  const auto ball_bd = set_pieces(ball, d, opt.budget, PieceFilter::boundary);
  const auto e_bd = set_pieces(c.set, d, opt.budget, PieceFilter::boundary);
  const double pb_g = sum_deficit(ball_bd, true);
  const double wn1 = unit_ball_volume(n - 1), wn = unit_ball_volume(n);
  // P_f(E) - P_f(B) = a P_excess - (P_g(E) - P_g(B))
  c.checks.push_back(make_check("perimeter_chain_step1",
                                a * c.measures.perimeter_excess - (c.measures.perimeter_deficit.value - pb_g),
                                (n - 1 + opt.eps) * wn1 * delta));
  // H_f of the shrunk left hemisphere against the original one.
  const double shrink = -std::expm1((n - 1) * std::log1p(-delta / base.offset));
  const double lhs = -a * 0.5 * n * wn * shrink - piece_deficit(e_bd, "left_hemisphere") +
                     piece_deficit(ball_bd, "left_hemisphere");
  c.checks.push_back(make_check("shrink_monotone", lhs, 0.0));
  // Pointwise: f(rho y) <= f(y) on the left hemisphere nodes.
  const double rho = (base.offset - delta) / base.offset;
  const Frame fr = complete_frame(n, {base.direction});
  double worst = 0, scale = 0;
  for (const SphereNode& node : sphere_rule(fr, opt.budget.angular_nodes)) {
    if (dot(node.point, base.direction) > 0) continue;
    const Vec y = base.offset * base.direction + node.point;
    const double gy = d.deficit(y);
    worst = std::max(worst, gy - d.deficit(rho * y));
    scale = std::max(scale, std::abs(gy));
  }
  c.checks.push_back(make_check("shrink_monotone_pointwise", worst, 1e-12 * scale));
  settle(c);
  return c;
}

Competitor build_step2(const FarBallCertificate& cert, const Density& d, const MatchOptions& opt) {
  const int n = d.dim;
  const double a = d.limit_a;
  const PlainBall base{certificate_direction(cert, n), cert.R};
  const Vec plane = complete_frame(n, {base.direction}).front();
  if (!d.radial) {
    Competitor c;
    c.set = make_plain_ball(base.direction, base.offset);
    c.checks.push_back({"radial", 1, 0, false});
    return c;
  }
  VolumeMatch m = volume_match(Variant::rotation, base, plane, d, opt);
  const double delta = m.delta_bar;
  Competitor c = finish(make_rotation_swept(base.direction, base.offset, delta, plane), m, d, opt);
  c.checks.push_back(make_check("delta_bound_step2", c.match.delta_bar, c.match.bound));
  const CompetitorSet ball = make_rotation_swept(base.direction, base.offset, 0.0, plane);
  const auto ball_bd = set_pieces(ball, d, opt.budget, PieceFilter::boundary);
  const auto e_bd = set_pieces(c.set, d, opt.budget, PieceFilter::boundary);
  const double up_b = piece_deficit(ball_bd, "rotated_upper_hemisphere");
  const double up_e = piece_deficit(e_bd, "rotated_upper_hemisphere");
  c.checks.push_back(make_check("rotated_boundary_identity", std::abs(up_e - up_b),
                                1e-10 * std::max(std::abs(up_b), 1e-300)));
  const double wn1 = unit_ball_volume(n - 1);
  c.checks.push_back(make_check(
      "perimeter_chain_step2",
      a * c.measures.perimeter_excess - (c.measures.perimeter_deficit.value - sum_deficit(ball_bd, true)),
      (n - 1) * wn1 * (base.offset + 1.0) * delta));
  settle(c);
  return c;
}

TauMap tau_map(const Density& d, double R, const Circle& circle, int points, const MatchOptions& opt) {
  if (points < 4) throw std::invalid_argument("tau_map: need at least 4 grid points");
  MatchOptions o = opt;
  if (o.bound_factor <= 0) o.bound_factor = 1.0 + 3.0 * opt.eps;
  if (d.dim >= 3) {
    // The chosen direction is re-matched at the full budget afterwards.
    o.budget.radial_nodes = std::min(o.budget.radial_nodes, 12);
    o.budget.angular_nodes = std::min(o.budget.angular_nodes, 16);
    o.budget.sweep_nodes = std::min(o.budget.sweep_nodes, 4);
  }
  const double band_lo = 1.0 - opt.eps - 1e-3, band_hi = 1.0 / (1.0 - opt.eps) + 1e-3;
  TauMap t;
  for (int round = 0; round < 3; ++round) {
    t.psi.assign(points, 0);
    t.delta_bar.assign(points, 0);
    t.tau.assign(points, 0);
    t.ball_volume.assign(points, 0);
    t.bound_ok.assign(points, false);
    const double eta = 2.0 * kPi / points;
    for (int j = 0; j < points; ++j) {
      const double psi = eta * j;
      const VolumeMatch m = volume_match(Variant::rotation, PlainBall{circle_point(circle, psi), R},
                                         circle_normal(circle, psi), d, o);
      t.psi[j] = psi;
      t.delta_bar[j] = m.delta_bar;
      t.tau[j] = psi + m.delta_bar;
      t.ball_volume[j] = m.ball_deficit;
      t.bound_ok[j] = m.bound_ok && (m.status == "ok" || m.status == "degenerate");
    }
    t.lipschitz_lo = std::numeric_limits<double>::infinity();
    t.lipschitz_hi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < points; ++j) {
      const double next = t.delta_bar[(j + 1) % points];
      // (tau(psi + eta) - tau(psi)) / eta without the cancellation in psi.
      const double q = 1.0 + (next - t.delta_bar[j]) / eta;
      t.lipschitz_lo = std::min(t.lipschitz_lo, q);
      t.lipschitz_hi = std::max(t.lipschitz_hi, q);
    }
    t.increasing = t.lipschitz_lo > 0;
    t.in_band = t.lipschitz_lo >= band_lo && t.lipschitz_hi <= band_hi;
    if (t.in_band) break;
    if (round < 2) {
      points *= 4;
      ++t.refinements;
    }
  }
  return t;
}

namespace {

double hemisphere_deficit(const Density& d, const Vec& theta, const Vec& e, double R, bool upper,
                          const MeasureBudget& q) {
  const Frame fr = complete_frame(d.dim, {theta, e});
  auto g = [&d](const Vec& x) { return d.deficit(x); };
  return upper ? integrate_sphere(fr, R * theta, 1.0, g, q.angular_nodes, 0.0, kPi / 2)
               : integrate_sphere(fr, R * theta, 1.0, g, q.angular_nodes, kPi / 2, kPi);
}

}  // namespace

DirectionChoice select_competitor_direction(const Density& d, double R, const Circle& circle,
                                            const TauMap& tau, const MatchOptions& opt) {
  const int n = d.dim;
  const double a = d.limit_a;
  const double eps = opt.eps;
  DirectionChoice ch;
  for (std::size_t j = 0; j < tau.psi.size(); ++j) {
    const double t = tau.tau[j];
    const double lhs =
        hemisphere_deficit(d, circle_point(circle, t), circle_normal(circle, t), R, true, opt.budget) +
        hemisphere_deficit(d, circle_point(circle, tau.psi[j]), circle_normal(circle, tau.psi[j]), R, false,
                           opt.budget);
    ch.lhs.push_back(lhs);
    ch.rhs.push_back((1.0 - eps) * (n - eps) * tau.ball_volume[j]);
    if (lhs >= ch.rhs.back()) {
      ch.found = true;
      ch.index = j;
      break;
    }
  }
  if (!ch.found) return ch;
  ch.psi = tau.psi[ch.index];
  const Vec theta = circle_point(circle, ch.psi), e = circle_normal(circle, ch.psi);
  MatchOptions o = opt;
  if (o.bound_factor <= 0) o.bound_factor = 1.0 + 3.0 * eps;
  // Re-match at the chosen theta so the certificate does not rest on the grid.
  VolumeMatch m = volume_match(Variant::rotation, PlainBall{theta, R}, e, d, o);
  const double delta = m.delta_bar;
  Competitor c = finish(make_rotation_swept(theta, R, delta, e), m, d, o);
  const double wn1 = unit_ball_volume(n - 1);
  c.checks.push_back(make_check("delta_bound_step3", delta, c.match.bound));
  const double h = hemisphere_deficit(d, rotate_in_plane(theta, theta, e, delta),
                                      rotate_in_plane(e, theta, e, delta), R, true, opt.budget) +
                   hemisphere_deficit(d, theta, e, R, false, opt.budget);
  c.checks.push_back(make_check("hemisphere_inequality", (1.0 - eps) * (n - eps) * m.ball_deficit, h));
  const double wall = a * (n - 1) * wn1 * (R + 1.0) * delta;
  c.checks.push_back(make_check("perimeter_chain_step3", -c.perimeter_gap, wall - h));
  if (m.ball_deficit > 0) c.checks.push_back(strict_check("perimeter_chain_negative", wall, h));
  settle(c);
  ch.competitor = std::move(c);
  return ch;
}

namespace {

// Orthonormal basis of span(basis) intersected with axis^perp.
std::vector<Vec> orthogonal_slice(const std::vector<Vec>& basis, const Vec& axis) {
  std::vector<Vec> out;
  std::vector<std::pair<double, Vec>> cand;
  for (const Vec& b : basis) {
    Vec v = b;
    axpy(-dot(v, axis), axis, v);
    cand.emplace_back(norm(v), v);
  }
  std::stable_sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (auto& [nrm, v] : cand) {
    for (const Vec& u : out) axpy(-dot(v, u), u, v);
    const double l = norm(v);
    if (l > 1e-8 && out.size() + 1 < basis.size()) out.push_back((1.0 / l) * v);
  }
  return out;
}

double averaged_margin(const Density& d, double R, double eps, const std::vector<Vec>& basis, int nodes,
                       const MeasureBudget& q) {
  double total = 0, s = 0;
  for (const SphereNode& node : sphere_rule(basis, nodes)) {
    const BallDeficit b = ball_deficit_quadrature(d, R * node.point, q);
    s += node.weight * (b.perimeter - (d.dim - eps) * b.volume);
    total += node.weight;
  }
  return s / total;
}

}  // namespace

Circle select_circle(const Density& d, double R, double eps, const MeasureBudget& budget) {
  const int n = d.dim;
  Circle c{Vec::unit(n, 0), Vec::unit(n, 1), 0, {}};
  if (n == 2 || d.radial) {
    if (d.radial) {
      auto [p, v] = ball_deficit_measures(deficit_profile(d), n, R, exact_kernels(n, R));
      c.averaged_margin = p.value - (n - eps) * v.value;
    } else {
      c.averaged_margin = averaged_margin(d, R, eps, {c.c0, c.c1}, 360, budget);
    }
    return c;
  }
  MeasureBudget q = budget;
  q.radial_nodes = std::min(budget.radial_nodes, n == 3 ? 12 : 8);
  q.angular_nodes = std::min(budget.angular_nodes, n == 3 ? 16 : 8);
  std::vector<Vec> basis;
  for (int i = 0; i < n; ++i) basis.push_back(Vec::unit(n, i));
  while (basis.size() > 2) {
    const int m = static_cast<int>(basis.size());
    const int axis_nodes = m == 3 ? 12 : 6;
    const int sub_nodes = m == 3 ? 48 : 8;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<Vec> best_slice;
    for (const SphereNode& axis : sphere_rule(basis, axis_nodes)) {
      // a and -a cut the same subsphere.
      if (dot(axis.point, basis.back()) < -1e-12) continue;
      const auto slice = orthogonal_slice(basis, axis.point);
      const double v = averaged_margin(d, R, eps, slice, sub_nodes, q);
      if (v > best) {
        best = v;
        best_slice = slice;
      }
    }
    basis = best_slice;
    c.level_margins.push_back(best);
  }
  c.c0 = basis[0];
  c.c1 = basis[1];
  c.averaged_margin = c.level_margins.back();
  return c;
}

CompetitorRun run_competitor(const Density& d0, const CompetitorOptions& opt) {
  CompetitorRun run;
  const int n = d0.dim;
  const ConvergenceReport conv = validate_convergence(d0);
  if (!conv.pass) {
    run.outcome = "failed";
    run.notes.push_back("density exceeds its limit or fails to approach it on the probe set");
    return run;
  }
  const Rescaled rs = rescale(d0, opt.target_volume.value_or(d0.limit_a * unit_ball_volume(n)));
  const Density& d = rs.density;
  run.lambda = rs.lambda;
  MatchOptions mo;
  mo.eps = opt.eps;
  mo.budget = opt.budget;

  run.far_ball = find_far_radius(deficit_profile(d), n, opt.eps, opt.R_min, opt.R_max);
  if (!run.far_ball.found) {
    run.outcome = "failed";
    run.notes.push_back("no qualifying far ball in [R_min, R_max]");
    return run;
  }
  const double R = run.far_ball.R;
  if (run.far_ball.degenerate) {
    run.outcome = "degenerate";
    run.path = "plain_ball";
    VolumeMatch m;
    m.status = "degenerate";
    m.converged = m.bound_ok = true;
    m.achieved_volume = d.limit_a * unit_ball_volume(n);
    run.result = finish(make_plain_ball(Vec::unit(n, 0), R), m, d, mo);
    settle(run.result);
    return run;
  }

  const FarBallCertificate dir = select_direction(d, R, opt.eps);
  run.far_ball.theta = dir.theta;
  run.far_ball.directions = dir.directions;
  run.far_ball.mean_perimeter = dir.mean_perimeter;
  run.far_ball.mean_volume = dir.mean_volume;
  if (d.radial) {
    if (is_ray_monotone(d)) run.step1 = build_step1(dir, d, mo);
    run.result = build_step2(dir, d, mo);
    run.path = "step2";
  } else {
    run.circle = select_circle(d, R, opt.eps, opt.budget);
    int points = opt.tau_points;
    for (int round = 0; round < 3; ++round) {
      run.tau = tau_map(d, R, *run.circle, points, mo);
      run.direction = select_competitor_direction(d, R, *run.circle, *run.tau, mo);
      if (run.direction->found) break;
      points *= 4;
    }
    run.path = "step3";
    if (!run.direction->found) {
      run.outcome = "failed";
      run.notes.push_back("no theta on the refined grid satisfies the hemisphere inequality");
      return run;
    }
    run.result = run.direction->competitor;
  }

  bool ok = run.result.ok;
  if (opt.monte_carlo_check) {
    const SetMeasures mc = monte_carlo_measures(run.result.set, d, opt.budget);
    const double a = d.limit_a, wn = unit_ball_volume(n);
    run.mc_checks.push_back(
        make_check("mc_volume", std::abs(mc.volume.value - a * wn), 3.0 * mc.volume.error_estimate));
    run.mc_checks.push_back(
        make_check("mc_volume_deficit", std::abs(a * mc.volume_excess - mc.volume_deficit.value),
                   3.0 * mc.volume_deficit.error_estimate + 1e-7 * mc.volume_deficit.value));
    run.mc_checks.push_back(
        make_check("mc_perimeter", mc.perimeter.value - a * n * wn, 3.0 * mc.perimeter.error_estimate));
    run.mc_checks.push_back(make_check("mc_perimeter_deficit",
                                       a * mc.perimeter_excess - mc.perimeter_deficit.value,
                                       3.0 * mc.perimeter_deficit.error_estimate));
    for (const Check& k : run.mc_checks) ok = ok && k.pass;
    run.mc = mc;
  }
  run.outcome = ok ? "certified" : "failed";
  return run;
}

}  // namespace isolab
