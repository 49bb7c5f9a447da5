#include "isolab/far_ball.hpp"

#include <cmath>
#include <stdexcept>

#include "isolab/layer_geometry.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

namespace {

void check_eps(double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

}  // namespace

FarBallCertificate find_far_radius(const RadialDeficit& g, int dim, double eps, double R_min, double R_max,
                                   double step) {
  check_eps(eps);
  FarBallCertificate c;
  c.epsilon = eps;
  c.search = sliding_sign_search(beta_kernel(dim), g, R_min, R_max, step);
  if (!c.search.found) return c;
  c.found = true;
  c.R = c.search.R;
  if (c.search.degenerate) {
    c.degenerate = true;
    return c;
  }
  for (;;) {
    const auto [p, v] = ball_deficit_measures(g, dim, c.R, exact_kernels(dim, c.R));
    c.P_g = p;
    c.V_g = v;
    c.margin = p.value - (dim - eps) * v.value;
    if (c.margin >= 0 || c.R + 0.25 * step > R_max) break;
    c.R += 0.25 * step;
    ++c.rescans;
  }
  c.degenerate = c.V_g.value == 0;
  if (c.margin < 0) c.found = false;
  return c;
}

FarBallCertificate select_direction(const Density& d, double R, double eps, int node_count,
                                    const MeasureBudget& budget) {
  check_eps(eps);
  if (!(R > 1)) throw std::invalid_argument("select_direction: R must exceed 1");
  const int n = d.dim;
  FarBallCertificate c;
  c.epsilon = eps;
  c.R = R;
  if (d.radial) {
    const auto [p, v] = ball_deficit_measures(deficit_profile(d), n, R, exact_kernels(n, R));
    c.theta = Vec::unit(n, 0);
    c.P_g = p;
    c.V_g = v;
    c.margin = p.value - (n - eps) * v.value;
    c.mean_perimeter = p.value;
    c.mean_volume = v.value;
    c.directions.push_back({*c.theta, 1.0, p.value, v.value, c.margin});
    c.degenerate = v.value == 0;
    c.found = c.margin >= 0;
    return c;
  }
  if (node_count <= 0) node_count = n == 2 ? 360 : 24;
  Frame frame;
  for (int i = 0; i < n; ++i) frame.push_back(Vec::unit(n, i));
  for (int round = 0; round < 3; ++round) {
    const auto rule = sphere_rule(frame, node_count);
    double total = 0;
    for (const auto& node : rule) total += node.weight;
    c.directions.clear();
    c.mean_perimeter = c.mean_volume = 0;
    std::size_t best = 0;
    bool all_zero = true;
    for (const auto& node : rule) {
      const BallDeficit b = ball_deficit_quadrature(d, R * node.point, budget);
      DirectionSample s{node.point, node.weight / total, b.perimeter, b.volume,
                        b.perimeter - (n - eps) * b.volume};
      if (b.perimeter != 0 || b.volume != 0) all_zero = false;
      c.mean_perimeter += s.weight * s.perimeter;
      c.mean_volume += s.weight * s.volume;
      c.directions.push_back(s);
      if (s.margin > c.directions[best].margin) best = c.directions.size() - 1;
    }
    const DirectionSample& s = c.directions[best];
    c.theta = s.theta;
    c.P_g = {s.perimeter, Method::quadrature, budget.quadrature_tol * std::abs(s.perimeter),
             budget.radial_nodes * static_cast<long long>(std::pow(budget.angular_nodes, n - 1)),
             std::nullopt};
    c.V_g = {s.volume, Method::quadrature, budget.quadrature_tol * std::abs(s.volume), c.P_g.samples_or_nodes,
             std::nullopt};
    c.margin = s.margin;
    c.degenerate = all_zero;
    c.found = c.margin >= 0;
    if (c.found) break;
    node_count *= n == 2 ? 4 : 2;
  }
  return c;
}

}  // namespace isolab
