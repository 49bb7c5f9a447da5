#pragma once

// Unit balls B = B(R theta, 1) far from the origin on which the deficit g
// satisfies P_g(B) >= (N - eps) |B|_g.

#include <optional>
#include <vector>

#include "isolab/density.hpp"
#include "isolab/kernel_lemmas.hpp"
#include "isolab/measures.hpp"

namespace isolab {

struct DirectionSample {
  Vec theta;
  double weight = 0;     // quadrature weight on S^{N-1}, normalised to total 1
  double perimeter = 0;  // P_g(B_R^theta)
  double volume = 0;     // |B_R^theta|_g
  double margin = 0;
};

struct FarBallCertificate {
  bool found = false;
  double R = 0;
  std::optional<Vec> theta;
  double epsilon = 0.01;
  MeasureResult P_g;
  MeasureResult V_g;
  double margin = 0;        // P_g - (N - eps) V_g
  bool degenerate = false;  // V_g = 0 on the ball
  SignSearchOutcome search;
  int rescans = 0;                          // local exact-kernel re-scans after the asymptotic hit
  std::vector<DirectionSample> directions;  // select_direction only
  /// Grid means of P_g and V_g over the directions (select_direction only).
  double mean_perimeter = 0;
  double mean_volume = 0;
};

inline constexpr double kDefaultEpsilon = 0.01;

/// Radius search with the beta kernel on the asymptotic layers, then exact
/// kernels at the hit; if the exact margin is negative the radius is advanced
/// by step / 4 until it is not.
FarBallCertificate find_far_radius(const RadialDeficit& g, int dim, double eps, double R_min, double R_max,
                                   double step = 0.25);

/// Direction at fixed R: radial densities give e_1 directly, otherwise the
/// maximum-margin node of the sphere rule with node_count nodes per angle
/// (default 360 on the circle, 24 per angle for N >= 3). The grid is refined
/// (by 4 in the number of directions for N <= 3) up to twice if no node has
/// a nonnegative margin.
FarBallCertificate select_direction(const Density& d, double R, double eps, int node_count = 0,
                                    const MeasureBudget& budget = {});

}  // namespace isolab
