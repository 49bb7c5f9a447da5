#pragma once

// Competitors of f-volume a w_N and mean density at most 1 built from a far
// ball: the cylinder extension (densities monotone along rays), the
// rotation sweep (radial densities), and for general densities the sweep
// between theta and tau(theta) on a selected great circle.

#include <optional>
#include <string>
#include <vector>

#include "isolab/density.hpp"
#include "isolab/far_ball.hpp"
#include "isolab/measures.hpp"

namespace isolab {

enum class Variant { cylinder, rotation };

struct VolumeMatch {
  double delta_bar = 0;
  /// V_f(E_delta_bar); its distance to a w_N is volume_error, computed
  /// without cancellation.
  double achieved_volume = 0;
  double volume_error = 0;
  int iterations = 0;
  bool converged = false;
  bool bound_ok = false;
  double bound = 0;         // the a-priori bound on delta_bar
  double ball_deficit = 0;  // |B|_g
  std::string status;       // "ok", "degenerate", "delta_max_insufficient", "bracket_collapsed"
};

struct MatchOptions {
  double eps = kDefaultEpsilon;
  std::optional<double> delta_max;
  double rel_tol = 1e-8;
  /// Bound family: (1 + 2 eps) for the plain variants, (1 + 3 eps) under the tau map.
  double bound_factor = 0;  // 0: 1 + 2 eps
  MeasureBudget budget;
};

/// Solves a V_excess(delta) = V_g(E_delta), i.e. V_f(E_delta) = a w_N, by
/// bracketed regula falsi (Illinois variant) on [0, delta_max].
VolumeMatch volume_match(Variant variant, const PlainBall& base, const Vec& plane_dir, const Density& d,
                         const MatchOptions& opt = {});

/// A named inequality lhs <= rhs.
struct Check {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

Check make_check(std::string name, double lhs, double rhs);

struct Competitor {
  CompetitorSet set;
  VolumeMatch match;
  SetMeasures measures;
  /// N w_N a - P_f and V_f - w_N a in cancellation-free form.
  double perimeter_gap = 0;
  double volume_error = 0;
  double rho_minus_one = 0;
  std::vector<Check> checks;
  bool ok = false;
};

Competitor build_step1(const FarBallCertificate& cert, const Density& d, const MatchOptions& opt = {});
Competitor build_step2(const FarBallCertificate& cert, const Density& d, const MatchOptions& opt = {});

/// Oriented great circle theta(psi) = cos psi c0 + sin psi c1.
struct Circle {
  Vec c0, c1;
  double averaged_margin = 0;
  std::vector<double> level_margins;  // best averaged margin at each descent level
};

struct TauMap {
  std::vector<double> psi;  // grid angles on the circle
  std::vector<double> delta_bar;
  std::vector<double> tau;          // psi + delta_bar
  std::vector<double> ball_volume;  // |B^theta|_g
  std::vector<bool> bound_ok;
  double lipschitz_lo = 0;
  double lipschitz_hi = 0;
  bool increasing = false;
  bool in_band = false;
  int refinements = 0;
};

/// Per-theta volume matching of the swept family on `circle`; the grid has
/// `points` nodes and is refined by 4 (twice at most) if the measured
/// difference quotients leave [1 - eps - 1e-3, 1 / (1 - eps) + 1e-3].
TauMap tau_map(const Density& d, double R, const Circle& circle, int points, const MatchOptions& opt = {});

struct DirectionChoice {
  bool found = false;
  std::size_t index = 0;
  double psi = 0;
  std::vector<double> lhs;  // H_g(upper hemisphere at tau) + H_g(lower hemisphere at theta)
  std::vector<double> rhs;  // (1 - eps)(N - eps) |B^theta|_g
  Competitor competitor;
};

DirectionChoice select_competitor_direction(const Density& d, double R, const Circle& circle,
                                            const TauMap& tau, const MatchOptions& opt = {});

Circle select_circle(const Density& d, double R, double eps, const MeasureBudget& budget = {});

struct CompetitorOptions {
  double eps = 0.05;
  double R_min = 50;
  double R_max = 200;
  int tau_points = 720;
  MeasureBudget budget;
  bool monte_carlo_check = true;
  std::optional<double> target_volume;  // default a w_N
};

/// Full pipeline; outcome "certified", "degenerate" or "failed".
struct CompetitorRun {
  std::string outcome;
  std::string path;  // "step1", "step2", "step3", "plain_ball"
  double lambda = 1;
  FarBallCertificate far_ball;
  std::optional<Circle> circle;
  std::optional<TauMap> tau;
  std::optional<DirectionChoice> direction;
  std::optional<Competitor> step1;
  Competitor result;
  std::optional<SetMeasures> mc;
  std::vector<Check> mc_checks;
  std::vector<std::string> notes;
};

CompetitorRun run_competitor(const Density& d, const CompetitorOptions& opt = {});

}  // namespace isolab
