#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "isolab/density.hpp"
#include "isolab/layer_geometry.hpp"
#include "isolab/vec.hpp"

namespace isolab {

enum class Method { quadrature, monte_carlo };

const char* to_string(Method m);

/// error_estimate: one standard error for Monte-Carlo, an absolute
/// quadrature error bound otherwise.
struct MeasureResult {
  double value = 0;
  Method method = Method::quadrature;
  double error_estimate = 0;
  long long samples_or_nodes = 0;
  std::optional<std::uint64_t> seed;
};

/// Unit ball centred at offset * direction.
struct PlainBall {
  Vec direction;
  double offset = 0;
};

/// B_r  U  C_delta  U  B_{l,delta}: the half of the ball beyond the centre
/// (x.theta > R) is kept, the near half is replaced by its homothetic copy of
/// ratio (R - delta)/R about the origin, and the gap is bridged by a cylinder
/// of radius 1 and height delta.
struct CylinderExtended {
  PlainBall base;
  double delta = 0;
};

/// B^-  U  (union over 0 < sigma < delta of rho_sigma B^+), where B^+- are the
/// halves of the ball on either side of the hyperplane through the origin and
/// the centre with normal `plane_dir`, and rho_sigma rotates direction towards
/// plane_dir by sigma. Equivalently B^- U W_delta U rho_delta B^+ with W_delta
/// the region swept by the diametral disk.
struct RotationSwept {
  PlainBall base;
  double delta = 0;
  Vec plane_dir;  // unit, orthogonal to base.direction
};

struct CompetitorSet {
  std::variant<PlainBall, CylinderExtended, RotationSwept> shape;
  int dim = 2;
  /// Homothety about the origin applied to the whole set (1 for every set
  /// the constructions build; used to map sets through rescale()).
  double scale = 1.0;
};

CompetitorSet make_plain_ball(const Vec& direction, double offset);
CompetitorSet make_cylinder_extended(const Vec& direction, double offset, double delta);
CompetitorSet make_rotation_swept(const Vec& direction, double offset, double delta, const Vec& plane_dir);

/// Throws std::invalid_argument on an invalid parametrisation
/// (offset <= 1, delta out of range, non-orthonormal directions).
void validate_set(const CompetitorSet& e);

std::string variant_name(const CompetitorSet& e);

/// P_eucl - N w_N and V_eucl - w_N of the unscaled set, in closed form.
struct EuclidExcess {
  double perimeter = 0;
  double volume = 0;
};
EuclidExcess euclid_excess(const CompetitorSet& e);

/// One smooth piece of the set (volume part or boundary patch) with its
/// Euclidean measure and the integral of the deficit a - f over it.
struct Piece {
  std::string name;
  bool boundary = false;
  double euclid = 0;
  double deficit = 0;
};

struct MeasureBudget {
  int radial_nodes = 24;
  int angular_nodes = 48;
  int sweep_nodes = 8;
  long long samples = 1'000'000;
  std::uint64_t seed = 1;
  double quadrature_tol = 1e-10;
};

/// Weighted measures of a set. Everything is assembled as
///   P_f = a P_eucl - P_g,   V_f = a V_eucl - V_g
/// with P_g, V_g integrals of the deficit, so the small far-field deficits
/// stay resolvable even when P_f rounds to a P_eucl.
struct SetMeasures {
  MeasureResult perimeter;          // P_f
  MeasureResult volume;             // V_f
  MeasureResult perimeter_deficit;  // P_g
  MeasureResult volume_deficit;     // V_g
  double perimeter_euclid = 0;
  double volume_euclid = 0;
  /// P_eucl - N w_N scale^{N-1} and V_eucl - w_N scale^N, cancellation free.
  double perimeter_excess = 0;
  double volume_excess = 0;
  std::vector<Piece> pieces;  // quadrature route only
};

SetMeasures set_measures(const CompetitorSet& e, const Density& d, Method method,
                         const MeasureBudget& budget = {});

enum class PieceFilter { all, volume, boundary };

/// Quadrature measures of the individual pieces (unscaled geometry).
std::vector<Piece> set_pieces(const CompetitorSet& e, const Density& d, const MeasureBudget& budget,
                              PieceFilter filter = PieceFilter::all);

/// Deficit integrals over a unit ball's boundary and interior; cheaper than
/// set_measures for plain balls.
struct BallDeficit {
  double perimeter = 0;
  double volume = 0;
};
BallDeficit ball_deficit_quadrature(const Density& d, const Vec& center, const MeasureBudget& budget);

/// P_g = int phi(t) g(R+t) dt, V_g = int psi(t) g(R+t) dt.
std::pair<MeasureResult, MeasureResult> ball_deficit_measures(const RadialDeficit& g, int dim, double R,
                                                              const LayerKernelPair& kernels,
                                                              double rel_tol = 1e-12);

/// rho with P = N (w_N rho)^{1/N} V^{(N-1)/N}.
double mean_density(double perimeter, double volume, int dim);

/// rho - 1 for P = N w_N (1 - p) and V = w_N (1 + v), without cancellation.
double mean_density_minus_one(double p, double v, int dim);

/// P_E + N (w_N a)^{1/N} (V - V_E)^{(N-1)/N}.
double profile_upper_bound(double perimeter_e, double volume_e, double volume, double a, int dim);

}  // namespace isolab
