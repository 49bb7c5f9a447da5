#pragma once

// Sliding-kernel sign machinery: a kernel k on (-1, 1) with zero mean is
// slid along a radial deficit g, and we look for translates R with
// int k(t) g(R + t) dt >= 0.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "isolab/density.hpp"

namespace isolab {

enum class SlidingKind { alpha, beta };

struct SlidingKernel {
  SlidingKind kind = SlidingKind::alpha;
  std::optional<int> dim;                // set for the built-in beta kernel
  std::function<double(double)> values;  // k(t)
  /// u -> k(sin u) cos u, smooth even where k has endpoint singularities.
  std::function<double(double)> values_sub;
  /// A(sigma) = int_{-1}^sigma k
  std::function<double(double)> primitive;
  /// int_{-1}^sigma A
  std::function<double(double)> second_primitive;
};

/// beta = phi~ - N psi~ = w_{N-1} (1 - t^2)^{(N-3)/2} (N t^2 - 1), with
///   alpha(t) = int_{-1}^t beta = -w_{N-1} t (1 - t^2)^{(N-1)/2},
///   int_{-1}^sigma alpha = w_{N-1} (1 - sigma^2)^{(N+1)/2} / (N + 1).
SlidingKernel beta_kernel(int dim);

/// Kernel from a bounded function; primitives by adaptive quadrature.
SlidingKernel make_kernel(SlidingKind kind, std::function<double(double)> values);

/// For an alpha kernel the conditions are on k itself; for a beta kernel
/// they are on its primitive alpha = A, together with alpha(1) = 0.
struct AdmissibilityReport {
  double integral = 0;  // int_{-1}^1 alpha
  bool integral_zero = false;
  double min_partial = 0;  // min over the grid of int_{-1}^sigma alpha
  double min_partial_at = 0;
  bool partial_positive = false;
  std::optional<double> alpha_at_one;  // beta kind only
  std::optional<bool> alpha_one_zero;
  bool pass = false;
};

/// `grid`: sigma values in (-1, 1), kept 1e-6 away from the endpoints.
AdmissibilityReport check_admissibility(const SlidingKernel& k, const std::vector<double>& grid,
                                        double tol = 1e-10);

struct Correlation {
  double value = 0;     // int k(t) g(R + t) dt
  double absolute = 0;  // int |k(t)| |g(R + t)| dt
  double error = 0;
};

Correlation correlation(const SlidingKernel& k, const RadialDeficit& g, double R, double rel_tol = 1e-12);

struct SignSearchOutcome {
  bool found = false;
  double R = 0;
  double correlation = 0;
  std::vector<std::pair<double, double>> scan;  // (R, correlation)
  bool degenerate = false;
  /// correlation > 1e-12 int |k| |g|; the threshold is relative because far
  /// deficits are tiny (e^{-50} at R = 50).
  bool strict = false;
  /// Bisection estimate of the first sign change inside the last grid cell,
  /// when the hit is not the first grid point.
  std::optional<double> crossing;
};

inline constexpr double kStrictRelative = 1e-12;

/// First grid R with correlation >= 0 among the windows that meet the
/// deficit (int |k| |g| > 0). If no scanned window meets it the outcome is
/// degenerate.
SignSearchOutcome sliding_sign_search(const SlidingKernel& k, const RadialDeficit& g, double R_min,
                                      double R_max, double step = 0.25);

/// Both sides of
///   int_{R1}^{R2} corr(R) dR
///     = int g(s) A(s - R1) ds + int g(s) B(s - R2) ds,   B(sigma) = int_sigma^1 k,
/// valid for R2 >= R1 + 2 and int k = 0.
struct AveragingIdentity {
  double lhs = 0;
  double near_term = 0;
  double far_term = 0;
  double rhs() const { return near_term + far_term; }
};

AveragingIdentity averaging_identity(const SlidingKernel& k, const RadialDeficit& g, double R1, double R2,
                                     double rel_tol = 1e-12);

}  // namespace isolab
