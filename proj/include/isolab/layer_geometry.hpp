#pragma once

// Geometry of the unit ball centred at distance R from the origin, sliced by
// the concentric spheres |x| = R + t, t in (-1, 1).
//
//   psi_R(t)  (N-1)-measure of the slice {|x| = R + t} inside the ball
//   phi_R(t)  density in t of the ball's boundary measure (co-area of |x|)
//
// so that for a radial weight g, P_g(B) = int phi_R(t) g(R+t) dt and
// |B|_g = int psi_R(t) g(R+t) dt. As R -> infinity the layers flatten and the
// kernels tend to phi~(t) = (N-1) w_{N-1} (1-t^2)^{(N-3)/2} and
// psi~(t) = w_{N-1} (1-t^2)^{(N-1)/2}.

#include <functional>
#include <vector>

namespace isolab {

/// Half-angle of the spherical cap {|x| = s} inside the unit ball centred at
/// distance R, with the trigonometric values carried in cancellation-free
/// form (both tangencies drive gamma -> 0).
struct CapAngle {
  double gamma = 0;
  double cos_gamma = 1;
  double one_minus_cos = 0;
  double sin_gamma = 0;
};

/// cos gamma = (s^2 + R^2 - 1) / (2 s R). Throws std::domain_error when the
/// sphere misses the ball.
CapAngle cap_geometry(double s, double R);

/// Same cap, parametrised by the signed offset t = s - R with 1 - t^2 given
/// separately (callers working in t = sin u pass cos^2 u).
CapAngle cap_from_offset(double t, double one_minus_t2, double R);

/// int_0^gamma sin^m(u) du by the reduction recurrence (binomial series in
/// 1 - cos gamma for small caps).
double sin_power_integral(int m, const CapAngle& cap);

/// Area of the cap of half-angle gamma on the sphere of radius s in R^N:
/// s^{N-1} (N-1) w_{N-1} int_0^gamma sin^{N-2}. For N = 2 both arcs count.
double cap_area(int dim, double s, double gamma);
double cap_area(int dim, double s, const CapAngle& cap);

enum class KernelKind { exact, asymptotic };

struct LayerKernelPair {
  int dim = 2;
  double offset = 0;  // R; 0 for asymptotic kernels
  KernelKind kind = KernelKind::asymptotic;
  std::function<double(double)> phi;  // t -> phi(t)
  std::function<double(double)> psi;
  /// u -> phi(sin u) cos u and psi(sin u) cos u, evaluated without the
  /// endpoint singularity of phi for N = 2.
  std::function<double(double)> phi_sub;
  std::function<double(double)> psi_sub;
};

LayerKernelPair exact_kernels(int dim, double R);
LayerKernelPair asymptotic_kernels(int dim);

/// int_{-1}^{1} phi and int_{-1}^{1} psi by substituted adaptive quadrature.
double integrate_phi(const LayerKernelPair& k, double rel_tol = 1e-13);
double integrate_psi(const LayerKernelPair& k, double rel_tol = 1e-13);

/// Symmetric grid of `points` values on [-(1 - margin), 1 - margin].
std::vector<double> t_grid(int points, double margin = 1e-6);

/// Clip applied to t in tabulated output.
inline constexpr double kReportEndpointClip = 1e-9;

struct KernelDeviation {
  double phi = 0;     // sup |phi_R / phi~ - 1|
  double psi = 0;     // sup |psi_R / psi~ - 1|
  double phi_at = 0;  // t of the sup
  double psi_at = 0;
};

KernelDeviation kernel_deviation(int dim, double R, const std::vector<double>& grid);

}  // namespace isolab
