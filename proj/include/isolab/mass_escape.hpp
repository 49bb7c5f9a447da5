#pragma once

// Tail mass m(t) = |E \ B_t|_f of a set and the comparison ODE
// m' = -(m / C2)^{(N-1)/N}, which reaches zero in finite time.

#include <vector>

#include "isolab/density.hpp"
#include "isolab/measures.hpp"

namespace isolab {

enum class TailSource { analytic, measured };

struct TailMassCurve {
  std::vector<double> times;
  std::vector<double> masses;
  TailSource source = TailSource::measured;
};

/// Plain balls under radial densities are integrated layer by layer
/// (|x| = s slices, exact kernels); everything else is sampled in the
/// bounding box with budget.samples points.
MeasureResult tail_mass(const CompetitorSet& e, const Density& d, double t, const MeasureBudget& budget = {});

TailMassCurve tail_mass_curve(const CompetitorSet& e, const Density& d, const std::vector<double>& times,
                              const MeasureBudget& budget = {});

/// t* = N C2^{(N-1)/N} m0^{1/N}
double extinction_time(double C2, int dim, double m0);

struct OdeCertificate {
  TailMassCurve curve;    // analytic source, last mass exactly 0
  double extinction = 0;  // first time the integrated mass reaches 0
  double predicted = 0;   // extinction_time(C2, N, m0)
  long long steps = 0;
};

/// u = m^{1/N} decreases at the constant rate 1 / (N C2^{(N-1)/N}); each step
/// is exact, and the zero crossing inside the last step is located exactly.
OdeCertificate simulate_comparison_ode(double C2, int dim, double m0, double step);

/// m' on the curve's grid: centred differences inside, one-sided at the ends.
std::vector<double> finite_difference(const TailMassCurve& c);

/// max over the grid of m - C2 (-m')^{N/(N-1)}: nonpositive iff the curve
/// satisfies the differential inequality at every node.
double inequality_residual(const TailMassCurve& c, double C2, int dim);

/// max over the grid of m(t) - m_ode(t), m_ode the equality solution from m(t_0).
double comparison_excess(const TailMassCurve& c, double C2, int dim);

/// m_ode(t) for the equality ODE started at m0 at time 0.
double ode_mass(double C2, int dim, double m0, double t);

}  // namespace isolab
