#pragma once

// Monte-Carlo measures of the competitor families, independent of the
// quadrature parametrisation: volumes by rejection in a bounding box built
// from the membership test, perimeters by uniform sampling of each boundary
// patch against its closed-form area.

#include <vector>

#include "isolab/measures.hpp"

namespace isolab {

/// Membership of x (in the set's scaled coordinates) in E.
bool contains(const CompetitorSet& e, const Vec& x);

/// Axis-aligned box in an orthonormal frame: x = sum_i c_i frame[i] with
/// c_i in [lo_i, hi_i]. Coordinates are unscaled.
struct BoundingBox {
  std::vector<Vec> frame;
  std::vector<double> lo, hi;
  double volume() const;
};

BoundingBox bounding_box(const CompetitorSet& e);

/// Sampled measures; `budget.samples` points go to the volume and as many
/// again are spread over the boundary patches. Sub-streams are seeded from
/// budget.seed so the result is reproducible bit for bit.
SetMeasures monte_carlo_measures(const CompetitorSet& e, const Density& d, const MeasureBudget& budget);

}  // namespace isolab
