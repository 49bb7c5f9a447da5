#pragma once

#include <cstdint>
#include <random>

#include "isolab/vec.hpp"

namespace isolab {

/// std::mt19937_64 with a hand-rolled double conversion so that sample
/// streams are identical across standard libraries (the distributions in
/// <random> are implementation-defined, the engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the unit ball of R^dim (rejection from the cube).
  Vec in_ball(int dim) {
    Vec v(dim);
    for (;;) {
      double r2 = 0;
      for (int i = 0; i < dim; ++i) {
        v[i] = uniform(-1.0, 1.0);
        r2 += v[i] * v[i];
      }
      if (r2 < 1.0) return v;
    }
  }

  /// Uniform direction on S^{dim-1}.
  Vec on_sphere(int dim) {
    for (;;) {
      Vec v = in_ball(dim);
      const double n = norm(v);
      if (n > 1e-3) return (1.0 / n) * v;
    }
  }

  /// Deterministic sub-seed for partition `index` of a run seeded with `seed`.
  static std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace isolab
