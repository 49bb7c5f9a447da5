#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace isolab {

/// Largest ambient dimension supported by the fixed-size point type.
inline constexpr int kMaxDim = 8;

/// A point or direction in R^N, N <= kMaxDim; entries past `dim` stay zero.
struct Vec {
  std::array<double, kMaxDim> x{};
  int dim = 0;

  Vec() = default;
  explicit Vec(int n) : dim(n) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
  }

  static Vec unit(int n, int axis) {
    Vec v(n);
    v.x[axis] = 1.0;
    return v;
  }

  double& operator[](int i) { return x[i]; }
  double operator[](int i) const { return x[i]; }
  std::span<const double> span() const { return {x.data(), static_cast<std::size_t>(dim)}; }
};

inline Vec operator+(Vec a, const Vec& b) {
  for (int i = 0; i < a.dim; ++i) a.x[i] += b.x[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  for (int i = 0; i < a.dim; ++i) a.x[i] -= b.x[i];
  return a;
}
inline Vec operator*(double s, Vec a) {
  for (int i = 0; i < a.dim; ++i) a.x[i] *= s;
  return a;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a.x[i] * b.x[i];
  return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  if (!(n > 0)) throw std::invalid_argument("cannot normalize a zero vector");
  return (1.0 / n) * a;
}

/// a += s * b
inline void axpy(double s, const Vec& b, Vec& a) {
  for (int i = 0; i < a.dim; ++i) a.x[i] += s * b.x[i];
}

/// Rotation by phi in the 2-plane spanned by the orthonormal pair (theta, e),
/// turning theta towards e; the orthogonal complement is fixed.
inline Vec rotate_in_plane(const Vec& y, const Vec& theta, const Vec& e, double phi) {
  const double u = dot(y, theta), v = dot(y, e);
  const double c = std::cos(phi), s = std::sin(phi);
  Vec out = y;
  axpy((u * c - v * s) - u, theta, out);
  axpy((u * s + v * c) - v, e, out);
  return out;
}

inline double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace isolab
