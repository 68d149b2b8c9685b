#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>

#include "hcarleson/errors.hpp"

namespace hc {

/// Largest supported horizontal dimension n. Points carry n + 1 coordinates.
inline constexpr int kMaxDim = 6;
inline constexpr int kMaxCoords = kMaxDim + 1;

inline void require_dimension(int n) {
  if (n < 2 || n > kMaxDim) {
    throw UnsupportedDimensionError("dimension n=" + std::to_string(n) +
                                    " unsupported (need 2 <= n <= " +
                                    std::to_string(kMaxDim) + ")");
  }
}

/// A location z = (x, t) in R^{n+1}; coordinates 0..n-1 are horizontal, the
/// last one is the height t. Membership in the upper half-space (t > 0) is
/// checked by the operations that need it, since reflected points and box
/// corners share this representation.
class Point {
 public:
  Point() = default;

  Point(std::span<const double> x, double t) : n_(static_cast<int>(x.size())) {
    if (n_ > kMaxDim) {
      throw UnsupportedDimensionError("point dimension exceeds capacity");
    }
    for (int i = 0; i < n_; ++i) c_[i] = x[i];
    c_[n_] = t;
  }

  Point(std::initializer_list<double> x, double t)
      : Point(std::span<const double>(x.begin(), x.size()), t) {}

  /// Point with all horizontal coordinates equal to x0.
  static Point uniform(int n, double x0, double t) {
    Point p;
    p.n_ = n;
    for (int i = 0; i < n; ++i) p.c_[i] = x0;
    p.c_[n] = t;
    return p;
  }

  int n() const { return n_; }
  int coords() const { return n_ + 1; }

  double x(int i) const { return c_[i]; }
  double& x(int i) { return c_[i]; }
  double t() const { return c_[n_]; }
  double& t() { return c_[n_]; }

  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  std::span<const double> horizontal() const { return {c_.data(), static_cast<std::size_t>(n_)}; }
  std::span<const double> all() const { return {c_.data(), static_cast<std::size_t>(n_ + 1)}; }

  /// Mirror image (x, -t) across the boundary hyperplane.
  Point reflected() const {
    Point p = *this;
    p.c_[n_] = -c_[n_];
    return p;
  }

  bool in_upper_half_space() const { return c_[n_] > 0.0; }

 private:
  std::array<double, kMaxCoords> c_{};
  int n_ = 0;
};

inline double distance_squared(const Point& a, const Point& b) {
  double acc = 0.0;
  for (int i = 0; i < a.coords(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(distance_squared(a, b)); }

/// |z - w_bar| for w = (y, s): the distance from z to the reflection of w.
inline double reflected_distance(const Point& z, const Point& w) {
  double acc = 0.0;
  for (int i = 0; i < z.n(); ++i) {
    const double d = z.x(i) - w.x(i);
    acc += d * d;
  }
  const double u = z.t() + w.t();
  return std::sqrt(acc + u * u);
}

/// Axis-aligned box in R^{n+1}. An axis with lo == hi is degenerate: the
/// quadrature engine keeps that coordinate fixed instead of integrating it,
/// which is how slices (fixed t) and vertical lines (fixed x) are expressed.
struct Box {
  Point lo;
  Point hi;

  int n() const { return lo.n(); }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < lo.coords(); ++i) {
      if (hi[i] > lo[i]) v *= hi[i] - lo[i];
    }
    return v;
  }

  Point center() const {
    Point c = lo;
    for (int i = 0; i < lo.coords(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  /// Closed containment.
  bool contains(const Point& p) const {
    for (int i = 0; i < lo.coords(); ++i) {
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
  }

  /// Half-open containment [lo, hi) on every axis; used for point masses so
  /// that masses are additive over dyadic subdivisions.
  bool contains_half_open(const Point& p) const {
    for (int i = 0; i < lo.coords(); ++i) {
      if (p[i] < lo[i] || p[i] >= hi[i]) return false;
    }
    return true;
  }

  bool interior_contains(const Point& p) const {
    for (int i = 0; i < lo.coords(); ++i) {
      if (p[i] <= lo[i] || p[i] >= hi[i]) return false;
    }
    return true;
  }
};

}  // namespace hc
