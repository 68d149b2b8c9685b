#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcarleson/point.hpp"

namespace hc {

/// Truncation window [-R, R]^n x [2^level_min, 2^(level_max+1)] over which
/// every "whole half-space" quantity is evaluated.
struct Window {
  int n = 2;
  int level_min = -4;
  int level_max = 4;
  double x_half_width = 32.0;

  double t_min() const;
  double t_max() const;
  /// The window as a box in R^{n+1}.
  Box box() const;
  bool contains(const Point& z) const;
  std::string describe() const;

  friend bool operator==(const Window&, const Window&) = default;
};

/// How a window is enlarged "by one level".
enum class GrowthMode {
  kFiner,  // add the next finer dyadic level at the boundary
  kBoth,   // add a finer and a coarser level and double the half-width
};

Window grow(const Window& w, GrowthMode mode);

/// Closed dyadic cube [k 2^j, (k+1) 2^j]^n x [2^j, 2^(j+1)].
class Cube {
 public:
  Cube() = default;
  Cube(int n, int level, std::span<const std::int32_t> index);

  int n() const { return n_; }
  int level() const { return level_; }
  std::int32_t index(int i) const { return index_[i]; }
  std::span<const std::int32_t> index() const { return {index_.data(), static_cast<std::size_t>(n_)}; }

  double side() const;
  /// Center zeta = (xi, eta) with eta = 1.5 * 2^j.
  Point center() const;
  double eta() const { return 1.5 * side(); }
  /// dist(cube, boundary) = 2^j.
  double boundary_distance() const { return side(); }
  double diameter() const;
  double volume() const;
  Box box() const;

  friend bool operator==(const Cube& a, const Cube& b) {
    if (a.n_ != b.n_ || a.level_ != b.level_) return false;
    for (int i = 0; i < a.n_; ++i) {
      if (a.index_[i] != b.index_[i]) return false;
    }
    return true;
  }

 private:
  std::array<std::int32_t, kMaxDim> index_{};
  int n_ = 0;
  int level_ = 0;
};

/// Cube with the same center as its base, enlarged by a factor 5/4.
struct EnlargedCube {
  static constexpr double kFactor = 1.25;
  Cube base;

  double side() const { return kFactor * base.side(); }
  Point center() const { return base.center(); }
  double volume() const;
  Box box() const;
};

/// Axis-aligned cube centered at w: Q_w has side s, q_w has side 4s/5.
struct LocalCube {
  Point center;
  double side = 0.0;

  Box box() const;
  double volume() const;
};

enum class LocalCubeKind { kQ, kq };

LocalCube local_cube(const Point& w, LocalCubeKind kind);

/// The dyadic Whitney cubes of a window, enumerated lexicographically in
/// (level, index). Cubes are generated on demand from their position in the
/// enumeration, so the list costs O(levels) memory.
class WhitneyDecomposition {
 public:
  explicit WhitneyDecomposition(const Window& window);

  const Window& window() const { return window_; }
  int n() const { return window_.n; }
  int level_min() const { return window_.level_min; }
  int level_max() const { return window_.level_max; }
  double x_half_width() const { return window_.x_half_width; }

  std::size_t size() const { return offsets_.back(); }
  Cube operator[](std::size_t i) const;
  /// Cubes per axis at a level.
  std::int64_t per_axis(int level) const;
  /// First and one-past-last enumeration position of a level.
  std::size_t level_begin(int level) const;
  std::size_t level_end(int level) const;
  /// Lowest admissible index on each axis at a level.
  std::int32_t index_min(int level) const;

  bool contains(const Cube& c) const;
  std::size_t position(const Cube& c) const;

  /// Enumeration positions of the cubes whose closed box contains z.
  std::vector<std::size_t> cubes_containing(const Point& z) const;
  /// Position of a cube whose half-open box contains z (unique); throws a
  /// DomainError when z is outside the window.
  std::size_t locate(const Point& z) const;
  /// The level-j cube whose lower x-corner is at the origin.
  Cube anchor_cube(int level) const;

 private:
  Window window_;
  std::vector<std::size_t> offsets_;
};

WhitneyDecomposition build_whitney(int n, int level_min, int level_max, double x_half_width);

/// Number of enlarged cubes containing the point.
int overlap_count(const WhitneyDecomposition& d, const Point& z);

/// Horizontal slab H_k = R^n x [2^-(k+1), 2^-k).
struct Slab {
  int k = 0;
  double t_lo() const;
  double t_hi() const;
};

class SlabFamily {
 public:
  SlabFamily(int k_min, int k_max);

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  std::size_t size() const { return static_cast<std::size_t>(k_max_ - k_min_ + 1); }
  Slab operator[](std::size_t i) const { return Slab{k_min_ + static_cast<int>(i)}; }
  double t_lo() const;
  double t_hi() const;

 private:
  int k_min_;
  int k_max_;
};

SlabFamily build_slabs(int k_min, int k_max);
/// Slabs exactly covering the heights of a window: level j matches k = -j-1.
SlabFamily slabs_for_window(const Window& w);

/// CSV with columns level, index_0.., center_0.., center_t, side.
void write_cubes_csv(const WhitneyDecomposition& d, std::ostream& out);

}  // namespace hc
