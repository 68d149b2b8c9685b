#include "hcarleson/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hc {

namespace {

double dyadic(int j) { return std::ldexp(1.0, j); }

// Keeps enumeration sizes far below anything that would overflow an index
// or exhaust memory in per-cube reductions.
constexpr std::size_t kMaxCubes = std::size_t{1} << 30;

}  // namespace

double Window::t_min() const { return dyadic(level_min); }
double Window::t_max() const { return dyadic(level_max + 1); }

Box Window::box() const {
  Box b{Point::uniform(n, -x_half_width, t_min()), Point::uniform(n, x_half_width, t_max())};
  return b;
}

bool Window::contains(const Point& z) const {
  if (z.n() != n) return false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(z.x(i)) > x_half_width) return false;
  }
  return z.t() >= t_min() && z.t() <= t_max();
}

std::string Window::describe() const {
  return fmt::format("n={} levels=[{},{}] x_half_width={}", n, level_min, level_max, x_half_width);
}

Window grow(const Window& w, GrowthMode mode) {
  Window g = w;
  g.level_min -= 1;
  if (mode == GrowthMode::kBoth) {
    g.level_max += 1;
    g.x_half_width *= 2.0;
  }
  return g;
}

Cube::Cube(int n, int level, std::span<const std::int32_t> index) : n_(n), level_(level) {
  require_dimension(n);
  if (static_cast<int>(index.size()) != n) throw ParameterError("cube index length must equal n");
  std::copy(index.begin(), index.end(), index_.begin());
}

double Cube::side() const { return dyadic(level_); }

Point Cube::center() const {
  const double h = side();
  Point c = Point::uniform(n_, 0.0, 1.5 * h);
  for (int i = 0; i < n_; ++i) c.x(i) = (static_cast<double>(index_[i]) + 0.5) * h;
  return c;
}

double Cube::diameter() const { return side() * std::sqrt(static_cast<double>(n_ + 1)); }

double Cube::volume() const { return std::pow(side(), n_ + 1); }

Box Cube::box() const {
  const double h = side();
  Box b{Point::uniform(n_, 0.0, h), Point::uniform(n_, 0.0, 2.0 * h)};
  for (int i = 0; i < n_; ++i) {
    b.lo.x(i) = static_cast<double>(index_[i]) * h;
    b.hi.x(i) = static_cast<double>(index_[i] + 1) * h;
  }
  return b;
}

double EnlargedCube::volume() const { return std::pow(side(), base.n() + 1); }

Box EnlargedCube::box() const {
  const Point c = center();
  const double half = 0.5 * side();
  Box b{c, c};
  for (int i = 0; i < c.coords(); ++i) {
    b.lo[i] = c[i] - half;
    b.hi[i] = c[i] + half;
  }
  return b;
}

Box LocalCube::box() const {
  const double half = 0.5 * side;
  Box b{center, center};
  for (int i = 0; i < center.coords(); ++i) {
    b.lo[i] = center[i] - half;
    b.hi[i] = center[i] + half;
  }
  return b;
}

double LocalCube::volume() const { return std::pow(side, center.n() + 1); }

LocalCube local_cube(const Point& w, LocalCubeKind kind) {
  if (!w.in_upper_half_space()) throw DomainError("local cube center must lie in the upper half-space");
  const double s = w.t();
  return LocalCube{w, kind == LocalCubeKind::kQ ? s : 0.8 * s};
}

WhitneyDecomposition::WhitneyDecomposition(const Window& window) : window_(window) {
  require_dimension(window.n);
  if (window.level_min > window.level_max) {
    throw ParameterError(fmt::format("invalid level range [{}, {}]: level_min > level_max", window.level_min,
                                     window.level_max));
  }
  const double ratio = window.x_half_width / dyadic(window.level_max);
  if (!(window.x_half_width > 0.0) || ratio != std::floor(ratio)) {
    throw ParameterError(fmt::format("x_half_width {} must be a positive integer multiple of 2^{}",
                                     window.x_half_width, window.level_max));
  }
  offsets_.reserve(static_cast<std::size_t>(window.level_max - window.level_min + 2));
  offsets_.push_back(0);
  for (int j = window.level_min; j <= window.level_max; ++j) {
    const auto m = static_cast<std::size_t>(per_axis(j));
    std::size_t count = 1;
    for (int i = 0; i < window.n; ++i) {
      if (count > kMaxCubes / m) throw ParameterError("window too large: cube count exceeds 2^30");
      count *= m;
    }
    if (offsets_.back() > kMaxCubes - count) throw ParameterError("window too large: cube count exceeds 2^30");
    offsets_.push_back(offsets_.back() + count);
  }
}

std::int64_t WhitneyDecomposition::per_axis(int level) const {
  return static_cast<std::int64_t>(2.0 * window_.x_half_width / dyadic(level));
}

std::int32_t WhitneyDecomposition::index_min(int level) const {
  return static_cast<std::int32_t>(-window_.x_half_width / dyadic(level));
}

std::size_t WhitneyDecomposition::level_begin(int level) const {
  return offsets_[static_cast<std::size_t>(level - window_.level_min)];
}

std::size_t WhitneyDecomposition::level_end(int level) const {
  return offsets_[static_cast<std::size_t>(level - window_.level_min + 1)];
}

Cube WhitneyDecomposition::operator[](std::size_t i) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
  const int level = window_.level_min + static_cast<int>(it - offsets_.begin()) - 1;
  std::size_t rem = i - level_begin(level);
  const auto m = static_cast<std::size_t>(per_axis(level));
  const std::int32_t kmin = index_min(level);
  std::array<std::int32_t, kMaxDim> idx{};
  // Last axis varies fastest, giving lexicographic order in the index vector.
  for (int a = window_.n - 1; a >= 0; --a) {
    idx[a] = kmin + static_cast<std::int32_t>(rem % m);
    rem /= m;
  }
  return Cube(window_.n, level, std::span<const std::int32_t>(idx.data(), static_cast<std::size_t>(window_.n)));
}

bool WhitneyDecomposition::contains(const Cube& c) const {
  if (c.n() != window_.n || c.level() < window_.level_min || c.level() > window_.level_max) return false;
  const std::int32_t kmin = index_min(c.level());
  const std::int64_t m = per_axis(c.level());
  for (int i = 0; i < c.n(); ++i) {
    const std::int64_t rel = static_cast<std::int64_t>(c.index(i)) - kmin;
    if (rel < 0 || rel >= m) return false;
  }
  return true;
}

std::size_t WhitneyDecomposition::position(const Cube& c) const {
  if (!contains(c)) throw DomainError("cube is not part of the decomposition");
  const std::int32_t kmin = index_min(c.level());
  const auto m = static_cast<std::size_t>(per_axis(c.level()));
  std::size_t pos = 0;
  for (int i = 0; i < c.n(); ++i) pos = pos * m + static_cast<std::size_t>(c.index(i) - kmin);
  return level_begin(c.level()) + pos;
}

std::vector<std::size_t> WhitneyDecomposition::cubes_containing(const Point& z) const {
  std::vector<std::size_t> out;
  if (!window_.contains(z)) return out;
  for (int j = window_.level_min; j <= window_.level_max; ++j) {
    const double h = dyadic(j);
    if (z.t() < h || z.t() > 2.0 * h) continue;
    const std::int32_t kmin = index_min(j);
    const std::int64_t m = per_axis(j);
    std::array<std::vector<std::int32_t>, kMaxDim> cand;
    bool empty = false;
    for (int a = 0; a < window_.n; ++a) {
      const auto k0 = static_cast<std::int32_t>(std::floor(z.x(a) / h));
      for (std::int32_t k = k0 - 1; k <= k0 + 1; ++k) {
        const std::int64_t rel = static_cast<std::int64_t>(k) - kmin;
        if (rel < 0 || rel >= m) continue;
        if (z.x(a) >= k * h && z.x(a) <= (k + 1) * h) cand[a].push_back(k);
      }
      if (cand[a].empty()) empty = true;
    }
    if (empty) continue;
    std::array<std::size_t, kMaxDim> pick{};
    while (true) {
      std::array<std::int32_t, kMaxDim> idx{};
      for (int a = 0; a < window_.n; ++a) idx[a] = cand[a][pick[a]];
      out.push_back(position(Cube(window_.n, j, {idx.data(), static_cast<std::size_t>(window_.n)})));
      int a = window_.n - 1;
      while (a >= 0 && ++pick[a] == cand[a].size()) {
        pick[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t WhitneyDecomposition::locate(const Point& z) const {
  if (!window_.contains(z)) throw DomainError("point outside the truncation window");
  const int j = std::clamp(static_cast<int>(std::floor(std::log2(z.t()))), window_.level_min, window_.level_max);
  // log2 may round across a power of two; correct by comparing with the edges.
  int level = j;
  if (z.t() < dyadic(level) && level > window_.level_min) --level;
  if (z.t() >= dyadic(level + 1) && level < window_.level_max) ++level;
  const double h = dyadic(level);
  const std::int32_t kmin = index_min(level);
  const std::int64_t m = per_axis(level);
  std::array<std::int32_t, kMaxDim> idx{};
  for (int a = 0; a < window_.n; ++a) {
    std::int64_t k = static_cast<std::int64_t>(std::floor(z.x(a) / h));
    k = std::clamp<std::int64_t>(k, kmin, kmin + m - 1);
    idx[a] = static_cast<std::int32_t>(k);
  }
  return position(Cube(window_.n, level, {idx.data(), static_cast<std::size_t>(window_.n)}));
}

Cube WhitneyDecomposition::anchor_cube(int level) const {
  if (level < window_.level_min || level > window_.level_max) {
    throw DomainError(fmt::format("level {} outside window levels", level));
  }
  std::array<std::int32_t, kMaxDim> idx{};
  return Cube(window_.n, level, {idx.data(), static_cast<std::size_t>(window_.n)});
}

WhitneyDecomposition build_whitney(int n, int level_min, int level_max, double x_half_width) {
  return WhitneyDecomposition(Window{n, level_min, level_max, x_half_width});
}

int overlap_count(const WhitneyDecomposition& d, const Point& z) {
  if (!d.window().contains(z)) throw DomainError("point outside the truncation window");
  int total = 0;
  for (int j = d.level_min(); j <= d.level_max(); ++j) {
    const double h = dyadic(j);
    const double margin = 0.125 * h;
    if (z.t() < h - margin || z.t() > 2.0 * h + margin) continue;
    const std::int64_t kmin = d.index_min(j);
    const std::int64_t kmax = kmin + d.per_axis(j) - 1;
    int count = 1;
    for (int a = 0; a < d.n() && count > 0; ++a) {
      const double u = z.x(a) / h;
      const auto lo = std::max<std::int64_t>(kmin, static_cast<std::int64_t>(std::ceil(u - 1.125)));
      const auto hi = std::min<std::int64_t>(kmax, static_cast<std::int64_t>(std::floor(u + 0.125)));
      count *= static_cast<int>(std::max<std::int64_t>(0, hi - lo + 1));
    }
    total += count;
  }
  return total;
}

double Slab::t_lo() const { return dyadic(-k - 1); }
double Slab::t_hi() const { return dyadic(-k); }

SlabFamily::SlabFamily(int k_min, int k_max) : k_min_(k_min), k_max_(k_max) {
  if (k_min > k_max) throw ParameterError(fmt::format("invalid slab range [{}, {}]", k_min, k_max));
}

double SlabFamily::t_lo() const { return dyadic(-k_max_ - 1); }
double SlabFamily::t_hi() const { return dyadic(-k_min_); }

SlabFamily build_slabs(int k_min, int k_max) { return SlabFamily(k_min, k_max); }

SlabFamily slabs_for_window(const Window& w) { return SlabFamily(-w.level_max - 1, -w.level_min - 1); }

void write_cubes_csv(const WhitneyDecomposition& d, std::ostream& out) {
  const int n = d.n();
  out << "level";
  for (int i = 0; i < n; ++i) out << ",index_" << i;
  for (int i = 0; i < n; ++i) out << ",center_" << i;
  out << ",center_t,side\n";
  for (std::size_t p = 0; p < d.size(); ++p) {
    const Cube c = d[p];
    const Point z = c.center();
    out << c.level();
    for (int i = 0; i < n; ++i) out << ',' << c.index(i);
    for (int i = 0; i <= n; ++i) out << ',' << fmt::format("{}", z[i]);
    out << ',' << fmt::format("{}", c.side()) << '\n';
  }
}

}  // namespace hc
