#include "hcarleson/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace hc {

void QuadratureConfig::validate() const {
  if (nodes_per_axis < 1 || nodes_per_axis > 64) throw ParameterError("nodes_per_axis must be in [1, 64]");
  if (refinement_depth < 1) throw ParameterError("refinement_depth must be >= 1");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
  if (abs_tol < 0.0) throw ParameterError("abs_tol must be nonnegative");
  if (workers < 1) throw ParameterError("workers must be >= 1");
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

namespace {

GaussRule make_rule(int order) {
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) r.nodes[order / 2] = 0.0;
  return r;
}

struct RuleTable {
  std::vector<GaussRule> rules;
  RuleTable() {
    rules.reserve(65);
    rules.emplace_back();
    for (int k = 1; k <= 64; ++k) rules.push_back(make_rule(k));
  }
};

int active_axes(const Box& box, std::array<int, kMaxCoords>& axes) {
  int da = 0;
  for (int i = 0; i < box.lo.coords(); ++i) {
    if (box.hi[i] > box.lo[i]) axes[da++] = i;
  }
  return da;
}

std::vector<Box> bisect(const Box& box) {
  std::array<int, kMaxCoords> axes{};
  const int da = active_axes(box, axes);
  std::vector<Box> out;
  out.reserve(std::size_t{1} << da);
  for (unsigned mask = 0; mask < (1u << da); ++mask) {
    Box c = box;
    for (int k = 0; k < da; ++k) {
      const int a = axes[k];
      const double mid = 0.5 * (box.lo[a] + box.hi[a]);
      if (mask & (1u << k)) {
        c.lo[a] = mid;
      } else {
        c.hi[a] = mid;
      }
    }
    out.push_back(c);
  }
  return out;
}

QuadResult refine(const Integrand& g, const Box& box, double coarse, int depth_left, const QuadratureConfig& cfg) {
  QuadResult r;
  const std::vector<Box> children = bisect(box);
  std::vector<double> fine(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    fine[i] = tensor_rule(g, children[i], cfg.nodes_per_axis, &r.evaluations);
  }
  const double total = compensated_sum(fine);
  if (std::abs(total - coarse) <= std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol)) {
    r.value = total;
    return r;
  }
  if (depth_left <= 1) {
    r.value = total;
    r.tolerance_met = false;
    return r;
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const QuadResult sub = refine(g, children[i], fine[i], depth_left - 1, cfg);
    acc.add(sub.value);
    r.evaluations += sub.evaluations;
    r.tolerance_met = r.tolerance_met && sub.tolerance_met;
  }
  r.value = acc.value();
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const RuleTable table;
  if (order < 1 || order > 64) throw ParameterError("Gauss-Legendre order must be in [1, 64]");
  return table.rules[static_cast<std::size_t>(order)];
}

std::vector<double> parallel_map(std::size_t count, int workers, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(count);
  const auto nthreads = static_cast<std::size_t>(std::max(1, workers));
  if (nthreads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(nthreads);
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += nthreads) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double tensor_rule(const Integrand& g, const Box& box, int order, std::size_t* evaluations) {
  const GaussRule& rule = gauss_legendre(order);
  std::array<int, kMaxCoords> axes{};
  const int da = active_axes(box, axes);
  std::array<std::array<double, 64>, kMaxCoords> xs{};
  std::array<std::array<double, 64>, kMaxCoords> ws{};
  for (int k = 0; k < da; ++k) {
    const int a = axes[k];
    const double mid = 0.5 * (box.lo[a] + box.hi[a]);
    const double half = 0.5 * (box.hi[a] - box.lo[a]);
    for (int q = 0; q < order; ++q) {
      xs[k][q] = mid + half * rule.nodes[q];
      ws[k][q] = half * rule.weights[q];
    }
  }
  Point p = box.lo;
  std::array<int, kMaxCoords> idx{};
  for (int k = 0; k < da; ++k) p[axes[k]] = xs[k][0];
  double acc = 0.0;
  std::size_t evals = 0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < da; ++k) w *= ws[k][idx[k]];
    acc += w * g(p);
    ++evals;
    int k = da - 1;
    while (k >= 0) {
      if (++idx[k] < order) {
        p[axes[k]] = xs[k][idx[k]];
        break;
      }
      idx[k] = 0;
      p[axes[k]] = xs[k][0];
      --k;
    }
    if (k < 0) break;
  }
  if (!std::isfinite(acc)) {
    throw EvaluationError(fmt::format("non-finite integrand value on box starting at t={}", box.lo.t()));
  }
  if (evaluations != nullptr) *evaluations += evals;
  return acc;
}

QuadResult integrate_box(const Integrand& g, const Box& box, const QuadratureConfig& cfg) {
  cfg.validate();
  QuadResult r;
  const double coarse = tensor_rule(g, box, cfg.nodes_per_axis, &r.evaluations);
  std::array<int, kMaxCoords> axes{};
  if (active_axes(box, axes) == 0) {
    r.value = coarse;
    return r;
  }
  const QuadResult fine = refine(g, box, coarse, cfg.refinement_depth, cfg);
  r.value = fine.value;
  r.tolerance_met = fine.tolerance_met;
  r.evaluations += fine.evaluations;
  return r;
}

QuadResult integrate_cube(const Integrand& g, const Cube& cube, const QuadratureConfig& cfg) {
  return integrate_box(g, cube.box(), cfg);
}

std::vector<double> integrate_per_cube(const Integrand& g, const WhitneyDecomposition& d, CubeRegion region,
                                       const QuadratureConfig& cfg, bool* tolerance_met) {
  cfg.validate();
  const auto box_of = [&](std::size_t i) {
    const Cube c = d[i];
    return region == CubeRegion::kCube ? c.box() : EnlargedCube{c}.box();
  };
  // The refinement test is local, so cubes where g is negligible would be
  // refined to full depth. One rule per cube estimates the total, and each
  // cube gets an equal share of rel_tol times it as an absolute floor.
  // A cube whose whole value is below its share is taken as estimated.
  const std::vector<double> rough = parallel_map(d.size(), cfg.workers, [&](std::size_t i) {
    return tensor_rule(g, box_of(i), cfg.nodes_per_axis);
  });
  QuadratureConfig budget = cfg;
  if (!rough.empty()) {
    CompensatedSum total;
    for (double v : rough) total.add(std::abs(v));
    budget.abs_tol = std::max(cfg.abs_tol, cfg.rel_tol * total.value() / static_cast<double>(rough.size()));
  }
  std::vector<char> met(d.size(), 1);
  std::vector<double> out = parallel_map(d.size(), cfg.workers, [&](std::size_t i) {
    if (std::abs(rough[i]) <= budget.abs_tol) return rough[i];
    const QuadResult r = integrate_box(g, box_of(i), budget);
    met[i] = r.tolerance_met ? 1 : 0;
    return r.value;
  });
  if (tolerance_met != nullptr) {
    *tolerance_met = std::all_of(met.begin(), met.end(), [](char c) { return c != 0; });
  }
  return out;
}

QuadResult integrate_halfspace(const Integrand& g, const WhitneyDecomposition& d, const QuadratureConfig& cfg) {
  bool met = true;
  const std::vector<double> per = integrate_per_cube(g, d, CubeRegion::kCube, cfg, &met);
  return QuadResult{compensated_sum(per), met, 0};
}

namespace {

QuadResult integrate_tiles(const Integrand& g, int n, double x_half_width, double tile, double t_lo, double t_hi,
                           const QuadratureConfig& cfg) {
  const auto m = static_cast<std::int64_t>(std::llround(2.0 * x_half_width / tile));
  std::int64_t total = 1;
  for (int a = 0; a < n; ++a) total *= m;
  std::vector<char> met(static_cast<std::size_t>(total), 1);
  const std::vector<double> per = parallel_map(static_cast<std::size_t>(total), cfg.workers, [&](std::size_t i) {
    Box b{Point::uniform(n, 0.0, t_lo), Point::uniform(n, 0.0, t_hi)};
    std::size_t rem = i;
    for (int a = n - 1; a >= 0; --a) {
      const auto k = static_cast<double>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
      b.lo.x(a) = -x_half_width + k * tile;
      b.hi.x(a) = -x_half_width + (k + 1.0) * tile;
    }
    const QuadResult r = integrate_box(g, b, cfg);
    met[i] = r.tolerance_met ? 1 : 0;
    return r.value;
  });
  QuadResult out{compensated_sum(per), std::all_of(met.begin(), met.end(), [](char c) { return c != 0; }), 0};
  return out;
}

double tile_side(double t, double x_half_width) {
  const double h = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(t))));
  return std::min(h, 2.0 * x_half_width);
}

}  // namespace

QuadResult integrate_slice(const Integrand& g, int n, double t, double x_half_width, const QuadratureConfig& cfg) {
  cfg.validate();
  require_dimension(n);
  if (!(t > 0.0)) throw DomainError("slice height must be positive");
  if (!(x_half_width > 0.0)) throw ParameterError("slice half-width must be positive");
  double tile = tile_side(t, x_half_width);
  // Tiles must divide the box evenly; fall back to the whole box otherwise.
  const double ratio = 2.0 * x_half_width / tile;
  if (ratio != std::floor(ratio)) tile = 2.0 * x_half_width;
  return integrate_tiles(g, n, x_half_width, tile, t, t, cfg);
}

QuadResult integrate_slab(const Integrand& g, const Slab& slab, const Window& window, const QuadratureConfig& cfg) {
  cfg.validate();
  const double lo = std::max(slab.t_lo(), window.t_min());
  const double hi = std::min(slab.t_hi(), window.t_max());
  if (hi <= lo) return QuadResult{};
  double tile = std::min(hi - lo, 2.0 * window.x_half_width);
  const double ratio = 2.0 * window.x_half_width / tile;
  if (ratio != std::floor(ratio)) tile = 2.0 * window.x_half_width;
  return integrate_tiles(g, window.n, window.x_half_width, tile, lo, hi, cfg);
}

QuadResult integrate_vertical(const Integrand& g, const Point& x, double a, double b, const QuadratureConfig& cfg) {
  if (!(b >= a)) throw ParameterError("vertical interval must satisfy a <= b");
  Box box{x, x};
  box.lo.t() = a;
  box.hi.t() = b;
  if (b == a) return QuadResult{};
  return integrate_box(g, box, cfg);
}

SlopeFit fit_power_law(std::span<const double> scales, std::span<const double> values) {
  if (scales.size() != values.size()) throw ParameterError("scales and values differ in length");
  if (scales.size() < 3) throw ParameterError("power-law fit needs at least 3 samples");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw DomainError("scales must be positive");
    if (!(values[i] > 0.0)) throw DomainError(fmt::format("nonpositive value {} at sample {}", values[i], i));
    if (i > 0 && !(scales[i] > scales[i - 1])) throw ParameterError("scales must be strictly increasing");
  }
  const auto m = static_cast<double>(scales.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    sx += std::log(scales[i]);
    sy += std::log(values[i]);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double dx = std::log(scales[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[i]) - my);
  }
  SlopeFit fit;
  fit.scales.assign(scales.begin(), scales.end());
  fit.values.assign(values.begin(), values.end());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double pred = fit.intercept + fit.slope * std::log(scales[i]);
    fit.max_residual = std::max(fit.max_residual, std::abs(std::log(values[i]) - pred));
  }
  return fit;
}

}  // namespace hc
