#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hcarleson/geometry.hpp"

namespace hc {

using Integrand = std::function<double(const Point&)>;

struct QuadratureConfig {
  int nodes_per_axis = 3;    // Gauss-Legendre order per active axis
  int refinement_depth = 4;  // maximal dyadic bisections per box
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  int workers = 1;  // threads for per-cube work; results do not depend on it

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  bool tolerance_met = true;
  std::size_t evaluations = 0;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

double compensated_sum(std::span<const double> values);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of the given order (1..64), computed once and cached.
const GaussRule& gauss_legendre(int order);

/// Evaluates fn(i) for i in [0, count) on `workers` threads and returns the
/// results in index order.
std::vector<double> parallel_map(std::size_t count, int workers, const std::function<double(std::size_t)>& fn);

/// Single tensor Gauss-Legendre rule on a box (no refinement).
double tensor_rule(const Integrand& g, const Box& box, int order, std::size_t* evaluations = nullptr);

/// Tensor Gauss-Legendre with adaptive bisection: a box is accepted when the
/// rule on the box and the sum of the rule on its 2^d children agree within
/// max(rel_tol |I|, abs_tol); otherwise the children are refined in turn until
/// the depth budget is spent, which clears tolerance_met.
QuadResult integrate_box(const Integrand& g, const Box& box, const QuadratureConfig& cfg);
QuadResult integrate_cube(const Integrand& g, const Cube& cube, const QuadratureConfig& cfg);

enum class CubeRegion { kCube, kEnlarged };

/// Per-cube integrals over every cube (or enlarged cube) of a decomposition,
/// in enumeration order.
std::vector<double> integrate_per_cube(const Integrand& g, const WhitneyDecomposition& d, CubeRegion region,
                                       const QuadratureConfig& cfg, bool* tolerance_met = nullptr);

/// Integral over the truncated half-space: compensated sum of the per-cube
/// integrals in enumeration order.
QuadResult integrate_halfspace(const Integrand& g, const WhitneyDecomposition& d, const QuadratureConfig& cfg);

/// n-dimensional integral over [-R, R]^n at fixed height t, tiled by squares
/// of the Whitney side at that height.
QuadResult integrate_slice(const Integrand& g, int n, double t, double x_half_width, const QuadratureConfig& cfg);

/// Integral over the part of slab H_k inside the window's horizontal box.
QuadResult integrate_slab(const Integrand& g, const Slab& slab, const Window& window, const QuadratureConfig& cfg);

/// Integral over [a, b] of a function of t (horizontal coordinates fixed).
QuadResult integrate_vertical(const Integrand& g, const Point& x, double a, double b, const QuadratureConfig& cfg);

struct SlopeFit {
  std::vector<double> scales;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares line through (log scale, log value).
SlopeFit fit_power_law(std::span<const double> scales, std::span<const double> values);

}  // namespace hc
