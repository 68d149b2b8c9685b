#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hcarleson/geometry.hpp"
#include "hcarleson/quadrature.hpp"

namespace hc {

/// dmu = t^gamma dz, optionally restricted to a box.
struct WeightedLebesgue {
  double gamma = 0.0;
  std::optional<Box> window;
};

struct Atom {
  Point at;
  double mass = 0.0;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
};

/// Mass eta_k^e at the center of every cube of a window's decomposition.
struct CubePower {
  double e = 0.0;
  Window window;
};

class Measure {
 public:
  using Rep = std::variant<WeightedLebesgue, AtomicMeasure, CubePower>;

  static Measure m_lambda(double gamma, std::optional<Box> window = std::nullopt);
  static Measure atomic(std::vector<Atom> atoms);
  static Measure cube_power(double e, const Window& window);
  static Measure zero() { return atomic({}); }

  const Rep& rep() const { return rep_; }
  bool is_discrete() const { return !std::holds_alternative<WeightedLebesgue>(rep_); }
  bool is_zero() const;
  std::string describe() const;

  /// Mass of a box. Point masses count when they lie in the half-open box
  /// [lo, hi), so masses add up exactly over dyadic subdivisions.
  double mass(const Box& region) const;
  double mass(const Cube& c) const { return mass(c.box()); }
  double mass(const EnlargedCube& c) const { return mass(c.box()); }
  double mass(const LocalCube& c) const { return mass(c.box()); }
  /// Slabs are unbounded horizontally; the window supplies the truncation.
  double mass(const Slab& s, const Window& w) const;

  /// Integral of g against the measure over a box: quadrature of g t^gamma for
  /// the weighted variant, a half-open point sum for the discrete ones.
  QuadResult integrate(const Integrand& g, const Box& region, const QuadratureConfig& cfg) const;

  /// Visits every atom of a discrete measure inside the half-open box in a
  /// fixed order.
  template <class F>
  void for_each_atom(const Box& region, F&& visit) const;

 private:
  explicit Measure(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Per-cube integrals of g d(mu) over every cube of d, in enumeration order.
std::vector<double> mu_per_cube(const Integrand& g, const Measure& mu, const WhitneyDecomposition& d,
                                const QuadratureConfig& cfg, bool* tolerance_met = nullptr);

enum class TheoremId { kT1, kT2, kT3B, kT3F, kT4, kT5, kT8 };

std::string theorem_name(TheoremId id);
TheoremId parse_theorem(const std::string& name);

/// Exponents of one embedding theorem. Scalars serve the theorems stated
/// with a single exponent; the per-function vectors have length m.
struct TheoremParams {
  int n = 2;
  int m = 1;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  double s = 2.0;
  std::vector<double> p_i;
  std::vector<double> q_i;
  std::vector<double> beta_i;
  std::vector<double> t_i;
  std::vector<double> sigma_i;
  std::vector<double> alpha_i;

  /// Throws ParameterError naming the first violated constraint.
  void validate(TheoremId id) const;
};

/// Exponent E such that condition 2 of the theorem reads mu(cube) <= C eta^E.
double required_exponent(TheoremId id, const TheoremParams& params);

struct CarlesonReport {
  double exponent = 0.0;
  std::vector<double> ratios;  // mu(cube) / eta^E in enumeration order
  double sup_ratio = 0.0;
  std::size_t argmax = 0;
  std::vector<int> levels;
  std::vector<double> level_max;
  /// level_max[j] / level_max[j + 1]; empty entries (0/0) are reported as 1.
  std::vector<double> trend;
};

CarlesonReport carleson_sweep(const Measure& mu, const WhitneyDecomposition& d, double exponent);

/// sum_k eta_k^-((alpha q n + n) p / (q - p)) mu(cube_k)^(q / (q - p)).
double theorem7_sum(const Measure& mu, const WhitneyDecomposition& d, double p, double q, double alpha);

// Implementation of the template member.

namespace detail {
void cube_power_atoms(const CubePower& cp, const Box& region, const std::function<void(const Point&, double)>& visit);
}

template <class F>
void Measure::for_each_atom(const Box& region, F&& visit) const {
  if (const auto* a = std::get_if<AtomicMeasure>(&rep_)) {
    for (const Atom& atom : a->atoms) {
      if (atom.at.n() == region.n() && region.contains_half_open(atom.at)) visit(atom.at, atom.mass);
    }
  } else if (const auto* cp = std::get_if<CubePower>(&rep_)) {
    detail::cube_power_atoms(*cp, region, visit);
  }
}

}  // namespace hc
