#pragma once

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "hcarleson/point.hpp"

namespace hc {

/// One term c * u^a * rho^-b with u = t + s and rho = |z - w_bar|.
struct Term {
  double coefficient = 0.0;
  int a = 0;
  int b = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Closed form of d^l/dt^l |z - w_bar|^(1-n) as a sum of terms. Every term
/// has b - a = n - 1 + l, so rho^(n-1+l) * value is a polynomial in u / rho.
class TermSum {
 public:
  TermSum(int n, int l, std::vector<Term> terms);

  int n() const { return n_; }
  int order() const { return l_; }
  int decay() const { return n_ - 1 + l_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Value at given u > 0 and rho >= u.
  double evaluate(double u, double rho) const;
  /// The polynomial P(c) = sum coefficient * c^a, with c = u / rho in (0, 1].
  double angular(double c) const;
  /// Upper bound of |P| on [0, 1].
  double angular_bound() const;

 private:
  int n_;
  int l_;
  std::vector<Term> terms_;  // sorted by a ascending
};

/// Applies l times d/dt (u^a rho^-b) = a u^(a-1) rho^-b - b u^(a+1) rho^(-b-2)
/// to the seed term (1, 0, n-1), merging like terms.
TermSum derive_terms(int n, int l);

/// f_{w,l}(z) = d^l/dt^l |z - w_bar|^(1-n).
struct TestKernel {
  Point w;
  int l = 0;
  TermSum terms;
};

/// Poisson kernel translated to boundary point x0 and shifted up by t0 >= 0:
/// c_n (t + t0) / (|x - x0|^2 + (t + t0)^2)^((n+1)/2).
struct PoissonKernel {
  Point x0;  // horizontal part used; t component ignored
  double t0 = 0.0;
  double normalization = 0.0;
};

double poisson_normalization(int n);

class HarmonicFunction {
 public:
  using Leaf = std::variant<TestKernel, PoissonKernel>;
  struct Component {
    double weight;
    Leaf leaf;
  };

  static HarmonicFunction test(const Point& w, int l);
  static HarmonicFunction poisson(const Point& x0, double t0);
  /// Linear combination; nested combinations are flattened.
  static HarmonicFunction combo(int n, const std::vector<std::pair<double, HarmonicFunction>>& parts,
                                std::uint64_t seed = 0);
  static HarmonicFunction zero(int n);

  int n() const { return n_; }
  double operator()(const Point& z) const;

  bool is_combo() const { return combo_; }
  bool is_zero() const { return components_.empty(); }
  const std::vector<Component>& components() const { return components_; }
  std::uint64_t seed() const { return seed_; }

  /// Decay order at infinity; +inf for the zero function.
  double decay_order() const;
  /// Order of the boundary singularity (Poisson kernel with t0 = 0 blows up
  /// like rho^-n at x0); 0 when the function is bounded near the boundary.
  double boundary_singularity() const;

 private:
  HarmonicFunction() = default;
  std::vector<Component> components_;
  int n_ = 0;
  bool combo_ = false;
  std::uint64_t seed_ = 0;
};

double evaluate_leaf(const HarmonicFunction::Leaf& leaf, const Point& z);
double leaf_decay(const HarmonicFunction::Leaf& leaf);

/// Centered second-difference estimate of the Laplacian with step h.
double laplacian_residual(const HarmonicFunction& f, const Point& z, double h);

struct ZooOptions {
  int l_min = 1;
  int l_max = 3;
  bool allow_poisson = true;
  /// Horizontal spread of component centers in units of the anchor height.
  double spread = 1.0;
};

/// Seeded combination of test functions and shifted Poisson kernels placed
/// around the anchor w = (y, s): centers y + s u with u in [-spread, spread]^n,
/// heights s v with v in [1/2, 2]. Component weights carry s^(decay), so
/// make_combo(seed, delta * w)(delta * z) == make_combo(seed, w)(z).
HarmonicFunction make_combo(int n, std::uint64_t seed, int size, const Point& anchor, const ZooOptions& options);

struct TwEstimate {
  Point w;
  int l = 0;
  double fraction = 0.0;
  double c_lower = 0.0;
};

/// Monte-Carlo fraction of Q_w where |f_{w,l}(z)| |z - w_bar|^(n-1+l) > c_lower.
TwEstimate tw_fraction(const Point& w, int l, int samples, double c_lower, std::uint64_t seed = 1);

/// Largest c in {0.9, 0.8, ..., 0.1} with tw_fraction >= 0.25 at w = (0, 1).
double calibrate_c_lower(int n, int l, int samples = 4096);

}  // namespace hc
