#include "hcarleson/harmonic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "hcarleson/random.hpp"

namespace hc {

namespace {

double int_pow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

}  // namespace

TermSum::TermSum(int n, int l, std::vector<Term> terms) : n_(n), l_(l), terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.a < y.a; });
}

double TermSum::angular(double c) const {
  double acc = 0.0;
  for (const Term& term : terms_) acc += term.coefficient * int_pow(c, term.a);
  return acc;
}

double TermSum::evaluate(double u, double rho) const {
  const double inv = 1.0 / rho;
  return angular(u * inv) * int_pow(inv, decay());
}

double TermSum::angular_bound() const {
  // Grid maximum plus the Lipschitz slack over half a grid step.
  constexpr int kGrid = 100000;
  double lipschitz = 0.0;
  for (const Term& term : terms_) lipschitz += std::abs(term.coefficient) * term.a;
  double best = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    best = std::max(best, std::abs(angular(static_cast<double>(i) / kGrid)));
  }
  return best + lipschitz * 0.5 / kGrid;
}

TermSum derive_terms(int n, int l) {
  require_dimension(n);
  if (l < 0) throw ParameterError("derivative order l must be nonnegative");
  std::map<std::pair<int, int>, double> current{{{0, n - 1}, 1.0}};
  for (int step = 0; step < l; ++step) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [key, c] : current) {
      const auto [a, b] = key;
      if (a > 0) next[{a - 1, b}] += c * a;
      next[{a + 1, b + 2}] -= c * b;
    }
    std::erase_if(next, [](const auto& kv) { return kv.second == 0.0; });
    current = std::move(next);
  }
  std::vector<Term> terms;
  terms.reserve(current.size());
  for (const auto& [key, c] : current) terms.push_back(Term{c, key.first, key.second});
  return TermSum(n, l, std::move(terms));
}

double poisson_normalization(int n) {
  const double half = 0.5 * (n + 1);
  return std::tgamma(half) / std::pow(std::numbers::pi, half);
}

double evaluate_leaf(const HarmonicFunction::Leaf& leaf, const Point& z) {
  if (const auto* k = std::get_if<TestKernel>(&leaf)) {
    double r2 = 0.0;
    for (int i = 0; i < z.n(); ++i) {
      const double d = z.x(i) - k->w.x(i);
      r2 += d * d;
    }
    const double u = z.t() + k->w.t();
    return k->terms.evaluate(u, std::sqrt(r2 + u * u));
  }
  const auto& p = std::get<PoissonKernel>(leaf);
  double r2 = 0.0;
  for (int i = 0; i < z.n(); ++i) {
    const double d = z.x(i) - p.x0.x(i);
    r2 += d * d;
  }
  const double tt = z.t() + p.t0;
  const double q = r2 + tt * tt;
  // q^((n+1)/2) = q^floor * sqrt(q) when n is even.
  const int np1 = z.n() + 1;
  const double denom = (np1 % 2 == 0) ? int_pow(q, np1 / 2) : int_pow(q, np1 / 2) * std::sqrt(q);
  return p.normalization * tt / denom;
}

double leaf_decay(const HarmonicFunction::Leaf& leaf) {
  if (const auto* k = std::get_if<TestKernel>(&leaf)) return k->terms.decay();
  return std::get<PoissonKernel>(leaf).x0.n();
}

HarmonicFunction HarmonicFunction::test(const Point& w, int l) {
  require_dimension(w.n());
  if (!w.in_upper_half_space()) throw DomainError("test function center must lie in the upper half-space");
  HarmonicFunction f;
  f.n_ = w.n();
  f.components_.push_back(Component{1.0, TestKernel{w, l, derive_terms(w.n(), l)}});
  return f;
}

HarmonicFunction HarmonicFunction::poisson(const Point& x0, double t0) {
  require_dimension(x0.n());
  if (t0 < 0.0) throw ParameterError("Poisson shift t0 must be nonnegative");
  HarmonicFunction f;
  f.n_ = x0.n();
  Point base = x0;
  base.t() = 0.0;
  f.components_.push_back(Component{1.0, PoissonKernel{base, t0, poisson_normalization(x0.n())}});
  return f;
}

HarmonicFunction HarmonicFunction::combo(int n, const std::vector<std::pair<double, HarmonicFunction>>& parts,
                                         std::uint64_t seed) {
  require_dimension(n);
  HarmonicFunction f;
  f.n_ = n;
  f.combo_ = true;
  f.seed_ = seed;
  for (const auto& [weight, part] : parts) {
    if (part.n() != n) throw ParameterError("combo parts must share the dimension");
    for (const Component& c : part.components_) f.components_.push_back(Component{weight * c.weight, c.leaf});
  }
  return f;
}

HarmonicFunction HarmonicFunction::zero(int n) {
  require_dimension(n);
  HarmonicFunction f;
  f.n_ = n;
  f.combo_ = true;
  return f;
}

double HarmonicFunction::operator()(const Point& z) const {
  double acc = 0.0;
  for (const Component& c : components_) acc += c.weight * evaluate_leaf(c.leaf, z);
  return acc;
}

double HarmonicFunction::decay_order() const {
  double d = std::numeric_limits<double>::infinity();
  for (const Component& c : components_) d = std::min(d, leaf_decay(c.leaf));
  return d;
}

double HarmonicFunction::boundary_singularity() const {
  double order = 0.0;
  for (const Component& c : components_) {
    if (const auto* p = std::get_if<PoissonKernel>(&c.leaf); p != nullptr && p->t0 == 0.0) {
      order = std::max(order, static_cast<double>(n_));
    }
  }
  return order;
}

double laplacian_residual(const HarmonicFunction& f, const Point& z, double h) {
  if (!(h > 0.0)) throw ParameterError("finite-difference step must be positive");
  if (z.t() - h * (z.n() + 1) <= 0.0) throw DomainError("finite-difference stencil leaves the upper half-space");
  const double center = f(z);
  double acc = 0.0;
  for (int i = 0; i < z.coords(); ++i) {
    Point p = z;
    Point m = z;
    p[i] += h;
    m[i] -= h;
    acc += f(p) + f(m) - 2.0 * center;
  }
  return acc / (h * h);
}

HarmonicFunction make_combo(int n, std::uint64_t seed, int size, const Point& anchor, const ZooOptions& options) {
  require_dimension(n);
  if (size < 1) throw ParameterError("combo size must be positive");
  if (options.l_min < 0 || options.l_max < options.l_min) throw ParameterError("invalid combo order range");
  if (!anchor.in_upper_half_space() || anchor.n() != n) throw DomainError("combo anchor must lie in the upper half-space");
  const double s = anchor.t();
  // A Poisson kernel decays like |z|^-n; admit it only when that meets the
  // decay floor implied by l_min.
  const bool poisson_ok = options.allow_poisson && n >= n - 1 + options.l_min;
  Rng rng = Rng::stream(seed, 0xC0B0);
  std::vector<std::pair<double, HarmonicFunction>> parts;
  for (int i = 0; i < size; ++i) {
    Point c = anchor;
    for (int a = 0; a < n; ++a) c.x(a) = anchor.x(a) + s * rng.uniform(-options.spread, options.spread);
    const double height = s * rng.uniform(0.5, 2.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double magnitude = rng.uniform(0.5, 1.5);
    const bool use_poisson = poisson_ok && rng.uniform() < 0.25;
    const int l = rng.integer(options.l_min, options.l_max);
    if (use_poisson) {
      const double scale = std::pow(s, n);
      parts.emplace_back(sign * magnitude * scale, HarmonicFunction::poisson(c, height));
    } else {
      c.t() = height;
      const double scale = std::pow(s, n - 1 + l);
      parts.emplace_back(sign * magnitude * scale, HarmonicFunction::test(c, l));
    }
  }
  return HarmonicFunction::combo(n, parts, seed);
}

TwEstimate tw_fraction(const Point& w, int l, int samples, double c_lower, std::uint64_t seed) {
  if (samples < 1000) throw ParameterError("tw_fraction needs at least 1000 samples");
  if (!w.in_upper_half_space()) throw DomainError("T_w center must lie in the upper half-space");
  const HarmonicFunction f = HarmonicFunction::test(w, l);
  const int d = w.n() - 1 + l;
  const double s = w.t();
  Rng rng = Rng::stream(seed, 0x7A7A);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    Point z = w;
    for (int a = 0; a < z.coords(); ++a) z[a] = w[a] + s * rng.uniform(-0.5, 0.5);
    const double scaled = std::abs(f(z)) * std::pow(reflected_distance(z, w), d);
    if (scaled > c_lower) ++hits;
  }
  if (hits == 0) {
    throw CalibrationError(fmt::format("T_w is empty for c_lower={} (n={}, l={})", c_lower, w.n(), l));
  }
  return TwEstimate{w, l, static_cast<double>(hits) / samples, c_lower};
}

double calibrate_c_lower(int n, int l, int samples) {
  const Point ref = Point::uniform(n, 0.0, 1.0);
  for (int i = 9; i >= 1; --i) {
    const double c = 0.1 * i;
    try {
      if (tw_fraction(ref, l, samples, c).fraction >= 0.25) return c;
    } catch (const CalibrationError&) {
      continue;
    }
  }
  throw CalibrationError(fmt::format("no c_lower in {{0.9..0.1}} gives |T_w| >= 0.25 |Q_w| (n={}, l={})", n, l));
}

}  // namespace hc
