#include "hcarleson/norms.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hc {

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  if (p == std::floor(p) && p >= 0.0 && p <= 32.0) {
    auto k = static_cast<int>(p);
    double r = 1.0;
    double b = a;
    while (k > 0) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }
  return std::pow(a, p);
}

namespace {

double t_pow(double t, double e) { return e == 0.0 ? 1.0 : (e == std::floor(e) && e > 0.0 ? abs_pow(t, e) : std::pow(t, e)); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ParameterError(fmt::format("constraint violated: {} > 0 (got {})", name, v));
}

// Mixed norms need decay > n/p + alpha at infinity and alpha > 0 for the
// t^(alpha q - 1) weight at the boundary.
void require_mixed_convergence(const HarmonicFunction& f, double p, double alpha) {
  require_positive(alpha, "alpha");
  if (f.is_zero()) return;
  const int n = f.n();
  if (!(f.decay_order() > n / p + alpha)) {
    throw RejectedConfigurationError(fmt::format(
        "mixed norm diverges at infinity: decay {} must exceed n/p + alpha = {}", f.decay_order(), n / p + alpha));
  }
  const double sing = f.boundary_singularity();
  if (sing > 0.0 && !(alpha > sing - n / p)) {
    throw RejectedConfigurationError(
        fmt::format("mixed norm diverges at the boundary: alpha must exceed {}", sing - n / p));
  }
}

// Horizontal tiling of [-R, R]^n by squares of the given side; visits tiles in
// lexicographic order.
std::vector<Box> horizontal_tiles(int n, double x_half_width, double side, double t) {
  const auto m = static_cast<std::size_t>(std::llround(2.0 * x_half_width / side));
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= m;
  std::vector<Box> tiles;
  tiles.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    Box b{Point::uniform(n, 0.0, t), Point::uniform(n, 0.0, t)};
    std::size_t rem = i;
    for (int a = n - 1; a >= 0; --a) {
      const auto k = static_cast<double>(rem % m);
      rem /= m;
      b.lo.x(a) = -x_half_width + k * side;
      b.hi.x(a) = -x_half_width + (k + 1.0) * side;
    }
    tiles.push_back(b);
  }
  return tiles;
}

}  // namespace

void require_bergman_convergence(const HarmonicFunction& f, double p, double weight) {
  require_positive(p, "p");
  if (!(weight > -1.0)) throw ParameterError(fmt::format("constraint violated: weight exponent > -1 (got {})", weight));
  if (f.is_zero()) return;
  const int n = f.n();
  if (!(p * f.decay_order() > n + 1 + weight)) {
    throw RejectedConfigurationError(
        fmt::format("integral diverges at infinity: p * decay = {} must exceed n + 1 + weight = {}",
                    p * f.decay_order(), n + 1 + weight));
  }
  const double sing = f.boundary_singularity();
  if (sing > 0.0 && !(p * sing < n + 1 + weight)) {
    throw RejectedConfigurationError(fmt::format(
        "integral diverges at a boundary singularity: p * {} must stay below n + 1 + weight = {}", sing,
        n + 1 + weight));
  }
}

NormResult norm_A(const HarmonicFunction& f, double p, double lambda, const WhitneyDecomposition& d,
                  const QuadratureConfig& cfg) {
  require_bergman_convergence(f, p, lambda);
  if (f.is_zero()) return {};
  const QuadResult r =
      integrate_halfspace([&](const Point& z) { return abs_pow(f(z), p) * t_pow(z.t(), lambda); }, d, cfg);
  return {std::pow(r.value, 1.0 / p), r.tolerance_met};
}

NormResult slice_norm(const HarmonicFunction& f, double p, double t, double x_half_width, const QuadratureConfig& cfg) {
  require_positive(p, "p");
  if (f.is_zero()) return {};
  const QuadResult r = integrate_slice([&](const Point& z) { return abs_pow(f(z), p); }, f.n(), t, x_half_width, cfg);
  return {std::pow(r.value, 1.0 / p), r.tolerance_met};
}

NormResult norm_B(const HarmonicFunction& f, double p, double q, double alpha, const Window& w,
                  const QuadratureConfig& cfg) {
  require_positive(p, "p");
  require_positive(q, "q");
  require_mixed_convergence(f, p, alpha);
  if (f.is_zero()) return {};
  bool met = true;
  const double weight = alpha * q - 1.0;
  const Integrand outer = [&](const Point& z) {
    const double t = z.t();
    QuadratureConfig inner = cfg;
    inner.workers = 1;
    const QuadResult m = integrate_slice([&](const Point& y) { return abs_pow(f(y), p); }, f.n(), t, w.x_half_width,
                                         inner);
    if (!m.tolerance_met) met = false;
    return std::pow(m.value, q / p) * t_pow(t, weight);
  };
  CompensatedSum acc;
  const Point origin = Point::uniform(w.n, 0.0, 0.0);
  for (int j = w.level_min; j <= w.level_max; ++j) {
    const QuadResult r = integrate_vertical(outer, origin, std::ldexp(1.0, j), std::ldexp(1.0, j + 1), cfg);
    if (!r.tolerance_met) met = false;
    acc.add(r.value);
  }
  return {std::pow(acc.value(), 1.0 / q), met};
}

NormResult norm_F(const HarmonicFunction& f, double p, double q, double alpha, const Window& w,
                  const QuadratureConfig& cfg) {
  require_positive(p, "p");
  require_positive(q, "q");
  require_mixed_convergence(f, p, alpha);
  if (f.is_zero()) return {};
  const double weight = alpha * q - 1.0;
  QuadratureConfig inner = cfg;
  inner.workers = 1;
  const Integrand vertical = [&](const Point& z) { return abs_pow(f(z), q) * t_pow(z.t(), weight); };
  const int side_level = std::min(w.level_min + 1, w.level_max);
  const std::vector<Box> tiles = horizontal_tiles(w.n, w.x_half_width, std::ldexp(1.0, side_level), 0.0);
  std::vector<char> met(tiles.size(), 1);
  const std::vector<double> per = parallel_map(tiles.size(), cfg.workers, [&](std::size_t i) {
    bool ok = true;
    const Integrand outer = [&](const Point& x) {
      CompensatedSum col;
      for (int j = w.level_min; j <= w.level_max; ++j) {
        const QuadResult r = integrate_vertical(vertical, x, std::ldexp(1.0, j), std::ldexp(1.0, j + 1), inner);
        if (!r.tolerance_met) ok = false;
        col.add(r.value);
      }
      return std::pow(col.value(), p / q);
    };
    const QuadResult r = integrate_box(outer, tiles[i], inner);
    met[i] = (ok && r.tolerance_met) ? 1 : 0;
    return r.value;
  });
  return {std::pow(compensated_sum(per), 1.0 / p),
          std::all_of(met.begin(), met.end(), [](char c) { return c != 0; })};
}

std::vector<double> slab_values(const HarmonicFunction& f, double p, const Measure& mu, const SlabFamily& slabs,
                                const WhitneyDecomposition& d, const QuadratureConfig& cfg, bool* tolerance_met) {
  const Window& w = d.window();
  if (slabs.t_lo() > w.t_min() || slabs.t_hi() < w.t_max()) {
    throw ParameterError(fmt::format("slab family [{}, {}) does not cover the window heights [{}, {}]", slabs.t_lo(),
                                     slabs.t_hi(), w.t_min(), w.t_max()));
  }
  if (const auto* wl = std::get_if<WeightedLebesgue>(&mu.rep())) require_bergman_convergence(f, p, wl->gamma);
  std::vector<double> values(slabs.size(), 0.0);
  if (f.is_zero() || mu.is_zero()) {
    if (tolerance_met != nullptr) *tolerance_met = true;
    return values;
  }
  const std::vector<double> per =
      mu_per_cube([&](const Point& z) { return abs_pow(f(z), p); }, mu, d, cfg, tolerance_met);
  for (std::size_t s = 0; s < slabs.size(); ++s) {
    // Slab H_k covers the heights of Whitney level j = -k - 1.
    const int j = -slabs[s].k - 1;
    if (j < d.level_min() || j > d.level_max()) continue;
    CompensatedSum acc;
    for (std::size_t i = d.level_begin(j); i < d.level_end(j); ++i) acc.add(per[i]);
    values[s] = acc.value();
  }
  return values;
}

double herz_aggregate(const std::vector<double>& values, double p, double q) {
  require_positive(p, "p");
  require_positive(q, "q");
  double top = 0.0;
  for (double v : values) top = std::max(top, v);
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::pow(v / top, q / p);
  return std::pow(top, 1.0 / p) * std::pow(sum, 1.0 / q);
}

NormResult norm_K(const HarmonicFunction& f, double p, double q, const Measure& mu, const SlabFamily& slabs,
                  const WhitneyDecomposition& d, const QuadratureConfig& cfg) {
  bool met = true;
  const std::vector<double> v = slab_values(f, p, mu, slabs, d, cfg, &met);
  return {herz_aggregate(v, p, q), met};
}

HardyResult norm_hardy(const HarmonicFunction& f, double p, const Window& w, const QuadratureConfig& cfg,
                       int per_octave) {
  require_positive(p, "p");
  if (per_octave < 1) throw ParameterError("per_octave must be >= 1");
  HardyResult r;
  const int steps = (w.level_max + 1 - w.level_min) * per_octave;
  for (int i = 0; i <= steps; ++i) {
    const double t = w.t_min() * std::exp2(static_cast<double>(i) / per_octave);
    const NormResult m = slice_norm(f, p, t, w.x_half_width, cfg);
    r.heights.push_back(t);
    r.slice_norms.push_back(m.value);
    r.tolerance_met = r.tolerance_met && m.tolerance_met;
    if (m.value > r.value) {
      r.value = m.value;
      r.argmax_t = t;
    }
  }
  return r;
}

namespace {

double product_abs_pow(const Tuple& fs, const std::vector<double>& p, const Point& z) {
  double v = 1.0;
  for (std::size_t i = 0; i < fs.size(); ++i) v *= abs_pow(fs[i](z), p[i]);
  return v;
}

bool any_zero(const Tuple& fs) {
  return std::any_of(fs.begin(), fs.end(), [](const HarmonicFunction& f) { return f.is_zero(); });
}

void require_product_convergence(const Tuple& fs, const std::vector<double>& p, double weight) {
  if (fs.empty()) throw ParameterError("function tuple must be nonempty");
  if (p.size() != fs.size()) throw ParameterError("exponent vector length must match the tuple");
  if (!(weight > -1.0)) throw ParameterError(fmt::format("constraint violated: weight exponent > -1 (got {})", weight));
  if (any_zero(fs)) return;
  const int n = fs.front().n();
  double decay = 0.0;
  double sing = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    require_positive(p[i], "p_i");
    decay += p[i] * fs[i].decay_order();
    sing += p[i] * fs[i].boundary_singularity();
  }
  if (!(decay > n + 1 + weight)) {
    throw RejectedConfigurationError(fmt::format(
        "product integral diverges at infinity: sum p_i decay_i = {} must exceed n + 1 + weight = {}", decay,
        n + 1 + weight));
  }
  if (sing > 0.0 && !(sing < n + 1 + weight)) {
    throw RejectedConfigurationError("product integral diverges at a boundary singularity");
  }
}

}  // namespace

NormResult product_integral(const Tuple& fs, const std::vector<double>& p, double s, const WhitneyDecomposition& d,
                            const QuadratureConfig& cfg) {
  require_product_convergence(fs, p, s);
  if (any_zero(fs)) return {};
  const QuadResult r =
      integrate_halfspace([&](const Point& z) { return product_abs_pow(fs, p, z) * t_pow(z.t(), s); }, d, cfg);
  return {r.value, r.tolerance_met};
}

std::vector<double> product_per_cube(const Tuple& fs, double p, const Measure& mu, const WhitneyDecomposition& d,
                                     const QuadratureConfig& cfg, bool* tolerance_met) {
  const std::vector<double> pv(fs.size(), p);
  if (const auto* wl = std::get_if<WeightedLebesgue>(&mu.rep())) require_product_convergence(fs, pv, wl->gamma);
  if (fs.empty()) throw ParameterError("function tuple must be nonempty");
  if (any_zero(fs) || mu.is_zero()) {
    if (tolerance_met != nullptr) *tolerance_met = true;
    return std::vector<double>(d.size(), 0.0);
  }
  return mu_per_cube([&](const Point& z) { return product_abs_pow(fs, pv, z); }, mu, d, cfg, tolerance_met);
}

NormResult apqm_norm(const Tuple& fs, double p, double q, const Measure& mu, const WhitneyDecomposition& d,
                     const QuadratureConfig& cfg) {
  require_positive(p, "p");
  require_positive(q, "q");
  bool met = true;
  const std::vector<double> per = product_per_cube(fs, p, mu, d, cfg, &met);
  CompensatedSum acc;
  for (double v : per) {
    if (v > 0.0) acc.add(std::pow(v, q / p));
  }
  return {std::pow(acc.value(), 1.0 / q), met};
}

NormResult t1_rhs(const Tuple& fs, const std::vector<double>& p, const std::vector<double>& q, double alpha,
                  const WhitneyDecomposition& d, const QuadratureConfig& cfg) {
  if (fs.empty()) throw ParameterError("function tuple must be nonempty");
  if (p.size() != fs.size() || q.size() != fs.size()) throw ParameterError("exponent vectors must match the tuple");
  double inv = 0.0;
  for (double x : q) {
    require_positive(x, "q_i");
    inv += 1.0 / x;
  }
  if (std::abs(inv - 1.0) > 1e-12) {
    throw ParameterError(fmt::format("constraint violated: sum 1/q_i = 1 (got {})", inv));
  }
  for (std::size_t i = 0; i < fs.size(); ++i) require_bergman_convergence(fs[i], p[i], alpha);
  if (any_zero(fs)) return {};
  NormResult out{1.0, true};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const HarmonicFunction& f = fs[i];
    const double pi = p[i];
    bool met = true;
    const std::vector<double> per = integrate_per_cube(
        [&](const Point& z) { return abs_pow(f(z), pi) * t_pow(z.t(), alpha); }, d, CubeRegion::kEnlarged, cfg, &met);
    CompensatedSum acc;
    for (double v : per) acc.add(abs_pow(v, q[i]));
    out.value *= std::pow(acc.value(), 1.0 / q[i]);
    out.tolerance_met = out.tolerance_met && met;
  }
  return out;
}

double local_cube_integral(const HarmonicFunction& f, double sigma, double alpha, const Point& w, int order) {
  const LocalCube q = local_cube(w, LocalCubeKind::kQ);
  return tensor_rule([&](const Point& z) { return abs_pow(f(z), sigma) * t_pow(z.t(), alpha); }, q.box(), order);
}

NormResult local_mean_functional(const HarmonicFunction& f, double sigma, double alpha, double e,
                                 const WhitneyDecomposition& d, const QuadratureConfig& cfg) {
  require_positive(sigma, "sigma");
  require_positive(e, "e");
  if (!(alpha > -1.0)) throw ParameterError(fmt::format("constraint violated: alpha > -1 (got {})", alpha));
  if (f.is_zero()) return {};
  const int n = f.n();
  // Inner value behaves like s^(n+1+alpha) rho^(-sigma decay); the outer
  // integral needs e (sigma decay - n - 1 - alpha) > n + 1.
  const double outer_decay = e * (sigma * f.decay_order() - (n + 1 + alpha));
  if (!(outer_decay > n + 1)) {
    throw RejectedConfigurationError(
        fmt::format("local mean functional diverges at infinity: e (sigma decay - n - 1 - alpha) = {} must exceed {}",
                    outer_decay, n + 1));
  }
  if (f.boundary_singularity() > 0.0) {
    throw RejectedConfigurationError("local mean functional needs functions bounded near the boundary");
  }
  const int order = std::max(3, cfg.nodes_per_axis + 1);
  const QuadResult r = integrate_halfspace(
      [&](const Point& w) { return std::pow(local_cube_integral(f, sigma, alpha, w, order), e); }, d, cfg);
  return {r.value, r.tolerance_met};
}

double sup_on_box(const HarmonicFunction& f, const Box& box, int order) {
  const GaussRule& g = gauss_legendre(order);
  const int c = box.lo.coords();
  double best = 0.0;
  // Gauss nodes of the tensor rule.
  std::array<int, kMaxCoords> idx{};
  while (true) {
    Point z = box.lo;
    for (int a = 0; a < c; ++a) {
      z[a] = 0.5 * (box.lo[a] + box.hi[a]) + 0.5 * (box.hi[a] - box.lo[a]) * g.nodes[idx[a]];
    }
    best = std::max(best, std::abs(f(z)));
    int a = c - 1;
    while (a >= 0 && ++idx[a] == order) {
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  // Corners.
  for (unsigned mask = 0; mask < (1u << c); ++mask) {
    Point z = box.lo;
    for (int a = 0; a < c; ++a) z[a] = (mask & (1u << a)) ? box.hi[a] : box.lo[a];
    best = std::max(best, std::abs(f(z)));
  }
  return best;
}

}  // namespace hc
