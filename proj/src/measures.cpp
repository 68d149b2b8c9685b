#include "hcarleson/measures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hc {

namespace {

double weight_pow(double t, double gamma) {
  if (gamma == 0.0) return 1.0;
  if (gamma == std::floor(gamma) && std::abs(gamma) <= 16.0) {
    auto k = static_cast<int>(std::abs(gamma));
    double r = 1.0;
    double b = t;
    while (k > 0) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return gamma > 0.0 ? r : 1.0 / r;
  }
  return std::pow(t, gamma);
}

// Box intersection; returns false when the overlap has zero volume on an
// axis that is nondegenerate in `a`.
bool intersect(const Box& a, const Box& b, Box& out) {
  out = a;
  for (int i = 0; i < a.lo.coords(); ++i) {
    out.lo[i] = std::max(a.lo[i], b.lo[i]);
    out.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (out.hi[i] < out.lo[i]) return false;
    if (a.hi[i] > a.lo[i] && out.hi[i] == out.lo[i]) return false;
  }
  return true;
}

// Index range of cube centers (k + 1/2) h inside [lo, hi), clipped to the
// lattice [kmin, kmax].
std::pair<std::int64_t, std::int64_t> center_range(double lo, double hi, double h, std::int64_t kmin,
                                                   std::int64_t kmax) {
  const auto first = static_cast<std::int64_t>(std::ceil(lo / h - 0.5));
  auto last = static_cast<std::int64_t>(std::ceil(hi / h - 0.5)) - 1;
  return {std::max(first, kmin), std::min(last, kmax)};
}

}  // namespace

namespace detail {

void cube_power_atoms(const CubePower& cp, const Box& region, const std::function<void(const Point&, double)>& visit) {
  const WhitneyDecomposition d(cp.window);
  const int n = d.n();
  if (region.n() != n) return;
  for (int j = d.level_min(); j <= d.level_max(); ++j) {
    const double h = std::ldexp(1.0, j);
    const double eta = 1.5 * h;
    if (eta < region.lo.t() || eta >= region.hi.t()) continue;
    const std::int64_t kmin = d.index_min(j);
    const std::int64_t kmax = kmin + d.per_axis(j) - 1;
    std::array<std::pair<std::int64_t, std::int64_t>, kMaxDim> range{};
    bool empty = false;
    for (int a = 0; a < n; ++a) {
      range[a] = center_range(region.lo.x(a), region.hi.x(a), h, kmin, kmax);
      if (range[a].second < range[a].first) empty = true;
    }
    if (empty) continue;
    const double m = std::pow(eta, cp.e);
    std::array<std::int64_t, kMaxDim> k{};
    for (int a = 0; a < n; ++a) k[a] = range[a].first;
    Point z = Point::uniform(n, 0.0, eta);
    while (true) {
      for (int a = 0; a < n; ++a) z.x(a) = (static_cast<double>(k[a]) + 0.5) * h;
      visit(z, m);
      int a = n - 1;
      while (a >= 0 && ++k[a] > range[a].second) {
        k[a] = range[a].first;
        --a;
      }
      if (a < 0) break;
    }
  }
}

}  // namespace detail

Measure Measure::m_lambda(double gamma, std::optional<Box> window) {
  if (!(gamma > -1.0)) throw ParameterError(fmt::format("m_lambda needs gamma > -1, got {}", gamma));
  return Measure(WeightedLebesgue{gamma, std::move(window)});
}

Measure Measure::atomic(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(a.mass >= 0.0)) throw ParameterError("atom masses must be nonnegative");
    if (!a.at.in_upper_half_space()) throw DomainError("atoms must lie in the upper half-space");
  }
  return Measure(AtomicMeasure{std::move(atoms)});
}

Measure Measure::cube_power(double e, const Window& window) {
  if (!std::isfinite(e)) throw ParameterError("cube_power exponent must be finite");
  (void)WhitneyDecomposition(window);  // validates the window
  return Measure(CubePower{e, window});
}

bool Measure::is_zero() const {
  if (const auto* a = std::get_if<AtomicMeasure>(&rep_)) {
    return std::all_of(a->atoms.begin(), a->atoms.end(), [](const Atom& x) { return x.mass == 0.0; });
  }
  return false;
}

std::string Measure::describe() const {
  if (const auto* w = std::get_if<WeightedLebesgue>(&rep_)) return fmt::format("m_lambda(gamma={})", w->gamma);
  if (const auto* a = std::get_if<AtomicMeasure>(&rep_)) return fmt::format("atomic({} atoms)", a->atoms.size());
  const auto& cp = std::get<CubePower>(rep_);
  return fmt::format("cube_power(e={}, {})", cp.e, cp.window.describe());
}

double Measure::mass(const Box& region) const {
  if (const auto* w = std::get_if<WeightedLebesgue>(&rep_)) {
    Box b = region;
    if (w->window && !intersect(region, *w->window, b)) return 0.0;
    double v = 1.0;
    for (int i = 0; i < b.n(); ++i) v *= b.hi.x(i) - b.lo.x(i);
    const double lo = std::max(0.0, b.lo.t());
    const double hi = std::max(0.0, b.hi.t());
    const double g1 = w->gamma + 1.0;
    return v * (weight_pow(hi, g1) - weight_pow(lo, g1)) / g1;
  }
  if (const auto* cp = std::get_if<CubePower>(&rep_)) {
    // Closed form: count centers per level instead of visiting them.
    const WhitneyDecomposition d(cp->window);
    if (region.n() != d.n()) return 0.0;
    double total = 0.0;
    for (int j = d.level_min(); j <= d.level_max(); ++j) {
      const double h = std::ldexp(1.0, j);
      const double eta = 1.5 * h;
      if (eta < region.lo.t() || eta >= region.hi.t()) continue;
      const std::int64_t kmin = d.index_min(j);
      const std::int64_t kmax = kmin + d.per_axis(j) - 1;
      double count = 1.0;
      for (int a = 0; a < d.n(); ++a) {
        const auto [first, last] = center_range(region.lo.x(a), region.hi.x(a), h, kmin, kmax);
        count *= static_cast<double>(std::max<std::int64_t>(0, last - first + 1));
      }
      total += count * std::pow(eta, cp->e);
    }
    return total;
  }
  double total = 0.0;
  for_each_atom(region, [&](const Point&, double m) { total += m; });
  return total;
}

double Measure::mass(const Slab& s, const Window& w) const {
  Box b{Point::uniform(w.n, -w.x_half_width, s.t_lo()), Point::uniform(w.n, w.x_half_width, s.t_hi())};
  return mass(b);
}

QuadResult Measure::integrate(const Integrand& g, const Box& region, const QuadratureConfig& cfg) const {
  if (const auto* w = std::get_if<WeightedLebesgue>(&rep_)) {
    Box b = region;
    if (w->window && !intersect(region, *w->window, b)) return QuadResult{};
    const double gamma = w->gamma;
    if (gamma == 0.0) return integrate_box(g, b, cfg);
    return integrate_box([&](const Point& z) { return g(z) * weight_pow(z.t(), gamma); }, b, cfg);
  }
  CompensatedSum acc;
  for_each_atom(region, [&](const Point& z, double m) { acc.add(m * g(z)); });
  return QuadResult{acc.value(), true, 0};
}

std::vector<double> mu_per_cube(const Integrand& g, const Measure& mu, const WhitneyDecomposition& d,
                                const QuadratureConfig& cfg, bool* tolerance_met) {
  if (const auto* w = std::get_if<WeightedLebesgue>(&mu.rep())) {
    if (!w->window) {
      const double gamma = w->gamma;
      if (gamma == 0.0) return integrate_per_cube(g, d, CubeRegion::kCube, cfg, tolerance_met);
      return integrate_per_cube([&](const Point& z) { return g(z) * weight_pow(z.t(), gamma); }, d,
                                CubeRegion::kCube, cfg, tolerance_met);
    }
    std::vector<char> met(d.size(), 1);
    std::vector<double> out = parallel_map(d.size(), cfg.workers, [&](std::size_t i) {
      const QuadResult r = mu.integrate(g, d[i].box(), cfg);
      met[i] = r.tolerance_met ? 1 : 0;
      return r.value;
    });
    if (tolerance_met != nullptr) {
      *tolerance_met = std::all_of(met.begin(), met.end(), [](char c) { return c != 0; });
    }
    return out;
  }
  // Discrete measures: route every atom in the window to the cube holding it
  // (half-open), accumulating in atom order.
  std::vector<CompensatedSum> acc(d.size());
  const Box window = d.window().box();
  mu.for_each_atom(window, [&](const Point& z, double m) { acc[d.locate(z)].add(m * g(z)); });
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = acc[i].value();
  if (tolerance_met != nullptr) *tolerance_met = true;
  return out;
}

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::kT1: return "T1";
    case TheoremId::kT2: return "T2";
    case TheoremId::kT3B: return "T3B";
    case TheoremId::kT3F: return "T3F";
    case TheoremId::kT4: return "T4";
    case TheoremId::kT5: return "T5";
    case TheoremId::kT8: return "T8";
  }
  return "?";
}

TheoremId parse_theorem(const std::string& name) {
  for (TheoremId id : {TheoremId::kT1, TheoremId::kT2, TheoremId::kT3B, TheoremId::kT3F, TheoremId::kT4,
                       TheoremId::kT5, TheoremId::kT8}) {
    if (theorem_name(id) == name) return id;
  }
  throw ParameterError(fmt::format("unknown theorem id '{}'", name));
}

namespace {

void require_size(const std::vector<double>& v, int m, const char* name) {
  if (static_cast<int>(v.size()) != m) {
    throw ParameterError(fmt::format("{} must have m={} entries, got {}", name, m, v.size()));
  }
}

void require_all(const std::vector<double>& v, const char* constraint, auto pred) {
  for (double x : v) {
    if (!pred(x)) throw ParameterError(fmt::format("constraint violated: {} (value {})", constraint, x));
  }
}

}  // namespace

void TheoremParams::validate(TheoremId id) const {
  require_dimension(n);
  if (m < 1) throw ParameterError("constraint violated: m >= 1");
  switch (id) {
    case TheoremId::kT1: {
      require_size(p_i, m, "p_i");
      require_size(q_i, m, "q_i");
      require_all(p_i, "p_i > 0", [](double x) { return x > 0.0; });
      require_all(q_i, "q_i > 0", [](double x) { return x > 0.0; });
      double inv = 0.0;
      for (double x : q_i) inv += 1.0 / x;
      if (std::abs(inv - 1.0) > 1e-12) {
        throw ParameterError(fmt::format("constraint violated: sum 1/q_i = 1 (got {})", inv));
      }
      if (!(alpha > -1.0)) throw ParameterError("constraint violated: alpha > -1");
      break;
    }
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F: {
      if (!(p > 0.0 && q > 0.0)) throw ParameterError("constraint violated: 0 < p, q");
      if (!(s > 0.0 && s <= q)) throw ParameterError("constraint violated: 0 < s <= q");
      require_size(beta_i, m, "beta_i");
      require_all(beta_i, "beta_i > -1", [](double x) { return x > -1.0; });
      if (id != TheoremId::kT2) {
        require_size(t_i, m, "t_i");
        const double sv = s;
        require_all(t_i, "0 < t_i <= s", [sv](double x) { return x > 0.0 && x <= sv; });
      }
      break;
    }
    case TheoremId::kT4: {
      if (!(p > 0.0 && q > 0.0)) throw ParameterError("constraint violated: 0 < p, q");
      require_size(sigma_i, m, "sigma_i");
      require_size(alpha_i, m, "alpha_i");
      const double qv = q;
      require_all(sigma_i, "0 < sigma_i <= q", [qv](double x) { return x > 0.0 && x <= qv; });
      require_all(alpha_i, "alpha_i > -1", [](double x) { return x > -1.0; });
      break;
    }
    case TheoremId::kT5: {
      require_size(p_i, m, "p_i");
      require_size(sigma_i, m, "sigma_i");
      require_size(alpha_i, m, "alpha_i");
      require_all(p_i, "p_i > 0", [](double x) { return x > 0.0; });
      require_all(sigma_i, "sigma_i > 0", [](double x) { return x > 0.0; });
      require_all(alpha_i, "alpha_i > -1", [](double x) { return x > -1.0; });
      break;
    }
    case TheoremId::kT8: {
      if (m != 1) throw ParameterError("constraint violated: T8 concerns a single function (m = 1)");
      if (!(alpha > -1.0)) throw ParameterError("constraint violated: alpha > -1");
      if (!(p > 0.0 && p <= q)) throw ParameterError("constraint violated: 0 < p <= q");
      break;
    }
  }
}

double required_exponent(TheoremId id, const TheoremParams& params) {
  params.validate(id);
  const double n1 = params.n + 1.0;
  double e = 0.0;
  switch (id) {
    case TheoremId::kT1:
      // |cube|^(m(1 + alpha/(n+1))) with |cube| proportional to eta^(n+1).
      return params.m * (n1 + params.alpha);
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F:
      for (double b : params.beta_i) e += params.p * (n1 + b) / params.s;
      return e;
    case TheoremId::kT4:
      e = params.m * n1 * params.p / params.q;
      for (int i = 0; i < params.m; ++i) e += params.p * (n1 + params.alpha_i[i]) / params.sigma_i[i];
      return e;
    case TheoremId::kT5:
      e = params.m * n1;
      for (int i = 0; i < params.m; ++i) e += params.p_i[i] * (n1 + params.alpha_i[i]) / params.sigma_i[i];
      return e;
    case TheoremId::kT8:
      return n1 + params.alpha;
  }
  return e;
}

namespace {

std::vector<double> mass_per_cube(const Measure& mu, const WhitneyDecomposition& d) {
  if (std::holds_alternative<WeightedLebesgue>(mu.rep())) {
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = mu.mass(d[i]);
    return out;
  }
  return mu_per_cube([](const Point&) { return 1.0; }, mu, d, QuadratureConfig{});
}

}  // namespace

CarlesonReport carleson_sweep(const Measure& mu, const WhitneyDecomposition& d, double exponent) {
  if (!std::isfinite(exponent)) throw ParameterError("Carleson exponent must be finite");
  CarlesonReport r;
  r.exponent = exponent;
  r.ratios = mass_per_cube(mu, d);
  for (int j = d.level_min(); j <= d.level_max(); ++j) {
    const double eta_e = std::pow(1.5 * std::ldexp(1.0, j), exponent);
    double best = 0.0;
    for (std::size_t i = d.level_begin(j); i < d.level_end(j); ++i) {
      r.ratios[i] /= eta_e;
      best = std::max(best, r.ratios[i]);
      if (r.ratios[i] > r.sup_ratio) {
        r.sup_ratio = r.ratios[i];
        r.argmax = i;
      }
    }
    r.levels.push_back(j);
    r.level_max.push_back(best);
  }
  for (std::size_t i = 0; i + 1 < r.level_max.size(); ++i) {
    const double a = r.level_max[i];
    const double b = r.level_max[i + 1];
    r.trend.push_back(b == 0.0 ? (a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()) : a / b);
  }
  return r;
}

double theorem7_sum(const Measure& mu, const WhitneyDecomposition& d, double p, double q, double alpha) {
  if (!(p > 0.0 && p < q)) throw ParameterError(fmt::format("constraint violated: 0 < p < q (p={}, q={})", p, q));
  if (!(alpha > 0.0)) throw ParameterError(fmt::format("constraint violated: alpha > 0 (alpha={})", alpha));
  const int n = d.n();
  const double eta_exp = -(alpha * q * n + n) * p / (q - p);
  const double mu_exp = q / (q - p);
  const std::vector<double> masses = mass_per_cube(mu, d);
  CompensatedSum acc;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (masses[i] == 0.0) continue;
    acc.add(std::pow(d[i].eta(), eta_exp) * std::pow(masses[i], mu_exp));
  }
  return acc.value();
}

}  // namespace hc
