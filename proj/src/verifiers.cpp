#include "hcarleson/verifiers.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <map>

#include "hcarleson/random.hpp"

namespace hc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_of(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : kInf;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return Rng::stream(seed, (a << 24) ^ b).next();
}

double t_pow(double t, double e) { return e == 0.0 ? 1.0 : std::pow(t, e); }

double product_of(const std::vector<double>& v) {
  double r = 1.0;
  for (double x : v) r *= x;
  return r;
}

// Sup, min and spread over the positive finite ratios.
void ratio_stats(VerdictReport& r) {
  r.sup_ratio = 0.0;
  r.min_ratio = 0.0;
  double lo = kInf;
  for (const CaseRecord& c : r.cases) {
    if (!(c.ratio > 0.0) || !std::isfinite(c.ratio)) continue;
    r.sup_ratio = std::max(r.sup_ratio, c.ratio);
    lo = std::min(lo, c.ratio);
  }
  if (std::isfinite(lo)) r.min_ratio = lo;
  r.spread = r.min_ratio > 0.0 ? r.sup_ratio / r.min_ratio : 0.0;
}

bool all_positive_finite(const VerdictReport& r) {
  return !r.cases.empty() && std::all_of(r.cases.begin(), r.cases.end(), [](const CaseRecord& c) {
    return c.ratio > 0.0 && std::isfinite(c.ratio);
  });
}

// Bracket verdict used by the two-sided lemma checks.
void bracket_verdict(VerdictReport& r, double bracket) {
  classify_trend(r);
  r.extra["bracket"] = bracket;
  r.verdict = all_positive_finite(r) && r.spread <= bracket ? Verdict::kBounded : Verdict::kFail;
  r.expected = Verdict::kBounded;
}

void add_flag(VerdictReport& r, const std::string& flag) {
  if (std::find(r.flags.begin(), r.flags.end(), flag) == r.flags.end()) r.flags.push_back(flag);
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kBounded: return "bounded";
    case Verdict::kDiverging: return "diverging";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kExactPass: return "exact_pass";
    case Verdict::kFail: return "fail";
  }
  return "inconclusive";
}

Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::kBounded, Verdict::kDiverging, Verdict::kInconclusive, Verdict::kExactPass,
                    Verdict::kFail}) {
    if (verdict_name(v) == s) return v;
  }
  throw ParameterError("unknown verdict '" + s + "'");
}

void VerifierConfig::validate() const {
  const WhitneyDecomposition d(window);
  quad.validate();
  if (probe_level_min > probe_level_max) throw ParameterError("probe level range is empty");
  if (probe_level_min < window.level_min || probe_level_max > window.level_max) {
    throw ParameterError(fmt::format("probe levels [{}, {}] must lie inside the window levels [{}, {}]",
                                     probe_level_min, probe_level_max, window.level_min, window.level_max));
  }
  if (!(trend_tol > 0.0)) throw ParameterError("trend_tol must be positive");
  if (!(stability_tol > 0.0)) throw ParameterError("stability_tol must be positive");
  if (sustained_levels < 1) throw ParameterError("sustained_levels must be at least 1");
}

std::vector<int> VerifierConfig::probe_levels() const {
  std::vector<int> out;
  for (int j = probe_level_min; j <= probe_level_max; ++j) out.push_back(j);
  return out;
}

void FamilySpec::validate() const {
  if (kind != "combo" && kind != "test" && kind != "poisson" && kind != "zero") {
    throw ParameterError("family kind must be one of combo, test, poisson, zero (got '" + kind + "')");
  }
  if (count < 1) throw ParameterError("family must be nonempty");
  if (combo_size < 1) throw ParameterError("combo size must be positive");
  if (l < 0) throw ParameterError("test function order must be nonnegative");
  if (zoo.l_min < 0 || zoo.l_max < zoo.l_min) throw ParameterError("invalid zoo order range");
  if (!(zoo.spread >= 0.0)) throw ParameterError("zoo spread must be nonnegative");
}

json FamilySpec::to_json() const {
  return json{{"kind", kind},
              {"count", count},
              {"combo_size", combo_size},
              {"l", l},
              {"seed", seed},
              {"zoo", {{"l_min", zoo.l_min}, {"l_max", zoo.l_max}, {"allow_poisson", zoo.allow_poisson},
                       {"spread", zoo.spread}}}};
}

HarmonicFunction family_member(const FamilySpec& spec, int n, int index, int slot, const Point& anchor) {
  if (spec.kind == "zero") return HarmonicFunction::zero(n);
  if (spec.kind == "combo") {
    return make_combo(n, sub_seed(spec.seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(slot)),
                      spec.combo_size, anchor, spec.zoo);
  }
  // Shifts proportional to the anchor height keep members exact dilates.
  Point c = anchor;
  c.x(0) += 0.5 * (index + slot) * anchor.t();
  if (spec.kind == "test") return HarmonicFunction::test(c, spec.l);
  return HarmonicFunction::poisson(c, anchor.t());
}

void classify_trend(VerdictReport& r) {
  ratio_stats(r);
  r.levels.clear();
  r.level_max.clear();
  r.trend.clear();
  const bool all_zero = std::all_of(r.cases.begin(), r.cases.end(),
                                    [](const CaseRecord& c) { return c.lhs == 0.0 && c.rhs == 0.0; });
  if (r.cases.empty() || all_zero) {
    add_flag(r, "zero family");
    r.verdict = Verdict::kInconclusive;
    return;
  }
  bool finite = true;
  std::map<int, double> per_level;
  for (const CaseRecord& c : r.cases) {
    if (!std::isfinite(c.ratio)) finite = false;
    const double v = std::pow(c.ratio, 1.0 / r.kappa);
    auto [it, inserted] = per_level.emplace(c.level, v);
    if (!inserted) it->second = std::max(it->second, v);
  }
  for (const auto& [j, v] : per_level) {
    r.levels.push_back(j);
    r.level_max.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < r.level_max.size(); ++i) {
    const double a = r.level_max[i];
    const double b = r.level_max[i + 1];
    r.trend.push_back(b == 0.0 ? (a == 0.0 ? 1.0 : kInf) : a / b);
  }
  if (!finite) {
    add_flag(r, "non-finite ratio");
    r.verdict = Verdict::kInconclusive;
    return;
  }
  if (r.trend.empty()) {
    add_flag(r, "single level");
    r.verdict = Verdict::kInconclusive;
    return;
  }
  const double hi = 1.0 + r.trend_tol;
  const bool bounded = std::all_of(r.trend.begin(), r.trend.end(), [&](double x) { return x <= hi && x >= 1.0 / hi; });
  int run = 0;
  int best_run = 0;
  for (double x : r.trend) {
    run = x >= r.growth_floor ? run + 1 : 0;
    best_run = std::max(best_run, run);
  }
  if (bounded) {
    r.verdict = Verdict::kBounded;
  } else if (r.growth_floor > 1.0 && best_run >= r.sustained_levels) {
    r.verdict = Verdict::kDiverging;
  } else {
    r.verdict = Verdict::kInconclusive;
  }
}

json params_to_json(const TheoremParams& p) {
  return json{{"n", p.n},         {"m", p.m},         {"p", p.p},
              {"q", p.q},         {"alpha", p.alpha}, {"s", p.s},
              {"p_i", p.p_i},     {"q_i", p.q_i},     {"beta_i", p.beta_i},
              {"t_i", p.t_i},     {"sigma_i", p.sigma_i}, {"alpha_i", p.alpha_i}};
}

json lemma_params_to_json(const LemmaParams& p) {
  return json{{"alpha", p.alpha},   {"gamma", p.gamma},       {"scales", p.scales},   {"s", p.s},
              {"beta", p.beta},     {"p", p.p},               {"tau", p.tau},         {"s_i", p.s_i},
              {"p_i", p.p_i},       {"q_i", p.q_i},           {"lambdas", p.lambdas}, {"herz_q", p.herz_q},
              {"functions", p.functions}, {"bracket", p.bracket}, {"slope_tol", p.slope_tol},
              {"samples", p.samples}};
}

// ---------------------------------------------------------------------------
// Embedding theorems

double theorem_kappa(TheoremId id, const TheoremParams& params) {
  switch (id) {
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F:
    case TheoremId::kT8:
      return 1.0 / params.p;
    case TheoremId::kT4:
      return params.q / params.p;
    case TheoremId::kT1:
    case TheoremId::kT5:
      return 1.0;
  }
  return 1.0;
}

int tuple_size(TheoremId id, const TheoremParams& params) {
  if (id == TheoremId::kT8) return 1;
  if (id == TheoremId::kT1) return static_cast<int>(params.p_i.size());
  return params.m;
}

namespace {

bool order_admissible(TheoremId id, const TheoremParams& P, int l) {
  const int n = P.n;
  const double d = n - 1 + l;
  switch (id) {
    case TheoremId::kT1:
      return std::all_of(P.p_i.begin(), P.p_i.end(), [&](double p) { return p * d > n + 1 + P.alpha; });
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F:
      return std::all_of(P.beta_i.begin(), P.beta_i.end(), [&](double b) { return P.s * d > n + b + 1; });
    case TheoremId::kT4:
      for (int i = 0; i < P.m; ++i) {
        if (!(P.q * d > P.q * (n + 1 + P.alpha_i[i]) / P.sigma_i[i] + n + 1)) return false;
      }
      return true;
    case TheoremId::kT5:
      for (int i = 0; i < P.m; ++i) {
        if (!(P.p_i[i] * d > n + 1 + P.p_i[i] * (n + 1 + P.alpha_i[i]) / P.sigma_i[i])) return false;
      }
      return true;
    case TheoremId::kT8:
      return P.p * d > P.alpha + n + 1;
  }
  return false;
}

std::string order_constraint(TheoremId id) {
  switch (id) {
    case TheoremId::kT1: return "p_i (n - 1 + l) > n + 1 + alpha";
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F: return "s (n - 1 + l) > n + 1 + beta_i";
    case TheoremId::kT4: return "q (n - 1 + l) > q (n + 1 + alpha_i) / sigma_i + n + 1";
    case TheoremId::kT5: return "p_i (n - 1 + l) > n + 1 + p_i (n + 1 + alpha_i) / sigma_i";
    case TheoremId::kT8: return "p (n - 1 + l) > alpha + n + 1";
  }
  return "";
}

// Weighted measures integrate over the whole half-space; the product must
// decay fast enough for that integral to exist.
void require_weighted_product(const Tuple& fs, const std::vector<double>& p, const Measure& mu) {
  const auto* wl = std::get_if<WeightedLebesgue>(&mu.rep());
  if (wl == nullptr) return;
  double decay = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].is_zero()) return;
    decay += p[i] * fs[i].decay_order();
  }
  const int n = fs.front().n();
  if (!(decay > n + 1 + wl->gamma)) {
    throw RejectedConfigurationError(
        fmt::format("constraint violated: sum p_i decay_i = {} must exceed n + 1 + gamma = {}", decay,
                    n + 1 + wl->gamma));
  }
}

double mu_product_integral(const Tuple& fs, const std::vector<double>& p, const Measure& mu,
                           const WhitneyDecomposition& d, const QuadratureConfig& cfg, bool& met) {
  require_weighted_product(fs, p, mu);
  if (mu.is_zero() || std::any_of(fs.begin(), fs.end(), [](const HarmonicFunction& f) { return f.is_zero(); })) {
    return 0.0;
  }
  bool ok = true;
  const std::vector<double> per = mu_per_cube(
      [&](const Point& z) {
        double v = 1.0;
        for (std::size_t i = 0; i < fs.size(); ++i) v *= abs_pow(fs[i](z), p[i]);
        return v;
      },
      mu, d, cfg, &ok);
  met = met && ok;
  return compensated_sum(per);
}

}  // namespace

int minimal_test_order(TheoremId id, const TheoremParams& params) {
  params.validate(id);
  for (int l = 0; l <= 32; ++l) {
    if (order_admissible(id, params, l)) return l;
  }
  throw RejectedConfigurationError("no test function order up to 32 satisfies " + order_constraint(id));
}

CaseValues evaluate_embedding(TheoremId id, const TheoremParams& P, const Measure& mu, const Tuple& fs,
                              const WhitneyDecomposition& d, const QuadratureConfig& cfg) {
  if (static_cast<int>(fs.size()) != tuple_size(id, P)) {
    throw ParameterError(fmt::format("{} needs a tuple of {} functions (got {})", theorem_name(id), tuple_size(id, P),
                                     fs.size()));
  }
  CaseValues out;
  bool& met = out.tolerance_met;
  auto take = [&met](const NormResult& r) {
    met = met && r.tolerance_met;
    return r.value;
  };
  const std::size_t m = fs.size();
  switch (id) {
    case TheoremId::kT1: {
      out.lhs = mu_product_integral(fs, P.p_i, mu, d, cfg, met);
      out.rhs = take(t1_rhs(fs, P.p_i, P.q_i, P.alpha, d, cfg));
      break;
    }
    case TheoremId::kT2:
    case TheoremId::kT3B:
    case TheoremId::kT3F: {
      require_weighted_product(fs, std::vector<double>(m, P.p), mu);
      out.lhs = take(apqm_norm(fs, P.p, P.q, mu, d, cfg));
      std::vector<double> r(m);
      for (std::size_t i = 0; i < m; ++i) {
        if (id == TheoremId::kT2) {
          r[i] = take(norm_A(fs[i], P.s, P.beta_i[i], d, cfg));
        } else if (id == TheoremId::kT3B) {
          r[i] = take(norm_B(fs[i], P.s, P.t_i[i], (P.beta_i[i] + 1.0) / P.s, d.window(), cfg));
        } else {
          r[i] = take(norm_F(fs[i], P.s, P.t_i[i], (P.beta_i[i] + 1.0) / P.s, d.window(), cfg));
        }
      }
      out.rhs = product_of(r);
      break;
    }
    case TheoremId::kT4: {
      require_weighted_product(fs, std::vector<double>(m, P.p), mu);
      out.lhs = std::pow(take(apqm_norm(fs, P.p, P.q, mu, d, cfg)), P.q);
      std::vector<double> r(m);
      for (std::size_t i = 0; i < m; ++i) {
        r[i] = take(local_mean_functional(fs[i], P.sigma_i[i], P.alpha_i[i], P.q / P.sigma_i[i], d, cfg));
      }
      out.rhs = product_of(r);
      break;
    }
    case TheoremId::kT5: {
      out.lhs = mu_product_integral(fs, P.p_i, mu, d, cfg, met);
      std::vector<double> r(m);
      for (std::size_t i = 0; i < m; ++i) {
        r[i] = take(local_mean_functional(fs[i], P.sigma_i[i], P.alpha_i[i], P.p_i[i] / P.sigma_i[i], d, cfg));
      }
      out.rhs = product_of(r);
      break;
    }
    case TheoremId::kT8: {
      require_weighted_product(fs, {P.p}, mu);
      out.lhs = take(norm_K(fs[0], P.p, P.q, mu, slabs_for_window(d.window()), d, cfg));
      out.rhs = take(norm_A(fs[0], P.p, P.alpha, d, cfg));
      break;
    }
  }
  return out;
}

namespace {

Measure follow_window(const Measure& mu, const Window& w) {
  if (const auto* cp = std::get_if<CubePower>(&mu.rep())) return Measure::cube_power(cp->e, w);
  return mu;
}

void sufficiency_cases(TheoremId id, const TheoremParams& P, const Measure& mu, const FamilySpec& family,
                       const VerifierConfig& cfg, const Window& window, std::vector<CaseRecord>& cases, bool& met) {
  const WhitneyDecomposition d(window);
  const int size = tuple_size(id, P);
  for (int j : cfg.probe_levels()) {
    const Point anchor = d.anchor_cube(j).center();
    for (int i = 0; i < family.count; ++i) {
      Tuple fs;
      for (int slot = 0; slot < size; ++slot) fs.push_back(family_member(family, P.n, i, slot, anchor));
      const CaseValues v = evaluate_embedding(id, P, mu, fs, d, cfg.quad);
      met = met && v.tolerance_met;
      cases.push_back({fmt::format("f{}@{}", i, j), j, v.lhs, v.rhs, ratio_of(v.lhs, v.rhs)});
    }
  }
}

}  // namespace

VerdictReport verify_sufficiency(TheoremId id, const TheoremParams& P, const Measure& mu, const FamilySpec& family,
                                 const VerifierConfig& cfg) {
  P.validate(id);
  cfg.validate();
  family.validate();
  if (P.n != cfg.window.n) throw ParameterError("theorem dimension must match the window dimension");
  if (id == TheoremId::kT4 && P.m > 2) throw RejectedConfigurationError("T4 is implemented for m in {1, 2} only");
  const double E = required_exponent(id, P);
  const Measure mu_w = follow_window(mu, cfg.window);

  VerdictReport r;
  r.theorem_id = theorem_name(id) + "/sufficiency";
  r.params = params_to_json(P);
  r.window = cfg.window.describe();
  r.family = family.to_json();
  r.kappa = theorem_kappa(id, P);
  r.trend_tol = cfg.trend_tol;
  r.growth_floor = 1.0;
  r.sustained_levels = cfg.sustained_levels;
  r.expected = Verdict::kBounded;
  r.extra["measure"] = mu_w.describe();
  r.extra["required_exponent"] = E;

  // Precondition: the measure satisfies the Carleson condition at E.
  if (!mu_w.is_zero()) {
    const CarlesonReport cr = carleson_sweep(mu_w, WhitneyDecomposition(cfg.window), E);
    for (double t : cr.trend) {
      if (!(t <= 1.0 + cfg.trend_tol && t >= 1.0 / (1.0 + cfg.trend_tol))) {
        throw RejectedConfigurationError(fmt::format(
            "measure fails the Carleson condition at exponent E = {}: level trend {} outside [1/(1+tol), 1+tol]", E,
            t));
      }
    }
    r.extra["carleson_sup"] = cr.sup_ratio;
  }

  bool met = true;
  sufficiency_cases(id, P, mu_w, family, cfg, cfg.window, r.cases, met);
  r.tolerance_met = met;
  classify_trend(r);

  if (cfg.check_stability && r.verdict == Verdict::kBounded) {
    const Window grown = grow(cfg.window, cfg.growth);
    VerdictReport g;
    bool met2 = true;
    sufficiency_cases(id, P, follow_window(mu, grown), family, cfg, grown, g.cases, met2);
    ratio_stats(g);
    r.window_change = r.sup_ratio > 0.0 ? std::abs(g.sup_ratio / r.sup_ratio - 1.0) : 0.0;
    r.extra["grown_window"] = grown.describe();
    r.extra["grown_sup_ratio"] = g.sup_ratio;
    r.extra["stability_tol"] = cfg.stability_tol;
    if (*r.window_change > cfg.stability_tol) {
      add_flag(r, "window-unstable");
      r.verdict = Verdict::kInconclusive;
    }
  }
  if (!r.tolerance_met) add_flag(r, "quadrature tolerance not met");
  return r;
}

ThetaChoice choose_theta(const Cube& cube, const Measure& mu, int l, double c_lower, int candidates,
                         std::uint64_t seed) {
  if (candidates < 1) throw ParameterError("need at least one theta candidate");
  const int n = cube.n();
  const Point zeta = cube.center();
  const double eta = cube.eta();
  const Box box = cube.box();
  const int dec = n - 1 + l;

  // Sample points of the cube with their share of the cube's mass.
  std::vector<std::pair<Point, double>> pts;
  if (mu.is_discrete()) {
    mu.for_each_atom(box, [&](const Point& z, double m) { pts.emplace_back(z, m); });
  } else {
    const auto& wl = std::get<WeightedLebesgue>(mu.rep());
    constexpr int kSamples = 256;
    double total = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      Point z = box.lo;
      for (int a = 0; a < z.coords(); ++a) {
        z[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * halton(static_cast<std::uint64_t>(i + 1), kHaltonPrimes[a]);
      }
      const double w = t_pow(z.t(), wl.gamma);
      pts.emplace_back(z, w);
      total += w;
    }
    const double m = mu.mass(box);
    for (auto& pr : pts) pr.second *= m / total;
  }

  ThetaChoice best;
  best.theta = zeta;
  best.captured = -1.0;
  for (const auto& pr : pts) best.cube_mass += pr.second;
  Rng rng = Rng::stream(seed, 0x7E7A);
  for (int c = 0; c < candidates; ++c) {
    Point th = zeta;
    if (c > 0) {
      for (int a = 0; a < n; ++a) th.x(a) = zeta.x(a) + eta * rng.uniform(-0.5, 0.5);
      th.t() = eta * std::exp2(rng.uniform(-1.0, 1.0));
    }
    const HarmonicFunction f = HarmonicFunction::test(th, l);
    const Box q = local_cube(th, LocalCubeKind::kQ).box();
    double captured = 0.0;
    for (const auto& [z, m] : pts) {
      if (!q.contains(z)) continue;
      if (std::abs(f(z)) * std::pow(reflected_distance(z, th), dec) > c_lower) captured += m;
    }
    if (captured > best.captured) {
      best.captured = captured;
      best.theta = th;
    }
  }
  best.tw_fraction = tw_fraction(best.theta, l, 4096, c_lower, seed).fraction;
  return best;
}

VerdictReport verify_necessity(TheoremId id, const TheoremParams& P, double epsilon, int l, const VerifierConfig& cfg,
                               std::optional<double> growth_floor) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError(fmt::format("constraint violated: epsilon > 0 (epsilon = 0 is the control run; got {})",
                                     epsilon));
  }
  P.validate(id);
  cfg.validate();
  if (P.n != cfg.window.n) throw ParameterError("theorem dimension must match the window dimension");
  if (id == TheoremId::kT4 && P.m > 2) throw RejectedConfigurationError("T4 is implemented for m in {1, 2} only");
  if (l < 0) {
    l = minimal_test_order(id, P);
  } else if (!order_admissible(id, P, l)) {
    throw RejectedConfigurationError(fmt::format("constraint violated: {} (l = {})", order_constraint(id), l));
  }
  const double E = required_exponent(id, P);
  const Measure mu = Measure::cube_power(E - epsilon, cfg.window);
  const WhitneyDecomposition d(cfg.window);

  VerdictReport r;
  r.theorem_id = theorem_name(id) + (epsilon > 0.0 ? "/necessity" : "/necessity-control");
  r.params = params_to_json(P);
  r.params["epsilon"] = epsilon;
  r.window = cfg.window.describe();
  r.family = json{{"kind", "test"}, {"l", l}, {"centers", "cube centers"}};
  r.kappa = theorem_kappa(id, P);
  r.trend_tol = cfg.trend_tol;
  r.growth_floor = growth_floor.value_or(std::exp2(std::max(epsilon, 0.5) / 2.0));
  r.sustained_levels = cfg.sustained_levels;
  r.expected = epsilon > 0.0 ? Verdict::kDiverging : Verdict::kBounded;
  r.extra["measure"] = mu.describe();
  r.extra["required_exponent"] = E;
  r.extra["epsilon"] = epsilon;

  const bool t_sets = id == TheoremId::kT4 || id == TheoremId::kT5;
  double c_lower = 0.0;
  if (t_sets) {
    c_lower = calibrate_c_lower(P.n, l);
    r.extra["c_lower"] = c_lower;
  }
  const int size = tuple_size(id, P);
  json thetas = json::array();
  bool met = true;
  for (int j : cfg.probe_levels()) {
    const Cube cube = d.anchor_cube(j);
    Point theta = cube.center();
    if (t_sets) {
      const ThetaChoice tc = choose_theta(cube, mu, l, c_lower, 16, sub_seed(cfg.seed, 0x7E, static_cast<std::uint64_t>(j + 1024)));
      theta = tc.theta;
      thetas.push_back({{"level", j}, {"theta", std::vector<double>(tc.theta.all().begin(), tc.theta.all().end())},
                        {"captured", tc.captured}, {"cube_mass", tc.cube_mass}, {"tw_fraction", tc.tw_fraction}});
      if (tc.captured <= 0.0) add_flag(r, "T-set misses the cube mass");
      if (tc.tw_fraction < 0.25) add_flag(r, "T-set fraction below 0.25");
    }
    const Tuple fs(static_cast<std::size_t>(size), HarmonicFunction::test(theta, l));
    const CaseValues v = evaluate_embedding(id, P, mu, fs, d, cfg.quad);
    met = met && v.tolerance_met;
    r.cases.push_back({fmt::format("theta@{}", j), j, v.lhs, v.rhs, ratio_of(v.lhs, v.rhs)});
  }
  if (t_sets) r.extra["theta"] = thetas;
  r.tolerance_met = met;
  if (!met) add_flag(r, "quadrature tolerance not met");
  classify_trend(r);
  return r;
}

NecessityPair verify_necessity_pair(TheoremId id, const TheoremParams& params, double epsilon, int l,
                                    const VerifierConfig& cfg) {
  if (!(epsilon > 0.0)) throw ParameterError(fmt::format("constraint violated: epsilon > 0 (got {})", epsilon));
  NecessityPair out;
  out.main = verify_necessity(id, params, epsilon, l, cfg);
  out.control = verify_necessity(id, params, 0.0, l, cfg, out.main.growth_floor);
  const bool ok = out.main.verdict == Verdict::kDiverging && out.control.verdict == Verdict::kBounded;
  out.verdict = ok ? Verdict::kDiverging : Verdict::kInconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Lemma checks

std::string lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::kOmit: return "omit";
    case LemmaId::kIsum: return "isum";
    case LemmaId::kPrepl: return "prepl";
    case LemmaId::kLemmaB: return "lemmaB";
    case LemmaId::kMlam: return "mlam";
    case LemmaId::kDis: return "dis";
    case LemmaId::kHeight: return "height";
    case LemmaId::kEqL4: return "eqL4";
    case LemmaId::kKpqmon: return "kpqmon";
    case LemmaId::kHardyProp: return "hardy_prop";
    case LemmaId::kCorollary1: return "corollary1";
    case LemmaId::kCorollary2: return "corollary2";
  }
  return "";
}

LemmaId parse_lemma(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(LemmaId::kCorollary2); ++i) {
    const auto id = static_cast<LemmaId>(i);
    if (lemma_name(id) == name) return id;
  }
  throw ParameterError("unknown lemma '" + name + "'");
}

LemmaParams default_lemma_params(LemmaId id) {
  LemmaParams p;
  if (id == LemmaId::kLemmaB || id == LemmaId::kPrepl) p.alpha = 0.5;
  if (id == LemmaId::kCorollary2) {
    p.s_i = {0.5, 0.5};
    p.q_i = {1.0, 2.0};
  }
  return p;
}

namespace {

VerdictReport lemma_report(LemmaId id, const LemmaParams& lp, const VerifierConfig& cfg) {
  VerdictReport r;
  r.theorem_id = "lemma/" + lemma_name(id);
  r.params = lemma_params_to_json(lp);
  r.window = cfg.window.describe();
  r.trend_tol = cfg.trend_tol;
  r.sustained_levels = cfg.sustained_levels;
  return r;
}

FamilySpec lemma_family(const LemmaParams& lp, const VerifierConfig& cfg) {
  FamilySpec f;
  f.count = lp.functions;
  f.seed = cfg.seed;
  f.validate();
  return f;
}

VerdictReport check_omit(const LemmaParams& lp, const VerifierConfig& cfg) {
  const int n = cfg.window.n;
  const double a = lp.alpha;
  const double g = lp.gamma;
  if (!(a > -1.0)) throw RejectedConfigurationError("constraint violated: alpha > -1");
  if (!(n + a < 2.0 * g - 1.0)) {
    throw RejectedConfigurationError(
        fmt::format("constraint violated: n + alpha < 2 gamma - 1 (n={}, alpha={}, gamma={})", n, a, g));
  }
  if (lp.scales.size() < 3) throw ParameterError("omit needs at least three scales");
  VerdictReport r = lemma_report(LemmaId::kOmit, lp, cfg);
  const WhitneyDecomposition d(cfg.window);
  const double expected = a + n + 1 - 2.0 * g;
  std::vector<double> values;
  bool met = true;
  for (double s : lp.scales) {
    if (!(s > 0.0)) throw ParameterError("scales must be positive");
    const Point w = Point::uniform(n, 0.0, s);
    const QuadResult q = integrate_halfspace(
        [&](const Point& z) {
          const double rho = reflected_distance(z, w);
          return t_pow(z.t(), a) * std::pow(rho * rho, -g);
        },
        d, cfg.quad);
    met = met && q.tolerance_met;
    values.push_back(q.value);
    const double rhs = std::pow(s, expected);
    r.cases.push_back({fmt::format("s={}", s), static_cast<int>(std::lround(std::log2(s))), q.value, rhs,
                       ratio_of(q.value, rhs)});
  }
  const SlopeFit fit = fit_power_law(lp.scales, values);
  ratio_stats(r);
  r.tolerance_met = met;
  r.extra["slope"] = fit.slope;
  r.extra["intercept"] = fit.intercept;
  r.extra["max_residual"] = fit.max_residual;
  r.extra["expected_slope"] = expected;
  r.extra["slope_tol"] = lp.slope_tol;
  r.extra["sweep"] = {{"scales", lp.scales}, {"values", values}};
  r.verdict = std::abs(fit.slope - expected) <= lp.slope_tol ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

template <class CaseFn>
void function_sweep(VerdictReport& r, const LemmaParams& lp, const VerifierConfig& cfg, CaseFn&& fn) {
  const FamilySpec fam = lemma_family(lp, cfg);
  r.family = fam.to_json();
  const WhitneyDecomposition d(cfg.window);
  for (int j : cfg.probe_levels()) {
    const Cube anchor = d.anchor_cube(j);
    for (int i = 0; i < fam.count; ++i) {
      const HarmonicFunction f = family_member(fam, cfg.window.n, i, 0, anchor.center());
      fn(f, anchor, d, i, j);
    }
  }
}

VerdictReport check_isum(const LemmaParams& lp, const VerifierConfig& cfg) {
  if (!(lp.s > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < s");
  if (!(lp.beta > -1.0)) throw RejectedConfigurationError("constraint violated: beta > -1");
  VerdictReport r = lemma_report(LemmaId::kIsum, lp, cfg);
  const int n = cfg.window.n;
  bool met = true;
  function_sweep(r, lp, cfg, [&](const HarmonicFunction& f, const Cube&, const WhitneyDecomposition& d, int i, int j) {
    require_bergman_convergence(f, lp.s, lp.beta);
    const QuadResult lhs = integrate_halfspace(
        [&](const Point& z) { return abs_pow(f(z), lp.s) * t_pow(z.t(), lp.beta); }, d, cfg.quad);
    met = met && lhs.tolerance_met;
    const std::vector<double> terms = parallel_map(d.size(), cfg.quad.workers, [&](std::size_t k) {
      const Cube c = d[k];
      return std::pow(c.eta(), n + 1 + lp.beta) * abs_pow(sup_on_box(f, c.box(), 3), lp.s);
    });
    const double rhs = compensated_sum(terms);
    r.cases.push_back({fmt::format("f{}@{}", i, j), j, lhs.value, rhs, ratio_of(lhs.value, rhs)});
  });
  r.tolerance_met = met;
  bracket_verdict(r, lp.bracket);
  return r;
}

VerdictReport check_lemmaB(const LemmaParams& lp, const VerifierConfig& cfg) {
  if (!(lp.alpha > 0.0)) throw RejectedConfigurationError("constraint violated: alpha > 0");
  if (!(lp.p > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < p");
  VerdictReport r = lemma_report(LemmaId::kLemmaB, lp, cfg);
  const double w = lp.alpha * lp.p - 1.0;
  bool met = true;
  function_sweep(r, lp, cfg, [&](const HarmonicFunction& f, const Cube& anchor, const WhitneyDecomposition&, int i,
                                 int j) {
    std::vector<std::int32_t> idx(anchor.index().begin(), anchor.index().end());
    for (int shift = 0; shift < 2; ++shift) {
      idx[0] = anchor.index(0) + shift;
      const Cube c(anchor.n(), j, idx);
      const EnlargedCube e{c};
      const double lhs = std::pow(c.eta(), w) * abs_pow(sup_on_box(f, c.box(), 4), lp.p);
      const QuadResult q =
          integrate_box([&](const Point& z) { return t_pow(z.t(), w) * abs_pow(f(z), lp.p); }, e.box(), cfg.quad);
      met = met && q.tolerance_met;
      const double rhs = q.value / e.volume();
      r.cases.push_back({fmt::format("f{}@{}+{}", i, j, shift), j, lhs, rhs, ratio_of(lhs, rhs)});
    }
  });
  r.tolerance_met = met;
  bracket_verdict(r, lp.bracket);
  return r;
}

VerdictReport check_prepl(const LemmaParams& lp, const VerifierConfig& cfg) {
  if (!(lp.alpha > -1.0)) throw RejectedConfigurationError("constraint violated: alpha > -1");
  if (!(lp.tau > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < tau");
  if (!(lp.p > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < p");
  VerdictReport r = lemma_report(LemmaId::kPrepl, lp, cfg);
  const int n = cfg.window.n;
  const int order = std::max(3, cfg.quad.nodes_per_axis + 1);
  bool met = true;
  // u = |f|^p for zoo functions f.
  function_sweep(r, lp, cfg, [&](const HarmonicFunction& f, const Cube& c, const WhitneyDecomposition&, int i, int j) {
    const Box e = EnlargedCube{c}.box();
    const QuadResult inner = integrate_box(
        [&](const Point& z) { return abs_pow(f(z), lp.p) * t_pow(z.t(), lp.alpha); }, e, cfg.quad);
    const double lhs = std::pow(c.eta(), n + 1) * std::pow(inner.value, lp.tau);
    const QuadResult outer = integrate_box(
        [&](const Point& w) { return std::pow(local_cube_integral(f, lp.p, lp.alpha, w, order), lp.tau); }, e,
        cfg.quad);
    met = met && inner.tolerance_met && outer.tolerance_met;
    r.cases.push_back({fmt::format("f{}@{}", i, j), j, lhs, outer.value, ratio_of(lhs, outer.value)});
  });
  r.tolerance_met = met;
  bracket_verdict(r, lp.bracket);
  return r;
}

double mlam_constant(int n, double lambda) {
  const double head = lambda == -1.0 ? std::log(2.0) : (std::exp2(lambda + 1.0) - 1.0) / (lambda + 1.0);
  return head / std::pow(1.5, n + 1 + lambda);
}

VerdictReport check_mlam(const LemmaParams& lp, const VerifierConfig& cfg) {
  if (lp.lambdas.empty()) throw ParameterError("mlam needs at least one lambda");
  VerdictReport r = lemma_report(LemmaId::kMlam, lp, cfg);
  const WhitneyDecomposition d(cfg.window);
  const int n = cfg.window.n;
  constexpr double kTol = 1e-10;
  bool pass = true;
  json per = json::array();
  for (double lam : lp.lambdas) {
    if (!(lam > -1.0)) throw RejectedConfigurationError("constraint violated: lambda > -1");
    const Measure mu = Measure::m_lambda(lam);
    const double c0 = mlam_constant(n, lam);
    double lo = kInf, hi = 0.0, dev = 0.0;
    double elo = kInf, ehi = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Cube c = d[k];
      const double scale = std::pow(c.eta(), n + 1 + lam);
      const double v = mu.mass(c) / scale;
      const double ve = mu.mass(EnlargedCube{c}) / scale;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      elo = std::min(elo, ve);
      ehi = std::max(ehi, ve);
      dev = std::max(dev, std::abs(v / c0 - 1.0));
    }
    const double espread = ehi / elo - 1.0;
    pass = pass && dev <= kTol && espread <= kTol;
    per.push_back({{"lambda", lam}, {"constant", c0}, {"max_rel_deviation", dev}, {"enlarged_rel_spread", espread},
                   {"enlarged_constant", ehi}});
    r.cases.push_back({fmt::format("lambda={}", lam), 0, hi, lo, hi / lo});
  }
  ratio_stats(r);
  r.extra["per_lambda"] = per;
  r.extra["tolerance"] = kTol;
  r.extra["cubes"] = d.size();
  r.verdict = pass ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

// Corners, center and Halton points of a box.
std::vector<Point> box_samples(const Box& b, int halton_count) {
  std::vector<Point> out;
  const int c = b.lo.coords();
  for (unsigned mask = 0; mask < (1u << c); ++mask) {
    Point z = b.lo;
    for (int a = 0; a < c; ++a) z[a] = (mask & (1u << a)) ? b.hi[a] : b.lo[a];
    out.push_back(z);
  }
  out.push_back(b.center());
  for (int i = 1; i <= halton_count; ++i) {
    Point z = b.lo;
    for (int a = 0; a < c; ++a) {
      z[a] = b.lo[a] + (b.hi[a] - b.lo[a]) * halton(static_cast<std::uint64_t>(i), kHaltonPrimes[a]);
    }
    out.push_back(z);
  }
  return out;
}

VerdictReport check_dis(const LemmaParams& lp, const VerifierConfig& cfg) {
  VerdictReport r = lemma_report(LemmaId::kDis, lp, cfg);
  const WhitneyDecomposition d(cfg.window);
  const Window& w = cfg.window;
  const int n = w.n;
  // Fixed probe set spread over the window with log-uniform heights.
  std::vector<Point> probes;
  for (int i = 1; i <= 16; ++i) {
    Point z = Point::uniform(n, 0.0, 1.0);
    for (int a = 0; a < n; ++a) {
      z.x(a) = w.x_half_width * (2.0 * halton(static_cast<std::uint64_t>(i), kHaltonPrimes[a]) - 1.0);
    }
    const double u = halton(static_cast<std::uint64_t>(i), kHaltonPrimes[n]);
    z.t() = w.t_min() * std::pow(w.t_max() / w.t_min(), u);
    probes.push_back(z);
  }
  constexpr double kLo = 1.0 / 3.0;
  constexpr double kHi = 3.0;
  const auto unit = box_samples(Box{Point::uniform(n, 0.0, 0.0), Point::uniform(n, 1.0, 1.0)}, lp.samples);
  double lo = kInf, hi = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Cube c = d[k];
    const Box e = EnlargedCube{c}.box();
    const Point zeta = c.center();
    for (const Point& u : unit) {
      Point wpt = e.lo;
      for (int a = 0; a < wpt.coords(); ++a) wpt[a] = e.lo[a] + (e.hi[a] - e.lo[a]) * u[a];
      for (const Point& z : probes) {
        const double v = reflected_distance(z, wpt) / reflected_distance(z, zeta);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  r.cases.push_back({"min", 0, lo, 1.0, lo});
  r.cases.push_back({"max", 0, hi, 1.0, hi});
  ratio_stats(r);
  r.extra["bracket"] = {kLo, kHi};
  r.extra["observed"] = {lo, hi};
  r.extra["probes"] = probes.size();
  r.extra["points_per_cube"] = unit.size();
  r.verdict = lo >= kLo && hi <= kHi ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

VerdictReport check_height(const LemmaParams& lp, const VerifierConfig& cfg) {
  VerdictReport r = lemma_report(LemmaId::kHeight, lp, cfg);
  const WhitneyDecomposition d(cfg.window);
  const int n = cfg.window.n;
  const double kLo = 7.0 / 12.0 - 5.0 / 48.0;
  const double kHi = 4.0 / 3.0 + 5.0 / 48.0;
  const auto unit = box_samples(Box{Point::uniform(n, 0.0, 0.0), Point::uniform(n, 1.0, 1.0)}, lp.samples);
  double lo = kInf, hi = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Cube c = d[k];
    const Box e = EnlargedCube{c}.box();
    for (const Point& u : unit) {
      const double t = e.lo.t() + (e.hi.t() - e.lo.t()) * u.t();
      lo = std::min(lo, t / c.eta());
      hi = std::max(hi, t / c.eta());
    }
  }
  r.cases.push_back({"min", 0, lo, 1.0, lo});
  r.cases.push_back({"max", 0, hi, 1.0, hi});
  ratio_stats(r);
  r.extra["bracket"] = {kLo, kHi};
  r.extra["observed"] = {lo, hi};
  r.verdict = lo >= kLo && hi <= kHi ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

VerdictReport check_kpqmon(const LemmaParams& lp, const VerifierConfig& cfg) {
  if (lp.herz_q.size() < 2) throw ParameterError("kpqmon needs at least two q values");
  if (!(lp.p > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < p");
  if (!(lp.beta > -1.0)) throw RejectedConfigurationError("constraint violated: beta > -1");
  std::vector<double> qs = lp.herz_q;
  std::sort(qs.begin(), qs.end());
  if (!(qs.front() > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < q");
  VerdictReport r = lemma_report(LemmaId::kKpqmon, lp, cfg);
  const Measure mu = Measure::m_lambda(lp.beta);
  const SlabFamily slabs = slabs_for_window(cfg.window);
  constexpr double kRelTol = 1e-3;
  bool monotone = true;
  double worst_rel = 0.0;
  bool met = true;
  auto check = [&](const HarmonicFunction& f, const WhitneyDecomposition& d, const std::string& id, int j) {
    require_bergman_convergence(f, lp.p, lp.beta);
    bool ok = true;
    const std::vector<double> v = slab_values(f, lp.p, mu, slabs, d, cfg.quad, &ok);
    std::vector<double> k;
    for (double q : qs) k.push_back(herz_aggregate(v, lp.p, q));
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      if (k[i + 1] > k[i]) monotone = false;
    }
    const NormResult a = norm_A(f, lp.p, lp.beta, d, cfg.quad);
    const double ap = std::pow(a.value, lp.p);
    const double kpp = std::pow(herz_aggregate(v, lp.p, lp.p), lp.p);
    worst_rel = std::max(worst_rel, ap > 0.0 ? std::abs(kpp / ap - 1.0) : std::abs(kpp));
    met = met && ok && a.tolerance_met;
    r.cases.push_back({id, j, k.back(), k.front(), ratio_of(k.back(), k.front())});
  };
  function_sweep(r, lp, cfg, [&](const HarmonicFunction& f, const Cube&, const WhitneyDecomposition& d, int i, int j) {
    check(f, d, fmt::format("f{}@{}", i, j), j);
  });
  // Single test functions of each zoo order as well.
  const WhitneyDecomposition d(cfg.window);
  const ZooOptions zoo;
  for (int l = zoo.l_min; l <= zoo.l_max; ++l) {
    check(HarmonicFunction::test(d.anchor_cube(0).center(), l), d, fmt::format("test_l{}", l), 0);
  }
  ratio_stats(r);
  r.tolerance_met = met;
  r.extra["herz_q"] = qs;
  r.extra["monotone"] = monotone;
  r.extra["kpp_vs_a_max_rel"] = worst_rel;
  r.extra["kpp_tolerance"] = kRelTol;
  r.verdict = monotone && worst_rel <= kRelTol ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

// Separable m-tuples recentred at the probe levels.
template <class CaseFn>
void tuple_sweep(VerdictReport& r, const LemmaParams& lp, const VerifierConfig& cfg, std::size_t m, CaseFn&& fn) {
  if (m < 1) throw ParameterError("tuple must be nonempty");
  const FamilySpec fam = lemma_family(lp, cfg);
  r.family = fam.to_json();
  const WhitneyDecomposition d(cfg.window);
  for (int j : cfg.probe_levels()) {
    const Point anchor = d.anchor_cube(j).center();
    for (int i = 0; i < fam.count; ++i) {
      Tuple fs;
      for (std::size_t slot = 0; slot < m; ++slot) {
        fs.push_back(family_member(fam, cfg.window.n, i, static_cast<int>(slot), anchor));
      }
      fn(fs, d, i, j);
    }
  }
}

VerdictReport check_corollary(LemmaId id, const LemmaParams& lp, const VerifierConfig& cfg) {
  const int n = cfg.window.n;
  const std::size_t m = lp.s_i.size();
  std::vector<double> p = lp.p_i;
  if (id == LemmaId::kEqL4) {
    if (!(lp.p > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < p");
    p.assign(m, lp.p);
  }
  if (p.size() != m) throw ParameterError("p_i and s_i must have the same length");
  for (double x : p) {
    if (!(x > 0.0)) throw RejectedConfigurationError("constraint violated: 0 < p_i");
  }
  double sum_s = 0.0, sum_sp = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum_s += lp.s_i[i];
    sum_sp += lp.s_i[i] * p[i];
  }
  double weight = 0.0;
  if (id == LemmaId::kCorollary2) {
    if (lp.q_i.size() != m) throw ParameterError("q_i and s_i must have the same length");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(lp.s_i[i] > 0.0)) throw RejectedConfigurationError("constraint violated: s_i > 0");
      if (!(lp.q_i[i] > 0.0 && lp.q_i[i] <= p[i])) throw RejectedConfigurationError("constraint violated: 0 < q_i <= p_i");
    }
    weight = n * (static_cast<double>(m) - 1.0) + sum_sp - 1.0;
  } else {
    for (double s : lp.s_i) {
      if (!(s > -1.0)) throw RejectedConfigurationError("constraint violated: s_i > -1");
    }
    weight = (n + 1.0) * (static_cast<double>(m) - 1.0) + sum_s;
  }
  VerdictReport r = lemma_report(id, lp, cfg);
  r.extra["weight_exponent"] = weight;
  bool met = true;
  tuple_sweep(r, lp, cfg, m, [&](const Tuple& fs, const WhitneyDecomposition& d, int i, int j) {
    const NormResult lhs = product_integral(fs, p, weight, d, cfg.quad);
    double rhs = 1.0;
    bool ok = lhs.tolerance_met;
    for (std::size_t k = 0; k < m; ++k) {
      const NormResult nr = id == LemmaId::kCorollary2
                                ? norm_B(fs[k], p[k], lp.q_i[k], lp.s_i[k], cfg.window, cfg.quad)
                                : norm_A(fs[k], p[k], lp.s_i[k], d, cfg.quad);
      ok = ok && nr.tolerance_met;
      rhs *= std::pow(nr.value, p[k]);
    }
    met = met && ok;
    r.cases.push_back({fmt::format("t{}@{}", i, j), j, lhs.value, rhs, ratio_of(lhs.value, rhs)});
  });
  r.tolerance_met = met;
  bracket_verdict(r, lp.bracket);
  return r;
}

VerdictReport check_hardy(const LemmaParams& lp, const VerifierConfig& cfg) {
  const int n = cfg.window.n;
  const std::size_t m = lp.p_i.size();
  for (double x : lp.p_i) {
    if (!(x > 1.0)) throw RejectedConfigurationError("constraint violated: p_i > 1");
  }
  VerdictReport r = lemma_report(LemmaId::kHardyProp, lp, cfg);
  bool met = true;
  tuple_sweep(r, lp, cfg, m, [&](const Tuple& fs, const WhitneyDecomposition&, int i, int j) {
    double rhs = 1.0;
    std::vector<double> heights;
    for (std::size_t k = 0; k < m; ++k) {
      const HardyResult h = norm_hardy(fs[k], lp.p_i[k], cfg.window, cfg.quad);
      met = met && h.tolerance_met;
      rhs *= std::pow(h.value, lp.p_i[k]);
      heights = h.heights;
    }
    double lhs = 0.0;
    for (double t : heights) {
      const QuadResult q = integrate_slice(
          [&](const Point& z) {
            double v = 1.0;
            for (std::size_t k = 0; k < m; ++k) v *= abs_pow(fs[k](z), lp.p_i[k]);
            return v;
          },
          n, t, cfg.window.x_half_width, cfg.quad);
      met = met && q.tolerance_met;
      lhs = std::max(lhs, std::pow(t, n * (static_cast<double>(m) - 1.0)) * q.value);
    }
    r.cases.push_back({fmt::format("t{}@{}", i, j), j, lhs, rhs, ratio_of(lhs, rhs)});
  });
  r.tolerance_met = met;
  bracket_verdict(r, lp.bracket);
  return r;
}

}  // namespace

VerdictReport check_equivalence(LemmaId id, const LemmaParams& params, const VerifierConfig& cfg) {
  cfg.validate();
  if (params.functions < 1) throw ParameterError("functions must be positive");
  if (!(params.bracket >= 1.0)) throw ParameterError("bracket must be at least 1");
  VerdictReport r;
  switch (id) {
    case LemmaId::kOmit: r = check_omit(params, cfg); break;
    case LemmaId::kIsum: r = check_isum(params, cfg); break;
    case LemmaId::kPrepl: r = check_prepl(params, cfg); break;
    case LemmaId::kLemmaB: r = check_lemmaB(params, cfg); break;
    case LemmaId::kMlam: r = check_mlam(params, cfg); break;
    case LemmaId::kDis: r = check_dis(params, cfg); break;
    case LemmaId::kHeight: r = check_height(params, cfg); break;
    case LemmaId::kKpqmon: r = check_kpqmon(params, cfg); break;
    case LemmaId::kHardyProp: r = check_hardy(params, cfg); break;
    case LemmaId::kEqL4:
    case LemmaId::kCorollary1:
    case LemmaId::kCorollary2: r = check_corollary(id, params, cfg); break;
  }
  if (!r.tolerance_met) add_flag(r, "quadrature tolerance not met");
  return r;
}

// ---------------------------------------------------------------------------
// Schur operator

double SchurInput::operator()(const Point& w) const {
  switch (kind) {
    case Kind::kPower: return std::pow(w.t(), lambda);
    case Kind::kCubes: {
      double v = 0.0;
      for (const auto& [b, c] : boxes) {
        if (b.contains_half_open(w)) v += c;
      }
      return v;
    }
    case Kind::kZero: return 0.0;
  }
  return 0.0;
}

std::string SchurInput::describe() const {
  switch (kind) {
    case Kind::kPower: return fmt::format("s^{}", lambda);
    case Kind::kCubes: return fmt::format("indicator sum of {} boxes", boxes.size());
    case Kind::kZero: return "0";
  }
  return "";
}

std::pair<double, double> schur_window(int n, double p, double beta) {
  if (!(p > 1.0)) throw RejectedConfigurationError("constraint violated: 1 < p");
  if (!(beta > 0.0)) throw RejectedConfigurationError("constraint violated: beta > 0");
  const double qp = p / (p - 1.0);
  return {std::max(-beta * n / qp, (-n - 2.0 * beta * n) / p), 0.0};
}

namespace {

// (t^n / |z - w_bar|^(2n))^(1 + beta) s^(beta n - 1).
double schur_kernel(const Point& z, const Point& w, int n, double beta) {
  const double rho = reflected_distance(z, w);
  const double base = std::pow(z.t(), n) / std::pow(rho * rho, n);
  return abs_pow(base, 1.0 + beta) * t_pow(w.t(), beta * n - 1.0);
}

constexpr int kSchurInnerOrder = 5;

// The kernel varies on the scale of the reflected distance, so boxes that are
// small against it get a cheaper rule.
int schur_inner_order(const Point& z, const Box& b) {
  double diam2 = 0.0;
  for (int i = 0; i < b.lo.coords(); ++i) diam2 += (b.hi[i] - b.lo[i]) * (b.hi[i] - b.lo[i]);
  const double ratio = std::sqrt(diam2) / reflected_distance(z, b.center());
  if (ratio < 0.2) return 2;
  if (ratio < 0.6) return 3;
  return kSchurInnerOrder;
}

// S(s^lambda) at height t over the whole half-space. The integrand depends on
// x only through r = |x - x_z|, so the integral reduces to the quarter plane
// (r, s), mapped onto the unit square by r = t u / (1 - u), s = t v / (1 - v).
QuadResult schur_power_radial(double lambda, double beta, int n, double t) {
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  const double a = n * (1.0 + beta);
  // The absolute floor lets the tiny boxes at the singular corners stop early.
  const QuadratureConfig qc{8, 12, 1e-8, 1e-12 * std::pow(t, lambda), 1};
  const Box unit{Point({0.0}, 0.0), Point({1.0}, 1.0)};
  QuadResult r = integrate_box(
      [&](const Point& p) {
        const double u = p[0];
        const double v = p[1];
        const double r1 = t * u / (1.0 - u);
        const double s = t * v / (1.0 - v);
        const double jac = t * t / ((1.0 - u) * (1.0 - u) * (1.0 - v) * (1.0 - v));
        const double u2 = r1 * r1 + (t + s) * (t + s);
        return std::pow(r1, n - 1) * std::pow(t, a) * std::pow(u2, -a) * std::pow(s, beta * n - 1.0 + lambda) * jac;
      },
      unit, qc);
  r.value *= sphere;
  return r;
}

double schur_value(const SchurInput& g, double beta, const Point& z, const WhitneyDecomposition& d,
                   const QuadratureConfig& cfg, bool* met) {
  const int n = z.n();
  switch (g.kind) {
    case SchurInput::Kind::kZero: return 0.0;
    case SchurInput::Kind::kPower: {
      (void)d;
      (void)cfg;
      const QuadResult r = schur_power_radial(g.lambda, beta, n, z.t());
      if (met != nullptr) *met = *met && r.tolerance_met;
      return r.value;
    }
    case SchurInput::Kind::kCubes: {
      double v = 0.0;
      for (const auto& [b, c] : g.boxes) {
        v += c * tensor_rule([&](const Point& w) { return schur_kernel(z, w, n, beta); }, b, schur_inner_order(z, b));
      }
      return v;
    }
  }
  return 0.0;
}

}  // namespace

std::vector<double> schur_apply(const SchurInput& g, double beta, const std::vector<Point>& probes,
                                const Window& window, const QuadratureConfig& cfg) {
  if (!(beta > 0.0)) throw RejectedConfigurationError("constraint violated: beta > 0");
  cfg.validate();
  const WhitneyDecomposition d(window);
  std::vector<double> out;
  out.reserve(probes.size());
  for (const Point& z : probes) {
    if (!z.in_upper_half_space() || z.n() != window.n) throw DomainError("Schur probes must lie in the half-space");
    out.push_back(schur_value(g, beta, z, d, cfg, nullptr));
  }
  return out;
}

VerdictReport schur_slope(double p, double beta, double lambda, const std::vector<double>& heights,
                          const VerifierConfig& cfg, double slope_tol) {
  cfg.validate();
  const int n = cfg.window.n;
  const auto [lo, hi] = schur_window(n, p, beta);
  if (!(lambda > lo && lambda < hi)) {
    throw RejectedConfigurationError(
        fmt::format("constraint violated: max(-beta n / q', (-n - 2 beta n) / p) < lambda < 0 (window ({}, {}), "
                    "lambda={})",
                    lo, hi, lambda));
  }
  if (heights.size() < 3) throw ParameterError("schur slope needs at least three heights");
  VerdictReport r;
  r.theorem_id = "schur/slope";
  r.params = json{{"p", p}, {"beta", beta}, {"lambda", lambda}, {"n", n}, {"heights", heights}};
  r.window = cfg.window.describe();
  r.family = json{{"kind", "power"}, {"lambda", lambda}};
  const SchurInput g{SchurInput::Kind::kPower, lambda, {}};
  std::vector<Point> probes;
  for (double t : heights) probes.push_back(Point::uniform(n, 0.0, t));
  const WhitneyDecomposition d(cfg.window);
  bool met = true;
  std::vector<double> values;
  for (const Point& z : probes) values.push_back(schur_value(g, beta, z, d, cfg.quad, &met));
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double rhs = std::pow(heights[i], lambda);
    r.cases.push_back({fmt::format("t={}", heights[i]), static_cast<int>(std::lround(std::log2(heights[i]))),
                       values[i], rhs, ratio_of(values[i], rhs)});
  }
  ratio_stats(r);
  const SlopeFit fit = fit_power_law(heights, values);
  r.tolerance_met = met;
  r.extra["slope"] = fit.slope;
  r.extra["intercept"] = fit.intercept;
  r.extra["expected_slope"] = lambda;
  r.extra["slope_tol"] = slope_tol;
  r.extra["admissible"] = {lo, hi};
  r.extra["sweep"] = {{"scales", heights}, {"values", values}};
  if (std::min(lambda - lo, hi - lambda) < 0.1 * (hi - lo)) add_flag(r, "near-boundary lambda");
  if (!met) add_flag(r, "quadrature tolerance not met");
  r.verdict = std::abs(fit.slope - lambda) <= slope_tol ? Verdict::kExactPass : Verdict::kFail;
  r.expected = Verdict::kExactPass;
  return r;
}

std::vector<SchurInput> schur_family(int n, int count, std::uint64_t seed) {
  require_dimension(n);
  if (count < 1) throw ParameterError("Schur family must be nonempty");
  std::vector<SchurInput> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, 0x5C00 + static_cast<std::uint64_t>(i));
    SchurInput g{SchurInput::Kind::kCubes, 0.0, {}};
    std::vector<Cube> picked;
    while (picked.size() < 3) {
      const int level = rng.integer(-1, 1);
      std::vector<std::int32_t> idx(static_cast<std::size_t>(n));
      for (auto& k : idx) k = rng.integer(-2, 1);
      const Cube c(n, level, idx);
      if (std::find(picked.begin(), picked.end(), c) != picked.end()) continue;
      picked.push_back(c);
      g.boxes.emplace_back(c.box(), rng.uniform(0.5, 2.0));
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

double schur_ratio_sup(double p, double beta, const std::vector<SchurInput>& family, const Window& window,
                       const QuadratureConfig& cfg, std::vector<CaseRecord>* cases, bool& met) {
  const WhitneyDecomposition d(window);
  const int n = window.n;
  const Measure weight = Measure::m_lambda(beta * n - 1.0);
  double sup = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const SchurInput& g = family[i];
    double gnorm = 0.0;
    if (g.kind == SchurInput::Kind::kCubes) {
      for (const auto& [b, c] : g.boxes) gnorm += abs_pow(c, p) * weight.mass(b);
    } else if (g.kind == SchurInput::Kind::kPower) {
      throw RejectedConfigurationError("power weights are not in L^p; use schur_slope");
    }
    double snorm = 0.0;
    if (gnorm > 0.0) {
      const auto integrand = [&](const Point& z) {
        return abs_pow(schur_value(g, beta, z, d, cfg, nullptr), p) * t_pow(z.t(), beta * n - 1.0);
      };
      const QuadResult q = integrate_halfspace(integrand, d, cfg);
      met = met && q.tolerance_met;
      snorm = std::pow(q.value, 1.0 / p);
      gnorm = std::pow(gnorm, 1.0 / p);
    }
    const double ratio = ratio_of(snorm, gnorm);
    sup = std::max(sup, ratio);
    if (cases != nullptr) cases->push_back({fmt::format("g{}", i), 0, snorm, gnorm, ratio});
  }
  return sup;
}

}  // namespace

VerdictReport schur_probe(double p, double beta, const std::vector<SchurInput>& family, const VerifierConfig& cfg) {
  cfg.validate();
  schur_window(cfg.window.n, p, beta);
  if (family.empty()) throw ParameterError("Schur family must be nonempty");
  VerdictReport r;
  r.theorem_id = "schur/probe";
  r.params = json{{"p", p}, {"beta", beta}, {"n", cfg.window.n}};
  r.window = cfg.window.describe();
  json fam = json::array();
  for (const SchurInput& g : family) fam.push_back(g.describe());
  r.family = json{{"kind", "cube indicators"}, {"members", fam}, {"seed", cfg.seed}};
  r.trend_tol = cfg.trend_tol;
  r.expected = Verdict::kBounded;
  bool met = true;
  const double sup1 = schur_ratio_sup(p, beta, family, cfg.window, cfg.quad, &r.cases, met);
  ratio_stats(r);
  r.tolerance_met = met;
  const bool all_zero = std::all_of(r.cases.begin(), r.cases.end(),
                                    [](const CaseRecord& c) { return c.lhs == 0.0 && c.rhs == 0.0; });
  if (all_zero) {
    add_flag(r, "zero family");
    r.verdict = Verdict::kInconclusive;
    return r;
  }
  const Window grown = grow(cfg.window, cfg.growth);
  bool met2 = true;
  const double sup2 = schur_ratio_sup(p, beta, family, grown, cfg.quad, nullptr, met2);
  r.window_change = std::abs(sup2 / sup1 - 1.0);
  r.extra["grown_window"] = grown.describe();
  r.extra["grown_sup_ratio"] = sup2;
  r.extra["stability_tol"] = cfg.stability_tol;
  r.extra["inner_rule_order"] = kSchurInnerOrder;
  r.verdict = std::isfinite(sup1) && *r.window_change <= cfg.stability_tol ? Verdict::kBounded : Verdict::kInconclusive;
  if (r.verdict != Verdict::kBounded) add_flag(r, "window-unstable");
  if (!met) add_flag(r, "quadrature tolerance not met");
  return r;
}

// ---------------------------------------------------------------------------
// Sum against integral condition (theorem7 mode)

QuadResult theorem7_integral(const Measure& mu, const WhitneyDecomposition& d, double p, double q, double alpha,
                             const QuadratureConfig& cfg) {
  if (!(p > 0.0 && p < q)) throw ParameterError(fmt::format("constraint violated: 0 < p < q (p={}, q={})", p, q));
  if (!(alpha > 0.0)) throw ParameterError(fmt::format("constraint violated: alpha > 0 (alpha={})", alpha));
  if (mu.is_zero()) return {};
  const int n = d.n();
  const double kexp = 1.0 + alpha * q;
  const double outer = q / (q - p);
  const double weight = alpha * q * n - 1.0;
  auto kernel = [&](const Point& z, const Point& w) {
    const double rho = reflected_distance(z, w);
    return abs_pow(std::pow(z.t(), n) / std::pow(rho * rho, n), kexp);
  };
  std::vector<Atom> atoms;
  if (mu.is_discrete()) {
    Box all{Point::uniform(n, -kInf, 0.0), Point::uniform(n, kInf, kInf)};
    mu.for_each_atom(all, [&](const Point& z, double m) { atoms.push_back({z, m}); });
  }
  const Integrand g = [&](const Point& w) {
    double inner = 0.0;
    if (mu.is_discrete()) {
      for (const Atom& a : atoms) inner += a.mass * kernel(a.at, w);
    } else {
      // Nested single rule per cube of the same window.
      const auto& wl = std::get<WeightedLebesgue>(mu.rep());
      for (std::size_t k = 0; k < d.size(); ++k) {
        Box b = d[k].box();
        if (wl.window) {
          for (int a = 0; a < b.lo.coords(); ++a) {
            b.lo[a] = std::max(b.lo[a], wl.window->lo[a]);
            b.hi[a] = std::min(b.hi[a], wl.window->hi[a]);
          }
          bool empty = false;
          for (int a = 0; a < b.lo.coords(); ++a) empty = empty || !(b.hi[a] > b.lo[a]);
          if (empty) continue;
        }
        inner += tensor_rule([&](const Point& z) { return kernel(z, w) * t_pow(z.t(), wl.gamma); }, b, 2);
      }
    }
    return std::pow(inner, outer) * t_pow(w.t(), weight);
  };
  return integrate_halfspace(g, d, cfg);
}

VerdictReport theorem7_check(double p, double q, double alpha, const MeasureFactory& mu,
                             const std::string& measure_label, const VerifierConfig& cfg, int windows) {
  if (!(p > 0.0 && p < q)) throw ParameterError(fmt::format("constraint violated: 0 < p < q (p={}, q={})", p, q));
  if (!(alpha > 0.0)) throw ParameterError(fmt::format("constraint violated: alpha > 0 (alpha={})", alpha));
  if (windows < 2) throw ParameterError("theorem7 needs at least two windows");
  cfg.quad.validate();
  VerdictReport r;
  r.theorem_id = "T7";
  r.params = json{{"p", p}, {"q", q}, {"alpha", alpha}, {"n", cfg.window.n}};
  r.window = cfg.window.describe();
  r.family = json{{"measure", measure_label}};
  r.expected.reset();
  Window w = cfg.window;
  std::vector<double> c1, c2;
  json wins = json::array();
  bool met = true;
  for (int i = 0; i < windows; ++i) {
    const Measure m = mu(w);
    const WhitneyDecomposition d(w);
    const double sum = theorem7_sum(m, d, p, q, alpha);
    const QuadResult integral = theorem7_integral(m, d, p, q, alpha, cfg.quad);
    met = met && integral.tolerance_met;
    c1.push_back(integral.value);
    c2.push_back(sum);
    wins.push_back(w.describe());
    r.cases.push_back({fmt::format("window{}", i), w.level_min, integral.value, sum, ratio_of(integral.value, sum)});
    if (i + 1 < windows) w = grow(w, cfg.growth);
  }
  ratio_stats(r);
  r.tolerance_met = met;
  auto growth = [](const std::vector<double>& v) {
    std::vector<double> g;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) g.push_back(v[i] == 0.0 ? (v[i + 1] == 0.0 ? 1.0 : kInf) : v[i + 1] / v[i]);
    return g;
  };
  const std::vector<double> g1 = growth(c1);
  const std::vector<double> g2 = growth(c2);
  auto stable = [&](const std::vector<double>& g) {
    return std::all_of(g.begin(), g.end(), [&](double x) { return std::abs(x - 1.0) < cfg.stability_tol; });
  };
  auto growing = [](const std::vector<double>& g) {
    return std::all_of(g.begin(), g.end(), [](double x) { return x >= 1.5; });
  };
  constexpr double kBracket = 50.0;
  const bool zero = std::all_of(c1.begin(), c1.end(), [](double x) { return x == 0.0; }) &&
                    std::all_of(c2.begin(), c2.end(), [](double x) { return x == 0.0; });
  r.extra["windows"] = wins;
  r.extra["condition1"] = c1;
  r.extra["condition2"] = c2;
  r.extra["growth1"] = g1;
  r.extra["growth2"] = g2;
  r.extra["stability_tol"] = cfg.stability_tol;
  r.extra["growth_floor"] = 1.5;
  r.extra["bracket"] = kBracket;
  r.extra["condition1_stable"] = stable(g1);
  r.extra["condition2_stable"] = stable(g2);
  r.extra["condition1_growing"] = growing(g1);
  r.extra["condition2_growing"] = growing(g2);
  if (zero) {
    add_flag(r, "zero measure");
    r.verdict = Verdict::kBounded;
  } else if (stable(g1) && stable(g2) && all_positive_finite(r) && r.spread <= kBracket) {
    r.verdict = Verdict::kBounded;
  } else if (growing(g1) && growing(g2)) {
    r.verdict = Verdict::kDiverging;
  } else {
    if (stable(g1) != stable(g2) || growing(g1) != growing(g2)) add_flag(r, "conditions disagree");
    r.verdict = Verdict::kInconclusive;
  }
  if (!met) add_flag(r, "quadrature tolerance not met");
  return r;
}

}  // namespace hc
