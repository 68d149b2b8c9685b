#include "hcarleson/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "hcarleson/harmonic.hpp"
#include "hcarleson/measures.hpp"
#include "hcarleson/norms.hpp"
#include "hcarleson/report.hpp"

namespace hc {

bool TaskCheck::ok() const {
  if (verdict == Verdict::kExactPass) return true;
  if (verdict != Verdict::kBounded && verdict != Verdict::kDiverging) return false;
  return !expected || *expected == verdict;
}

namespace {

// Strict object reader: rejects unknown keys up front and records every value
// it hands out (defaults included) in the resolved copy.
class Reader {
 public:
  Reader(const json& j, std::string path, const std::vector<std::string>& allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& item : j.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const std::string& k) { return item.key() == k; });
      if (!known) throw ConfigError(at(item.key()) + ": unknown key");
    }
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(at(key) + ": required key missing");
    return j_.at(key);
  }

  double number(const char* key, std::optional<double> def = std::nullopt) {
    double v = 0.0;
    if (!j_.contains(key)) {
      if (!def) throw ConfigError(at(key) + ": required key missing");
      v = *def;
    } else {
      if (!j_.at(key).is_number()) throw ConfigError(at(key) + ": expected a number");
      v = j_.at(key).get<double>();
    }
    res_[key] = v;
    return v;
  }

  long long integer(const char* key, std::optional<long long> def = std::nullopt) {
    long long v = 0;
    if (!j_.contains(key)) {
      if (!def) throw ConfigError(at(key) + ": required key missing");
      v = *def;
    } else {
      const json& x = j_.at(key);
      if (!x.is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
      v = x.get<long long>();
    }
    res_[key] = v;
    return v;
  }

  bool boolean(const char* key, std::optional<bool> def = std::nullopt) {
    bool v = false;
    if (!j_.contains(key)) {
      if (!def) throw ConfigError(at(key) + ": required key missing");
      v = *def;
    } else {
      if (!j_.at(key).is_boolean()) throw ConfigError(at(key) + ": expected true or false");
      v = j_.at(key).get<bool>();
    }
    res_[key] = v;
    return v;
  }

  std::string string(const char* key, std::optional<std::string> def = std::nullopt) {
    std::string v;
    if (!j_.contains(key)) {
      if (!def) throw ConfigError(at(key) + ": required key missing");
      v = *def;
    } else {
      if (!j_.at(key).is_string()) throw ConfigError(at(key) + ": expected a string");
      v = j_.at(key).get<std::string>();
    }
    res_[key] = v;
    return v;
  }

  std::vector<double> numbers(const char* key, std::optional<std::vector<double>> def = std::nullopt) {
    std::vector<double> v;
    if (!j_.contains(key)) {
      if (!def) throw ConfigError(at(key) + ": required key missing");
      v = *def;
    } else {
      const json& a = j_.at(key);
      if (!a.is_array()) throw ConfigError(at(key) + ": expected an array of numbers");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw ConfigError(fmt::format("{}[{}]: expected a number", at(key), i));
        v.push_back(a[i].get<double>());
      }
    }
    res_[key] = v;
    return v;
  }

  void set(const char* key, json v) { res_[key] = std::move(v); }
  const json& resolved() const { return res_; }

 private:
  const json& j_;
  std::string path_;
  json res_ = json::object();
};

// Converts library errors raised while binding a task into schema errors.
template <class F>
auto guarded(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

const json kEmpty = json::object();

std::pair<Window, json> parse_window(const json* j, const std::string& path, const Window& base) {
  Reader r(j != nullptr ? *j : kEmpty, path, {"n", "level_range", "x_half_width"});
  Window w = base;
  w.n = static_cast<int>(r.integer("n", base.n));
  const auto range = r.numbers("level_range", std::vector<double>{static_cast<double>(base.level_min),
                                                                   static_cast<double>(base.level_max)});
  if (range.size() != 2 || range[0] != std::floor(range[0]) || range[1] != std::floor(range[1])) {
    throw ConfigError(r.at("level_range") + ": expected two integers [level_min, level_max]");
  }
  w.level_min = static_cast<int>(range[0]);
  w.level_max = static_cast<int>(range[1]);
  r.set("level_range", json::array({w.level_min, w.level_max}));
  w.x_half_width = r.number("x_half_width", base.x_half_width);
  guarded(path, [&] { return WhitneyDecomposition(w).size(); });
  return {w, r.resolved()};
}

std::pair<QuadratureConfig, json> parse_quad(const json* j, const std::string& path, const QuadratureConfig& base) {
  Reader r(j != nullptr ? *j : kEmpty, path, {"nodes", "depth", "rel_tol", "abs_tol", "workers"});
  QuadratureConfig q = base;
  q.nodes_per_axis = static_cast<int>(r.integer("nodes", base.nodes_per_axis));
  q.refinement_depth = static_cast<int>(r.integer("depth", base.refinement_depth));
  q.rel_tol = r.number("rel_tol", base.rel_tol);
  q.abs_tol = r.number("abs_tol", base.abs_tol);
  q.workers = static_cast<int>(r.integer("workers", base.workers));
  guarded(path, [&] {
    q.validate();
    return 0;
  });
  return {q, r.resolved()};
}

Point parse_point(const json& j, const std::string& path, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n + 1) {
    throw ConfigError(fmt::format("{}: expected an array of {} numbers (x_1..x_n, t)", path, n + 1));
  }
  Point p = Point::uniform(n, 0.0, 0.0);
  for (int i = 0; i <= n; ++i) {
    if (!j[i].is_number()) throw ConfigError(fmt::format("{}[{}]: expected a number", path, i));
    p[i] = j[i].get<double>();
  }
  if (!(p.t() > 0.0)) throw ConfigError(path + ": height must be positive");
  return p;
}

json point_json(const Point& p) { return std::vector<double>(p.all().begin(), p.all().end()); }

std::pair<ZooOptions, json> parse_zoo(const json* j, const std::string& path) {
  Reader r(j != nullptr ? *j : kEmpty, path, {"l_min", "l_max", "allow_poisson", "spread"});
  ZooOptions z;
  z.l_min = static_cast<int>(r.integer("l_min", z.l_min));
  z.l_max = static_cast<int>(r.integer("l_max", z.l_max));
  z.allow_poisson = r.boolean("allow_poisson", z.allow_poisson);
  z.spread = r.number("spread", z.spread);
  if (z.l_min < 0 || z.l_max < z.l_min) throw ConfigError(path + ": need 0 <= l_min <= l_max");
  return {z, r.resolved()};
}

std::pair<HarmonicFunction, json> parse_function(const json& j, const std::string& path, int n) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(path + ".kind: required string (test, poisson, combo, zero)");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "test") {
    Reader r(j, path, {"kind", "w", "l"});
    r.string("kind");
    const Point w = parse_point(r.raw("w"), r.at("w"), n);
    r.set("w", point_json(w));
    const int l = static_cast<int>(r.integer("l"));
    if (l < 0) throw ConfigError(r.at("l") + ": must be nonnegative");
    return {HarmonicFunction::test(w, l), r.resolved()};
  }
  if (kind == "poisson") {
    Reader r(j, path, {"kind", "x0", "t0"});
    r.string("kind");
    const auto x0 = r.numbers("x0");
    if (static_cast<int>(x0.size()) != n) throw ConfigError(fmt::format("{}: expected {} numbers", r.at("x0"), n));
    const double t0 = r.number("t0", 0.0);
    if (t0 < 0.0) throw ConfigError(r.at("t0") + ": must be nonnegative");
    return {HarmonicFunction::poisson(Point(std::span<const double>(x0), 0.0), t0), r.resolved()};
  }
  if (kind == "combo") {
    Reader r(j, path, {"kind", "seed", "size", "anchor", "zoo"});
    r.string("kind");
    const auto seed = r.integer("seed");
    if (seed < 0) throw ConfigError(r.at("seed") + ": must be nonnegative");
    const int size = static_cast<int>(r.integer("size", 3));
    if (size < 1) throw ConfigError(r.at("size") + ": must be positive");
    const Point anchor = r.has("anchor") ? parse_point(r.raw("anchor"), r.at("anchor"), n) : Point::uniform(n, 0.0, 1.0);
    r.set("anchor", point_json(anchor));
    auto [zoo, zres] = parse_zoo(r.has("zoo") ? &r.raw("zoo") : nullptr, r.at("zoo"));
    r.set("zoo", zres);
    const auto f = guarded(path, [&] { return make_combo(n, static_cast<std::uint64_t>(seed), size, anchor, zoo); });
    return {f, r.resolved()};
  }
  if (kind == "zero") {
    Reader r(j, path, {"kind"});
    r.string("kind");
    return {HarmonicFunction::zero(n), r.resolved()};
  }
  throw ConfigError(path + ".kind: unknown function kind '" + kind + "'");
}

struct MeasureSpec {
  MeasureFactory make;
  std::string label;
};

std::pair<MeasureSpec, json> parse_measure(const json& j, const std::string& path, int n) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(path + ".kind: required string (m_lambda, atomic, cube_power, zero)");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "m_lambda") {
    Reader r(j, path, {"kind", "gamma", "restrict"});
    r.string("kind");
    const double gamma = r.number("gamma");
    if (!(gamma > -1.0)) throw ConfigError(r.at("gamma") + ": constraint violated: gamma > -1");
    const bool restrict = r.boolean("restrict", false);
    MeasureSpec s{[gamma, restrict](const Window& w) {
                    return restrict ? Measure::m_lambda(gamma, w.box()) : Measure::m_lambda(gamma);
                  },
                  fmt::format("m_lambda(gamma={}{})", gamma, restrict ? ", window" : "")};
    return {s, r.resolved()};
  }
  if (kind == "cube_power") {
    Reader r(j, path, {"kind", "e"});
    r.string("kind");
    const double e = r.number("e");
    return {MeasureSpec{[e](const Window& w) { return Measure::cube_power(e, w); }, fmt::format("cube_power(e={})", e)},
            r.resolved()};
  }
  if (kind == "atomic") {
    Reader r(j, path, {"kind", "points"});
    r.string("kind");
    const json& pts = r.raw("points");
    if (!pts.is_array()) throw ConfigError(r.at("points") + ": expected an array");
    std::vector<Atom> atoms;
    json res = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pp = fmt::format("{}[{}]", r.at("points"), i);
      Reader a(pts[i], pp, {"at", "mass"});
      const Point at = parse_point(a.raw("at"), a.at("at"), n);
      a.set("at", point_json(at));
      const double mass = a.number("mass");
      if (!(mass >= 0.0)) throw ConfigError(a.at("mass") + ": must be nonnegative");
      atoms.push_back({at, mass});
      res.push_back(a.resolved());
    }
    r.set("points", res);
    const std::size_t count = atoms.size();
    return {MeasureSpec{[atoms](const Window&) { return Measure::atomic(atoms); },
                        fmt::format("atomic({} points)", count)},
            r.resolved()};
  }
  if (kind == "zero") {
    Reader r(j, path, {"kind"});
    r.string("kind");
    return {MeasureSpec{[](const Window&) { return Measure::zero(); }, "zero"}, r.resolved()};
  }
  throw ConfigError(path + ".kind: unknown measure kind '" + kind + "'");
}

std::pair<TheoremParams, json> parse_theorem_params(const json* j, const std::string& path, TheoremId id, int n) {
  Reader r(j != nullptr ? *j : kEmpty, path,
           {"m", "p", "q", "alpha", "s", "p_i", "q_i", "beta_i", "t_i", "sigma_i", "alpha_i"});
  TheoremParams P;
  P.n = n;
  P.m = static_cast<int>(r.integer("m", 1));
  P.p = r.number("p", 2.0);
  P.q = r.number("q", 2.0);
  P.alpha = r.number("alpha", 0.0);
  P.s = r.number("s", 2.0);
  P.p_i = r.numbers("p_i", std::vector<double>{});
  P.q_i = r.numbers("q_i", std::vector<double>{});
  P.beta_i = r.numbers("beta_i", std::vector<double>{});
  P.t_i = r.numbers("t_i", std::vector<double>{});
  P.sigma_i = r.numbers("sigma_i", std::vector<double>{});
  P.alpha_i = r.numbers("alpha_i", std::vector<double>{});
  guarded(path, [&] {
    P.validate(id);
    return 0;
  });
  return {P, r.resolved()};
}

std::pair<FamilySpec, json> parse_family(const json* j, const std::string& path, std::uint64_t seed) {
  Reader r(j != nullptr ? *j : kEmpty, path, {"kind", "count", "combo_size", "l", "seed", "zoo"});
  FamilySpec f;
  f.kind = r.string("kind", f.kind);
  f.count = static_cast<int>(r.integer("count", f.count));
  f.combo_size = static_cast<int>(r.integer("combo_size", f.combo_size));
  f.l = static_cast<int>(r.integer("l", f.l));
  const auto s = r.integer("seed", static_cast<long long>(seed));
  if (s < 0) throw ConfigError(r.at("seed") + ": must be nonnegative");
  f.seed = static_cast<std::uint64_t>(s);
  auto [zoo, zres] = parse_zoo(r.has("zoo") ? &r.raw("zoo") : nullptr, r.at("zoo"));
  f.zoo = zoo;
  r.set("zoo", zres);
  guarded(path, [&] {
    f.validate();
    return 0;
  });
  return {f, r.resolved()};
}

GrowthMode parse_growth(const std::string& s, const std::string& path) {
  if (s == "finer") return GrowthMode::kFiner;
  if (s == "both") return GrowthMode::kBoth;
  throw ConfigError(path + ": growth must be 'finer' or 'both'");
}

std::pair<VerifierConfig, json> parse_verifier(const json* j, const std::string& path, const Window& w,
                                               const QuadratureConfig& q, std::uint64_t seed) {
  Reader r(j != nullptr ? *j : kEmpty, path,
           {"probe_levels", "trend_tol", "stability_tol", "check_stability", "growth", "sustained_levels"});
  VerifierConfig v;
  v.window = w;
  v.quad = q;
  v.seed = seed;
  const int lo = std::max(v.probe_level_min, w.level_min);
  const int hi = std::min(v.probe_level_max, w.level_max);
  const auto pl = r.numbers("probe_levels", std::vector<double>{static_cast<double>(lo), static_cast<double>(hi)});
  if (pl.size() != 2 || pl[0] != std::floor(pl[0]) || pl[1] != std::floor(pl[1])) {
    throw ConfigError(r.at("probe_levels") + ": expected two integers [min, max]");
  }
  v.probe_level_min = static_cast<int>(pl[0]);
  v.probe_level_max = static_cast<int>(pl[1]);
  r.set("probe_levels", json::array({v.probe_level_min, v.probe_level_max}));
  v.trend_tol = r.number("trend_tol", v.trend_tol);
  v.stability_tol = r.number("stability_tol", v.stability_tol);
  v.check_stability = r.boolean("check_stability", v.check_stability);
  v.growth = parse_growth(r.string("growth", "finer"), r.at("growth"));
  v.sustained_levels = static_cast<int>(r.integer("sustained_levels", v.sustained_levels));
  guarded(path, [&] {
    v.validate();
    return 0;
  });
  return {v, r.resolved()};
}

std::pair<LemmaParams, json> parse_lemma_params(const json* j, const std::string& path, LemmaId id) {
  Reader r(j != nullptr ? *j : kEmpty, path,
           {"alpha", "gamma", "scales", "s", "beta", "p", "tau", "s_i", "p_i", "q_i", "lambdas", "herz_q", "functions",
            "bracket", "slope_tol", "samples"});
  LemmaParams lp = default_lemma_params(id);
  lp.alpha = r.number("alpha", lp.alpha);
  lp.gamma = r.number("gamma", lp.gamma);
  lp.scales = r.numbers("scales", lp.scales);
  lp.s = r.number("s", lp.s);
  lp.beta = r.number("beta", lp.beta);
  lp.p = r.number("p", lp.p);
  lp.tau = r.number("tau", lp.tau);
  lp.s_i = r.numbers("s_i", lp.s_i);
  lp.p_i = r.numbers("p_i", lp.p_i);
  lp.q_i = r.numbers("q_i", lp.q_i);
  lp.lambdas = r.numbers("lambdas", lp.lambdas);
  lp.herz_q = r.numbers("herz_q", lp.herz_q);
  lp.functions = static_cast<int>(r.integer("functions", lp.functions));
  lp.bracket = r.number("bracket", lp.bracket);
  lp.slope_tol = r.number("slope_tol", lp.slope_tol);
  lp.samples = static_cast<int>(r.integer("samples", lp.samples));
  if (lp.functions < 1) throw ConfigError(r.at("functions") + ": must be positive");
  if (lp.samples < 0) throw ConfigError(r.at("samples") + ": must be nonnegative");
  return {lp, r.resolved()};
}

std::optional<Verdict> parse_expect(Reader& r) {
  if (!r.has("expect")) return std::nullopt;
  const std::string s = r.string("expect");
  return guarded(r.at("expect"), [&] { return parse_verdict(s); });
}

TaskCheck check_of(const std::string& label, const VerdictReport& rep, std::optional<Verdict> expect) {
  return TaskCheck{label, rep.verdict, expect ? expect : rep.expected};
}

struct Ctx {
  Window window;
  QuadratureConfig quad;
  std::uint64_t seed;
  Window task_window;
  QuadratureConfig task_quad;
};

// ---------------------------------------------------------------------------
// Task binders

Task bind_decompose(Reader& r, const Ctx& c) {
  const Window w = c.task_window;
  return Task{"", "decompose", [w] {
                const WhitneyDecomposition d(w);
                TaskOutput out;
                std::ostringstream csv;
                write_cubes_csv(d, csv);
                out.files.emplace_back(".cubes.csv", csv.str());
                json levels = json::array();
                for (int j = w.level_min; j <= w.level_max; ++j) {
                  levels.push_back({{"level", j}, {"cubes", d.level_end(j) - d.level_begin(j)}});
                }
                out.result = {{"window", w.describe()}, {"cubes", d.size()}, {"levels", levels}};
                return out;
              }};
  (void)r;
}

Task bind_norm(Reader& r, const Ctx& c) {
  const std::string norm = r.string("norm");
  const int n = c.task_window.n;
  const Window w = c.task_window;
  const QuadratureConfig q = c.task_quad;
  static const std::set<std::string> kNorms{"A", "B", "F", "K", "hardy", "apqm", "local_mean"};
  if (!kNorms.count(norm)) throw ConfigError(r.at("norm") + ": must be one of A, B, F, K, hardy, apqm, local_mean");
  Tuple fs;
  if (norm == "apqm") {
    const json& arr = r.raw("functions");
    if (!arr.is_array() || arr.empty()) throw ConfigError(r.at("functions") + ": expected a nonempty array");
    json res = json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto [f, fr] = parse_function(arr[i], fmt::format("{}[{}]", r.at("functions"), i), n);
      fs.push_back(f);
      res.push_back(fr);
    }
    r.set("functions", res);
    if (r.has("function")) throw ConfigError(r.at("function") + ": not used by the apqm norm (use functions)");
  } else {
    auto [f, fr] = parse_function(r.raw("function"), r.at("function"), n);
    fs.push_back(f);
    r.set("function", fr);
    if (r.has("functions")) throw ConfigError(r.at("functions") + ": only the apqm norm takes a tuple");
  }
  // Keys each norm reads; anything else present is rejected.
  const std::map<std::string, std::set<std::string>> used{
      {"A", {"p", "lambda"}},        {"B", {"p", "q", "alpha"}},         {"F", {"p", "q", "alpha"}},
      {"K", {"p", "q", "measure"}},  {"hardy", {"p", "per_octave"}},     {"apqm", {"p", "q", "measure"}},
      {"local_mean", {"sigma", "alpha", "e"}}};
  for (const char* k : {"p", "q", "lambda", "alpha", "sigma", "e", "measure", "per_octave"}) {
    if (r.has(k) && !used.at(norm).count(k)) throw ConfigError(r.at(k) + ": not used by the " + norm + " norm");
  }
  const auto& u = used.at(norm);
  const double p = u.count("p") ? r.number("p") : 0.0;
  const double qq = u.count("q") ? r.number("q") : 0.0;
  const double lambda = u.count("lambda") ? r.number("lambda", 0.0) : 0.0;
  const double alpha = u.count("alpha") ? r.number("alpha") : 0.0;
  const double sigma = u.count("sigma") ? r.number("sigma") : 0.0;
  const double e = u.count("e") ? r.number("e") : 0.0;
  const int per_octave = u.count("per_octave") ? static_cast<int>(r.integer("per_octave", 2)) : 2;
  MeasureFactory mf;
  std::string mlabel;
  if (u.count("measure")) {
    auto [ms, mr] = parse_measure(r.raw("measure"), r.at("measure"), n);
    mf = ms.make;
    mlabel = ms.label;
    r.set("measure", mr);
  }
  return Task{"", "norm", [=] {
                const WhitneyDecomposition d(w);
                TaskOutput out;
                NormResult v;
                json extra = json::object();
                if (norm == "A") v = norm_A(fs[0], p, lambda, d, q);
                if (norm == "B") v = norm_B(fs[0], p, qq, alpha, w, q);
                if (norm == "F") v = norm_F(fs[0], p, qq, alpha, w, q);
                if (norm == "K") v = norm_K(fs[0], p, qq, mf(w), slabs_for_window(w), d, q);
                if (norm == "apqm") v = apqm_norm(fs, p, qq, mf(w), d, q);
                if (norm == "local_mean") v = local_mean_functional(fs[0], sigma, alpha, e, d, q);
                if (norm == "hardy") {
                  const HardyResult h = norm_hardy(fs[0], p, w, q, per_octave);
                  v = {h.value, h.tolerance_met};
                  extra = {{"argmax_t", h.argmax_t}, {"heights", h.heights}, {"slice_norms", h.slice_norms}};
                }
                out.result = {{"norm", norm},     {"value", number_json(v.value)}, {"tolerance_met", v.tolerance_met},
                              {"window", w.describe()}, {"extra", extra}};
                if (!mlabel.empty()) out.result["measure"] = mlabel;
                return out;
              }};
}

Task bind_carleson(Reader& r, const Ctx& c) {
  const int n = c.task_window.n;
  const Window w = c.task_window;
  auto [ms, mr] = parse_measure(r.raw("measure"), r.at("measure"), n);
  r.set("measure", mr);
  double E = 0.0;
  if (r.has("exponent")) {
    if (r.has("theorem")) throw ConfigError(r.at("theorem") + ": give either exponent or theorem, not both");
    E = r.number("exponent");
  } else {
    const std::string th = r.string("theorem");
    const TheoremId id = guarded(r.at("theorem"), [&] { return parse_theorem(th); });
    auto [P, pr] = parse_theorem_params(r.has("params") ? &r.raw("params") : nullptr, r.at("params"), id, n);
    r.set("params", pr);
    E = required_exponent(id, P);
  }
  const double tol = r.number("trend_tol", 0.1);
  const bool ratios = r.boolean("ratios", false);
  const bool plot = r.boolean("plot", true);
  const auto expect = parse_expect(r);
  return Task{"", "carleson", [=] {
                const WhitneyDecomposition d(w);
                const CarlesonReport cr = carleson_sweep(ms.make(w), d, E);
                TaskOutput out;
                const bool bounded = std::all_of(cr.trend.begin(), cr.trend.end(),
                                                 [&](double t) { return t <= 1.0 + tol && t >= 1.0 / (1.0 + tol); });
                const Verdict v = bounded ? Verdict::kBounded : Verdict::kInconclusive;
                out.result = {{"measure", ms.label},
                              {"window", w.describe()},
                              {"carleson", carleson_to_json(cr, ratios)},
                              {"trend_tol", tol},
                              {"verdict", verdict_name(v)}};
                if (expect) out.checks.push_back({"carleson", v, expect});
                if (plot) {
                  const PlotData pd = plot_data(out.result);
                  std::ostringstream s;
                  write_plot_csv(pd, s);
                  out.files.emplace_back(".plot.csv", s.str());
                  out.result["plot"] = {{"slope", pd.slope}, {"intercept", pd.intercept}};
                }
                return out;
              }};
}

Task bind_verify(Reader& r, const Ctx& c) {
  const std::string mode = r.string("mode");
  const int n = c.task_window.n;
  const auto expect = parse_expect(r);
  auto [vc, vr] = parse_verifier(r.has("verifier") ? &r.raw("verifier") : nullptr, r.at("verifier"), c.task_window,
                                 c.task_quad, c.seed);
  r.set("verifier", vr);
  const auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (r.has(k)) throw ConfigError(r.at(k) + ": not used in " + mode + " mode");
    }
  };
  if (mode == "sufficiency" || mode == "necessity") {
    reject({"lemma", "lemma_params", "p", "q", "alpha", "windows"});
    const std::string th = r.string("theorem");
    const TheoremId id = guarded(r.at("theorem"), [&] { return parse_theorem(th); });
    auto [P, pr] = parse_theorem_params(r.has("params") ? &r.raw("params") : nullptr, r.at("params"), id, n);
    r.set("params", pr);
    if (mode == "sufficiency") {
      reject({"epsilon", "l"});
      auto [ms, mr] = parse_measure(r.raw("measure"), r.at("measure"), n);
      r.set("measure", mr);
      auto [fam, fr] = parse_family(r.has("family") ? &r.raw("family") : nullptr, r.at("family"), c.seed);
      r.set("family", fr);
      return Task{"", "verify", [=] {
                    const VerdictReport rep = verify_sufficiency(id, P, ms.make(vc.window), fam, vc);
                    TaskOutput out;
                    out.result = report_to_json(rep);
                    out.checks.push_back(check_of(rep.theorem_id, rep, expect));
                    out.cases = rep;
                    return out;
                  }};
    }
    reject({"measure", "family"});
    const double eps = r.number("epsilon");
    if (!(eps > 0.0)) throw ConfigError(r.at("epsilon") + ": constraint violated: epsilon > 0");
    const int l = static_cast<int>(r.integer("l", -1));
    guarded(r.path(), [&] { return minimal_test_order(id, P); });
    return Task{"", "verify", [=] {
                  const NecessityPair pair = verify_necessity_pair(id, P, eps, l, vc);
                  TaskOutput out;
                  out.result = {{"main", report_to_json(pair.main)},
                                {"control", report_to_json(pair.control)},
                                {"verdict", verdict_name(pair.verdict)}};
                  out.checks.push_back({pair.main.theorem_id + "+control", pair.verdict,
                                        expect ? expect : std::optional<Verdict>(Verdict::kDiverging)});
                  VerdictReport both = pair.main;
                  for (CaseRecord cr : pair.control.cases) {
                    cr.id = "control:" + cr.id;
                    both.cases.push_back(cr);
                  }
                  out.cases = both;
                  return out;
                }};
  }
  if (mode == "equivalence") {
    reject({"theorem", "params", "measure", "family", "epsilon", "l", "p", "q", "alpha", "windows"});
    const std::string ln = r.string("lemma");
    const LemmaId id = guarded(r.at("lemma"), [&] { return parse_lemma(ln); });
    auto [lp, lr] = parse_lemma_params(r.has("lemma_params") ? &r.raw("lemma_params") : nullptr, r.at("lemma_params"), id);
    r.set("lemma_params", lr);
    return Task{"", "verify", [=] {
                  const VerdictReport rep = check_equivalence(id, lp, vc);
                  TaskOutput out;
                  out.result = report_to_json(rep);
                  out.checks.push_back(check_of(rep.theorem_id, rep, expect));
                  out.cases = rep;
                  return out;
                }};
  }
  if (mode == "theorem7") {
    reject({"theorem", "params", "family", "epsilon", "l", "lemma", "lemma_params"});
    const double p = r.number("p");
    const double q = r.number("q");
    const double alpha = r.number("alpha");
    if (!(p > 0.0 && p < q)) {
      throw ConfigError(fmt::format("{}: constraint violated: 0 < p < q (p={}, q={})", r.path(), p, q));
    }
    if (!(alpha > 0.0)) throw ConfigError(r.at("alpha") + ": constraint violated: alpha > 0");
    auto [ms, mr] = parse_measure(r.raw("measure"), r.at("measure"), n);
    r.set("measure", mr);
    const int windows = static_cast<int>(r.integer("windows", 3));
    if (windows < 2) throw ConfigError(r.at("windows") + ": need at least 2 windows");
    return Task{"", "verify", [=] {
                  const VerdictReport rep = theorem7_check(p, q, alpha, ms.make, ms.label, vc, windows);
                  TaskOutput out;
                  out.result = report_to_json(rep);
                  out.checks.push_back(check_of(rep.theorem_id, rep, expect));
                  out.cases = rep;
                  return out;
                }};
  }
  throw ConfigError(r.at("mode") + ": must be one of sufficiency, necessity, equivalence, theorem7");
}

SchurInput parse_schur_input(const json& j, const std::string& path, int n) {
  Reader r(j, path, {"kind", "lambda", "boxes"});
  const std::string kind = r.string("kind");
  SchurInput g;
  if (kind == "power") {
    g.kind = SchurInput::Kind::kPower;
    g.lambda = r.number("lambda");
  } else if (kind == "cubes") {
    g.kind = SchurInput::Kind::kCubes;
    const json& boxes = r.raw("boxes");
    if (!boxes.is_array()) throw ConfigError(r.at("boxes") + ": expected an array");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string bp = fmt::format("{}[{}]", r.at("boxes"), i);
      Reader b(boxes[i], bp, {"lo", "hi", "weight"});
      const Point lo = parse_point(b.raw("lo"), b.at("lo"), n);
      const Point hi = parse_point(b.raw("hi"), b.at("hi"), n);
      for (int a = 0; a <= n; ++a) {
        if (!(hi[a] > lo[a])) throw ConfigError(bp + ": need lo < hi on every axis");
      }
      const double w = b.number("weight", 1.0);
      if (!(w >= 0.0)) throw ConfigError(b.at("weight") + ": must be nonnegative");
      g.boxes.emplace_back(Box{lo, hi}, w);
    }
  } else if (kind == "zero") {
    g.kind = SchurInput::Kind::kZero;
  } else {
    throw ConfigError(r.at("kind") + ": must be power, cubes or zero");
  }
  return g;
}

Task bind_schur(Reader& r, const Ctx& c) {
  const std::string mode = r.string("mode");
  const int n = c.task_window.n;
  const auto expect = parse_expect(r);
  auto [vc, vr] = parse_verifier(r.has("verifier") ? &r.raw("verifier") : nullptr, r.at("verifier"), c.task_window,
                                 c.task_quad, c.seed);
  r.set("verifier", vr);
  const double beta = r.number("beta");
  if (!(beta > 0.0)) throw ConfigError(r.at("beta") + ": constraint violated: beta > 0");
  if (mode == "slope") {
    const double p = r.number("p");
    const double lambda = r.number("lambda");
    const auto heights = r.numbers("heights", std::vector<double>{0.5, 1.0, 2.0});
    const double tol = r.number("slope_tol", 0.05);
    guarded(r.path(), [&] {
      const auto [lo, hi] = schur_window(n, p, beta);
      if (!(lambda > lo && lambda < hi)) {
        throw RejectedConfigurationError(fmt::format(
            "constraint violated: max(-beta n / q', (-n - 2 beta n) / p) < lambda < 0 (window ({}, {}))", lo, hi));
      }
      return 0;
    });
    return Task{"", "schur", [=] {
                  const VerdictReport rep = schur_slope(p, beta, lambda, heights, vc, tol);
                  TaskOutput out;
                  out.result = report_to_json(rep);
                  out.checks.push_back(check_of(rep.theorem_id, rep, expect));
                  out.cases = rep;
                  const PlotData pd = plot_data(out.result);
                  std::ostringstream s;
                  write_plot_csv(pd, s);
                  out.files.emplace_back(".plot.csv", s.str());
                  return out;
                }};
  }
  if (mode == "probe") {
    const double p = r.number("p");
    const int count = static_cast<int>(r.integer("count", 10));
    const std::string family = r.string("family", "seeded");
    if (family != "seeded" && family != "zero") throw ConfigError(r.at("family") + ": must be seeded or zero");
    if (count < 1) throw ConfigError(r.at("count") + ": must be positive");
    guarded(r.path(), [&] { return schur_window(n, p, beta).first; });
    const std::uint64_t seed = c.seed;
    return Task{"", "schur", [=] {
                  std::vector<SchurInput> fam = family == "zero" ? std::vector<SchurInput>(static_cast<std::size_t>(count))
                                                                 : schur_family(n, count, seed);
                  const VerdictReport rep = schur_probe(p, beta, fam, vc);
                  TaskOutput out;
                  out.result = report_to_json(rep);
                  out.checks.push_back(check_of(rep.theorem_id, rep, expect));
                  out.cases = rep;
                  return out;
                }};
  }
  if (mode == "apply") {
    const SchurInput g = parse_schur_input(r.raw("g"), r.at("g"), n);
    const json& pr = r.raw("probes");
    if (!pr.is_array() || pr.empty()) throw ConfigError(r.at("probes") + ": expected a nonempty array of points");
    std::vector<Point> probes;
    for (std::size_t i = 0; i < pr.size(); ++i) probes.push_back(parse_point(pr[i], fmt::format("{}[{}]", r.at("probes"), i), n));
    return Task{"", "schur", [=] {
                  const std::vector<double> v = schur_apply(g, beta, probes, vc.window, vc.quad);
                  TaskOutput out;
                  json pts = json::array();
                  for (const Point& z : probes) pts.push_back(point_json(z));
                  out.result = {{"g", g.describe()}, {"probes", pts}, {"values", v}, {"window", vc.window.describe()}};
                  return out;
                }};
  }
  throw ConfigError(r.at("mode") + ": must be one of slope, probe, apply");
}

// Scale sweeps of closed-form power laws.
Task bind_sweep(Reader& r, const Ctx& c) {
  const std::string kind = r.string("kind");
  const int n = c.task_window.n;
  const Window w = c.task_window;
  const QuadratureConfig q = c.task_quad;
  const auto expect = parse_expect(r);
  const double tol = r.number("slope_tol", 0.05);
  const auto scales = r.numbers("scales", std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0});
  if (scales.size() < 3) throw ConfigError(r.at("scales") + ": need at least 3 scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || (i > 0 && !(scales[i] > scales[i - 1]))) {
      throw ConfigError(r.at("scales") + ": scales must be positive and strictly increasing");
    }
  }
  std::function<double(double)> value;
  double expected = 0.0;
  if (kind == "omit") {
    const double alpha = r.number("alpha", 0.0);
    const double gamma = r.number("gamma", 2.0);
    if (!(n + alpha < 2 * gamma - 1)) throw ConfigError(r.path() + ": constraint violated: n + alpha < 2 gamma - 1");
    expected = alpha + n + 1 - 2 * gamma;
    value = [=](double s) {
      const Point wp = Point::uniform(n, 0.0, s);
      return integrate_halfspace(
                 [&](const Point& z) {
                   const double rho = reflected_distance(z, wp);
                   return std::pow(z.t(), alpha) * std::pow(rho * rho, -gamma);
                 },
                 WhitneyDecomposition(w), q)
          .value;
    };
  } else if (kind == "as4") {
    const double s = r.number("s", 2.0);
    const double t = r.number("t", 2.0);
    const double beta = r.number("beta", 0.0);
    const int l = static_cast<int>(r.integer("l", 1));
    expected = n / s - (n - 1 + l - (beta + 1) / s);
    value = [=](double sc) {
      return norm_F(HarmonicFunction::test(Point::uniform(n, 0.0, sc), l), s, t, (beta + 1) / s, w, q).value;
    };
  } else if (kind == "bergman") {
    const double p = r.number("p", 2.0);
    const double lambda = r.number("lambda", 0.0);
    const int l = static_cast<int>(r.integer("l", 1));
    expected = (n + 1 + lambda) / p - (n - 1 + l);
    value = [=](double sc) {
      return norm_A(HarmonicFunction::test(Point::uniform(n, 0.0, sc), l), p, lambda, WhitneyDecomposition(w), q).value;
    };
  } else if (kind == "local_mean") {
    const double sigma = r.number("sigma", 2.0);
    const double alpha = r.number("alpha", 0.0);
    const double e = r.number("e", 1.0);
    const int l = static_cast<int>(r.integer("l", 3));
    expected = n + 1 + e * (n + 1 + alpha - sigma * (n - 1 + l));
    value = [=](double sc) {
      return local_mean_functional(HarmonicFunction::test(Point::uniform(n, 0.0, sc), l), sigma, alpha, e,
                                   WhitneyDecomposition(w), q)
          .value;
    };
  } else if (kind == "slice") {
    const double p = r.number("p", 2.0);
    if (!(p >= 1.0)) throw ConfigError(r.at("p") + ": need p >= 1");
    expected = -n * (1.0 - 1.0 / p);
    const HarmonicFunction f = HarmonicFunction::poisson(Point::uniform(n, 0.0, 0.0), 0.0);
    value = [=](double t) { return slice_norm(f, p, t, w.x_half_width, q).value; };
  } else {
    throw ConfigError(r.at("kind") + ": must be one of omit, as4, bergman, local_mean, slice");
  }
  return Task{"", "sweep", [=] {
                std::vector<double> values;
                for (double s : scales) values.push_back(value(s));
                TaskOutput out;
                const SlopeFit fit = fit_power_law(scales, values);
                const Verdict v = std::abs(fit.slope - expected) <= tol ? Verdict::kExactPass : Verdict::kFail;
                out.result = {{"kind", kind},
                              {"window", w.describe()},
                              {"sweep", {{"scales", scales}, {"values", values}}},
                              {"slope", fit.slope},
                              {"intercept", fit.intercept},
                              {"expected_slope", expected},
                              {"slope_tol", tol},
                              {"verdict", verdict_name(v)}};
                out.checks.push_back({"sweep/" + kind, v, expect});
                const PlotData pd = plot_data(out.result);
                std::ostringstream s;
                write_plot_csv(pd, s);
                out.files.emplace_back(".plot.csv", s.str());
                return out;
              }};
}

bool safe_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
  }) && s.front() != '.';
}

}  // namespace

RunConfig parse_run_config(const json& root) {
  Reader top(root, "$", {"window", "quadrature", "seed", "output", "tasks"});
  RunConfig cfg;
  auto [w, wr] = parse_window(top.has("window") ? &top.raw("window") : nullptr, "$.window", Window{});
  cfg.window = w;
  top.set("window", wr);
  auto [q, qr] = parse_quad(top.has("quadrature") ? &top.raw("quadrature") : nullptr, "$.quadrature",
                            QuadratureConfig{});
  cfg.quad = q;
  top.set("quadrature", qr);
  const auto seed = top.integer("seed", 1);
  if (seed < 0) throw ConfigError("$.seed: must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  {
    Reader out(top.has("output") ? top.raw("output") : kEmpty, "$.output", {"directory", "formats"});
    cfg.directory = out.string("directory", cfg.directory);
    const json fmts = top.has("output") && top.raw("output").contains("formats") ? top.raw("output")["formats"]
                                                                                 : json::array({"json"});
    if (!fmts.is_array() || fmts.empty()) throw ConfigError("$.output.formats: expected a nonempty array");
    cfg.formats.clear();
    for (std::size_t i = 0; i < fmts.size(); ++i) {
      if (!fmts[i].is_string() || (fmts[i] != "json" && fmts[i] != "csv")) {
        throw ConfigError(fmt::format("$.output.formats[{}]: must be \"json\" or \"csv\"", i));
      }
      cfg.formats.push_back(fmts[i].get<std::string>());
    }
    out.set("formats", cfg.formats);
    top.set("output", out.resolved());
  }

  const json& tasks = top.raw("tasks");
  if (!tasks.is_array() || tasks.empty()) throw ConfigError("$.tasks: expected a nonempty array");
  json resolved_tasks = json::array();
  std::set<std::string> names;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = fmt::format("$.tasks[{}]", i);
    const json& t = tasks[i];
    if (!t.is_object() || !t.contains("type") || !t["type"].is_string()) {
      throw ConfigError(path + ".type: required string (decompose, norm, carleson, verify, schur, sweep)");
    }
    const std::string type = t["type"].get<std::string>();
    static const std::map<std::string, std::vector<std::string>> kKeys{
        {"decompose", {"type", "name", "window"}},
        {"norm",
         {"type", "name", "window", "quadrature", "norm", "function", "functions", "p", "q", "lambda", "alpha", "sigma",
          "e", "measure", "per_octave"}},
        {"carleson",
         {"type", "name", "window", "measure", "exponent", "theorem", "params", "trend_tol", "ratios", "plot",
          "expect"}},
        {"verify",
         {"type", "name", "window", "quadrature", "mode", "theorem", "params", "measure", "family", "epsilon", "l",
          "lemma", "lemma_params", "p", "q", "alpha", "windows", "verifier", "expect"}},
        {"schur",
         {"type", "name", "window", "quadrature", "mode", "p", "beta", "lambda", "heights", "slope_tol", "count",
          "family", "g", "probes", "verifier", "expect"}},
        {"sweep",
         {"type", "name", "window", "quadrature", "kind", "scales", "slope_tol", "alpha", "gamma", "s", "t", "beta",
          "l", "p", "lambda", "sigma", "e", "expect"}}};
    const auto it = kKeys.find(type);
    if (it == kKeys.end()) {
      throw ConfigError(path + ".type: unknown task type '" + type +
                        "' (decompose, norm, carleson, verify, schur, sweep)");
    }
    Reader r(t, path, it->second);
    r.string("type");
    const std::string name = r.string("name", fmt::format("{:02d}_{}", i, type));
    if (!safe_name(name)) throw ConfigError(r.at("name") + ": use letters, digits, '_', '-' and '.' only");
    if (!names.insert(name).second) throw ConfigError(r.at("name") + ": duplicate task name '" + name + "'");
    Ctx ctx{cfg.window, cfg.quad, cfg.seed, cfg.window, cfg.quad};
    auto [tw, twr] = parse_window(r.has("window") ? &r.raw("window") : nullptr, r.at("window"), cfg.window);
    ctx.task_window = tw;
    r.set("window", twr);
    if (type != "decompose" && type != "carleson") {
      auto [tq, tqr] = parse_quad(r.has("quadrature") ? &r.raw("quadrature") : nullptr, r.at("quadrature"), cfg.quad);
      ctx.task_quad = tq;
      r.set("quadrature", tqr);
    }
    Task task;
    if (type == "decompose") task = bind_decompose(r, ctx);
    if (type == "norm") task = bind_norm(r, ctx);
    if (type == "carleson") task = bind_carleson(r, ctx);
    if (type == "verify") task = bind_verify(r, ctx);
    if (type == "schur") task = bind_schur(r, ctx);
    if (type == "sweep") task = bind_sweep(r, ctx);
    task.name = name;
    task.type = type;
    cfg.tasks.push_back(std::move(task));
    resolved_tasks.push_back(r.resolved());
  }
  top.set("tasks", resolved_tasks);
  cfg.resolved = top.resolved();
  return cfg;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
  if (!f) throw Error("write failed for " + p.string());
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  RunResult res;
  const std::filesystem::path dir = opts.out_dir.value_or(cfg.directory);
  const bool want_json = std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end();
  const bool want_csv = std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end();
  bool all_ok = true;
  try {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
      const Task& task = cfg.tasks[i];
      const auto t0 = std::chrono::steady_clock::now();
      if (opts.verbose) err << fmt::format("[{}/{}] {} ({})\n", i + 1, cfg.tasks.size(), task.name, task.type);
      TaskOutput o;
      try {
        o = task.run();
      } catch (const Error& e) {
        throw Error(fmt::format("task {}: {}", task.name, e.what()));
      }
      json checks = json::array();
      bool ok = true;
      for (const TaskCheck& c : o.checks) {
        checks.push_back({{"label", c.label},
                          {"verdict", verdict_name(c.verdict)},
                          {"expected", c.expected ? json(verdict_name(*c.expected)) : json(nullptr)},
                          {"ok", c.ok()}});
        ok = ok && c.ok();
      }
      all_ok = all_ok && ok;
      const json report{{"schema", kReportSchema},
                        {"version", version_string()},
                        {"config", cfg.resolved},
                        {"task", {{"index", i}, {"name", task.name}, {"type", task.type}}},
                        {"result", o.result},
                        {"status", {{"checks", checks}, {"ok", ok}}}};
      if (want_json) {
        const auto p = dir / (task.name + ".json");
        write_file(p, dump_json(report));
        res.files.push_back(p.string());
      }
      if (want_csv && o.cases) {
        std::ostringstream s;
        write_cases_csv(*o.cases, s);
        const auto p = dir / (task.name + ".csv");
        write_file(p, s.str());
        res.files.push_back(p.string());
      }
      for (const auto& [suffix, content] : o.files) {
        const auto p = dir / (task.name + suffix);
        write_file(p, content);
        res.files.push_back(p.string());
      }
      std::string summary;
      for (const TaskCheck& c : o.checks) {
        summary += fmt::format(" {}={}{}", c.label, verdict_name(c.verdict),
                               c.expected ? " (expected " + verdict_name(*c.expected) + ")" : "");
      }
      out << fmt::format("{} {}:{}\n", ok ? "ok  " : "FAIL", task.name, summary.empty() ? " done" : summary);
      if (opts.verbose) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        err << fmt::format("    {:.2f} s\n", secs);
      }
    }
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.error = e.what();
    err << "error: " << e.what() << "\n";
    return res;
  }
  res.exit_code = all_ok ? 0 : 1;
  return res;
}

RunResult run_config_file(const std::string& path, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  RunResult res;
  RunConfig cfg;
  try {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    json root;
    try {
      root = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("$: invalid JSON: ") + e.what());
    }
    cfg = parse_run_config(root);
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.error = e.what();
    err << "config error: " << e.what() << "\n";
    return res;
  }
  return run(cfg, opts, out, err);
}

std::string list_theorems() {
  std::string s;
  s += "theorems (verify mode sufficiency | necessity):\n";
  s += "  T1   product embedding into L^1(mu), exponent m(n+1+alpha)\n";
  s += "  T2   A(s,beta_i) tuples into A(p,q,m,mu)\n";
  s += "  T3B  B^{s,t_i} mixed-norm tuples into A(p,q,m,mu)\n";
  s += "  T3F  F^{s,t_i} mixed-norm tuples into A(p,q,m,mu)\n";
  s += "  T4   local-mean tuples into A(p,q,m,mu), m in {1, 2}\n";
  s += "  T5   local-mean tuples, product in L^1(mu)\n";
  s += "  T8   A(p,alpha) into the Herz space K^p_q(mu)\n";
  s += "  T7   sum/integral equivalence (verify mode theorem7)\n";
  s += "lemmas (verify mode equivalence):\n";
  for (int i = 0; i <= static_cast<int>(LemmaId::kCorollary2); ++i) s += "  " + lemma_name(static_cast<LemmaId>(i)) + "\n";
  s += "other tasks: decompose, norm, carleson, schur (slope | probe | apply), sweep (omit | as4 | bergman | "
       "local_mean | slice)\n";
  return s;
}

}  // namespace hc
