// Acceptance run: one PASS/FAIL line per criterion. Pass a list of criterion
// numbers to run a subset.
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcarleson/geometry.hpp"
#include "hcarleson/harmonic.hpp"
#include "hcarleson/measures.hpp"
#include "hcarleson/norms.hpp"
#include "hcarleson/random.hpp"
#include "hcarleson/verifiers.hpp"

using namespace hc;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, pinned.
constexpr double kMetricTol = 1e-12;
constexpr int kLocateSamples = 10000;
constexpr int kOverlapSamples = 100000;
constexpr int kMaxOverlap = 8;
constexpr double kWhitneySeconds = 10.0;
constexpr double kSlopeTol = 0.05;
constexpr double kOmitSeconds = 60.0;
constexpr double kMlamTol = 1e-10;
constexpr double kBracket = 50.0;
constexpr double kStabilityTol = 0.20;
constexpr double kT1Seconds = 600.0;
constexpr double kHomogeneityTol = 1e-12;
constexpr double kKppTol = 1e-3;
constexpr double kCoGrowth = 1.5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string verdicts(const VerdictReport& r) {
  std::string s = verdict_name(r.verdict);
  if (r.window_change) s += fmt::format(" (window change {:.3f})", *r.window_change);
  if (!r.flags.empty()) {
    s += " [";
    for (std::size_t i = 0; i < r.flags.size(); ++i) s += (i ? ", " : "") + r.flags[i];
    s += "]";
  }
  return s;
}

std::string trends(const VerdictReport& r) {
  std::string s;
  for (double t : r.trend) s += fmt::format("{}{:.3f}", s.empty() ? "" : " ", t);
  return "[" + s + "]";
}

VerifierConfig base_cfg();

// Sufficiency bounded and stable; necessity diverging over >= 3 levels above
// the floor; control bounded. The sufficiency probes stay two levels clear of
// the window floor and top, where truncation shifts the ratios; the necessity
// run keeps four probe levels so that three trends exist.
Outcome triple(const std::string& label, TheoremId id, const TheoremParams& P, const Measure& mu,
               const FamilySpec& fam, double epsilon, int l = -1) {
  const VerifierConfig cfg = base_cfg();
  VerifierConfig inner = cfg;
  inner.probe_level_min = -1;
  inner.probe_level_max = 1;
  const VerdictReport s = verify_sufficiency(id, P, mu, fam, inner);
  const NecessityPair n = verify_necessity_pair(id, P, epsilon, l, cfg);
  const bool s_ok = s.verdict == Verdict::kBounded && s.window_change && *s.window_change <= kStabilityTol;
  int run = 0, best = 0;
  for (double t : n.main.trend) {
    run = t >= std::exp2(0.25) ? run + 1 : 0;
    best = std::max(best, run);
  }
  const bool n_ok = n.main.verdict == Verdict::kDiverging && best >= 3;
  const bool c_ok = n.control.verdict == Verdict::kBounded;
  return {s_ok && n_ok && c_ok,
          fmt::format("{}: sufficiency {} trends {}; necessity {} trends {}; control {} trends {}", label,
                      verdicts(s), trends(s), verdicts(n.main), trends(n.main), verdicts(n.control),
                      trends(n.control))};
}

VerifierConfig base_cfg() {
  VerifierConfig c;
  c.window = Window{2, -3, 3, 8.0};
  c.quad = QuadratureConfig{2, 3, 1e-3, 0.0, 1};
  c.probe_level_min = -2;
  c.probe_level_max = 1;
  c.stability_tol = kStabilityTol;
  return c;
}

// 1. Whitney exactness.
Outcome whitney() {
  const auto t0 = std::chrono::steady_clock::now();
  const Window w{2, -4, 4, 32.0};
  const WhitneyDecomposition d(w);
  double worst_dist = 0.0, worst_ratio = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Cube c = d[i];
    const double side = std::ldexp(1.0, c.level());
    // distance from the closed box to t = 0 is its lower face height
    worst_dist = std::max(worst_dist, std::abs(c.box().lo.t() - side) / side);
    worst_ratio = std::max(worst_ratio, std::abs(c.diameter() / c.boundary_distance() - std::sqrt(3.0)));
  }
  Rng rng(2024);
  int bad_locate = 0;
  for (int s = 0; s < kLocateSamples; ++s) {
    const Point z({rng.uniform(-32.0, 32.0), rng.uniform(-32.0, 32.0)}, std::exp2(rng.uniform(-4.0, 5.0)));
    int interiors = 0;
    for (std::size_t k : d.cubes_containing(z)) interiors += d[k].box().interior_contains(z) ? 1 : 0;
    bad_locate += interiors == 1 ? 0 : 1;
  }
  int worst_overlap = 0;
  for (int s = 0; s < kOverlapSamples; ++s) {
    const Point z({rng.uniform(-32.0, 32.0), rng.uniform(-32.0, 32.0)}, std::exp2(rng.uniform(-4.0, 5.0)));
    worst_overlap = std::max(worst_overlap, overlap_count(d, z));
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_dist <= kMetricTol && worst_ratio <= kMetricTol && bad_locate == 0 &&
                    worst_overlap <= kMaxOverlap && secs < kWhitneySeconds;
  return {pass, fmt::format("{} cubes, dist err {:.1e}, diam/dist err {:.1e}, {} bad of {} located, max overlap "
                            "{}, {:.1f} s",
                            d.size(), worst_dist, worst_ratio, bad_locate, kLocateSamples, worst_overlap, secs)};
}

// 2. Scale sweep of the reflected-distance integral.
Outcome omit_slope() {
  const auto t0 = std::chrono::steady_clock::now();
  VerifierConfig c = base_cfg();
  c.window = Window{2, -4, 4, 32.0};
  c.quad = QuadratureConfig{2, 3, 1e-3, 0.0, 1};
  LemmaParams lp = default_lemma_params(LemmaId::kOmit);
  lp.alpha = 0.0;
  lp.gamma = 2.0;
  lp.scales = {0.25, 0.5, 1.0, 2.0, 4.0};
  lp.slope_tol = kSlopeTol;
  const VerdictReport r = check_equivalence(LemmaId::kOmit, lp, c);
  const double slope = r.extra["slope"].get<double>();
  const double secs = seconds_since(t0);
  return {std::abs(slope + 1.0) <= kSlopeTol && secs < kOmitSeconds,
          fmt::format("slope {:.4f} (expected -1 +/- {}), {:.1f} s", slope, kSlopeTol, secs)};
}

// 3. m_lambda(cube) / eta^(n+1+lambda) is one constant.
Outcome mlam() {
  const WhitneyDecomposition d(Window{2, -4, 4, 32.0});
  double worst = 0.0;
  for (double lam : {0.0, 1.0, 2.5}) {
    const Measure mu = Measure::m_lambda(lam);
    const double ref = mu.mass(d[0]) / std::pow(d[0].eta(), 3.0 + lam);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double v = mu.mass(d[i]) / std::pow(d[i].eta(), 3.0 + lam);
      worst = std::max(worst, std::abs(v / ref - 1.0));
    }
  }
  VerifierConfig c = base_cfg();
  c.window = Window{2, -4, 4, 32.0};
  const VerdictReport r = check_equivalence(LemmaId::kMlam, default_lemma_params(LemmaId::kMlam), c);
  return {worst <= kMlamTol && r.verdict == Verdict::kExactPass,
          fmt::format("{} cubes, max relative deviation {:.2e}; verifier {}", d.size(), worst, verdicts(r))};
}

// 4. Two-sided brackets over 10 zoo functions and 5 levels.
Outcome brackets() {
  VerifierConfig c = base_cfg();
  c.window = Window{2, -3, 3, 8.0};
  c.quad = QuadratureConfig{2, 2, 1e-2, 0.0, 1};
  c.probe_level_min = -2;
  c.probe_level_max = 2;
  bool pass = true;
  std::string detail;
  for (LemmaId id : {LemmaId::kLemmaB, LemmaId::kIsum, LemmaId::kPrepl}) {
    LemmaParams lp = default_lemma_params(id);
    lp.functions = 10;
    lp.bracket = kBracket;
    const VerdictReport r = check_equivalence(id, lp, c);
    std::set<int> levels;
    for (const CaseRecord& k : r.cases) levels.insert(k.level);
    const bool ok = r.verdict == Verdict::kBounded && r.min_ratio > 0.0 && r.spread <= kBracket && levels.size() == 5;
    pass = pass && ok;
    detail += fmt::format("{}{} spread {:.2f} min {:.3g} over {} cases", detail.empty() ? "" : "; ", lemma_name(id),
                          r.spread, r.min_ratio, r.cases.size());
  }
  return {pass, detail};
}

// 5. Product embedding into L^1(mu).
Outcome theorem1() {
  const auto t0 = std::chrono::steady_clock::now();
  TheoremParams P;
  P.n = 2;
  P.m = 2;
  // Small p_i keep the mass of the left side near the anchor height.
  P.p_i = {2.0, 2.0};
  P.q_i = {2.0, 2.0};
  P.alpha = 0.0;
  FamilySpec fam;
  fam.count = 4;
  fam.seed = 5;
  Outcome o = triple("T1", TheoremId::kT1, P, Measure::m_lambda(3.0), fam, 0.5);
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < kT1Seconds;
  o.detail += fmt::format("; {:.1f} s", secs);
  return o;
}

// 6. The remaining embeddings. Parameters keep every integrand decaying
// fast both toward the boundary and at infinity, so that the window edges
// barely move the ratios.
Outcome embeddings() {
  bool pass = true;
  std::string detail;
  auto add = [&](const Outcome& o) {
    pass = pass && o.pass;
    detail += (detail.empty() ? "" : " | ") + o.detail;
  };
  FamilySpec fam;
  fam.count = 3;
  fam.seed = 11;
  fam.zoo.l_min = 3;
  fam.zoo.l_max = 4;
  fam.zoo.allow_poisson = false;
  {
    TheoremParams P;
    P.m = 2;
    P.p = 2.0;
    P.q = 6.0;
    P.s = 4.5;
    P.beta_i = {4.5, 4.5};
    FamilySpec low = fam;
    low.zoo.l_min = 2;
    low.zoo.l_max = 3;
    add(triple("T2", TheoremId::kT2, P, Measure::m_lambda(required_exponent(TheoremId::kT2, P) - 3.0), low, 0.5, 2));
  }
  {
    TheoremParams P;
    P.m = 2;
    P.p = 2.0;
    P.q = 4.0;
    P.sigma_i = {2.0, 2.0};
    P.alpha_i = {0.0, 0.0};
    add(triple("T4", TheoremId::kT4, P, Measure::m_lambda(required_exponent(TheoremId::kT4, P) - 3.0), fam, 0.5, 3));
  }
  {
    TheoremParams P;
    P.m = 2;
    P.p_i = {4.0, 4.0};
    P.sigma_i = {2.0, 2.0};
    P.alpha_i = {0.0, 0.0};
    add(triple("T5", TheoremId::kT5, P, Measure::m_lambda(required_exponent(TheoremId::kT5, P) - 3.0), fam, 0.5, 3));
  }
  {
    TheoremParams P;
    P.m = 1;
    P.p = 3.0;
    P.q = 6.0;
    P.alpha = 4.0;
    add(triple("T8", TheoremId::kT8, P, Measure::m_lambda(required_exponent(TheoremId::kT8, P) - 3.0), fam, 0.5, 3));
  }
  return {pass, detail};
}

// 7. Schur operator.
Outcome schur() {
  VerifierConfig c = base_cfg();
  c.window = Window{2, -2, 2, 4.0};
  c.quad = QuadratureConfig{2, 3, 1e-3, 0.0, 1};
  const VerdictReport s = schur_slope(2.0, 1.0, -0.5, {0.25, 0.5, 1.0, 2.0, 4.0}, c, kSlopeTol);
  const double slope = s.extra["slope"].get<double>();
  const VerdictReport p = schur_probe(2.0, 1.0, schur_family(2, 10, 17), c);
  const bool ok = std::abs(slope + 0.5) <= kSlopeTol && p.verdict == Verdict::kBounded && p.window_change &&
                  *p.window_change <= kStabilityTol;
  return {ok, fmt::format("slope {:.4f} for lambda -0.5; probe over {} inputs {}", slope, p.cases.size(),
                          verdicts(p))};
}

// 8. Sum and integral move together.
Outcome theorem7() {
  VerifierConfig c = base_cfg();
  c.window = Window{2, -2, 0, 1.0};
  c.quad = QuadratureConfig{2, 2, 1e-2, 0.0, 1};
  c.stability_tol = kStabilityTol;
  auto run = [&](double e) {
    return theorem7_check(0.5, 2.0, 2.0, [e](const Window& w) { return Measure::cube_power(e, w); },
                          fmt::format("cube_power(e={})", e), c, 3);
  };
  const VerdictReport stable = run(7.0);
  const VerdictReport growing = run(3.0);
  const auto both = [](const VerdictReport& r, const char* a, const char* b) {
    return r.extra[a].get<bool>() && r.extra[b].get<bool>();
  };
  const bool s_ok = stable.verdict == Verdict::kBounded && both(stable, "condition1_stable", "condition2_stable");
  const bool g_ok =
      growing.verdict == Verdict::kDiverging && both(growing, "condition1_growing", "condition2_growing");
  auto growth = [](const VerdictReport& r) {
    return fmt::format("integral {} sum {}", r.extra["growth1"].dump(), r.extra["growth2"].dump());
  };
  return {s_ok && g_ok, fmt::format("p=0.5 q=2 alpha=2; e=7: {} ({}); e=3: {} ({}); growth floor {}", verdicts(stable), growth(stable),
                                    verdicts(growing), growth(growing), kCoGrowth)};
}

// 9. Exact identities.
Outcome exact() {
  VerifierConfig c = base_cfg();
  c.window = Window{2, -2, 1, 2.0};
  c.quad = QuadratureConfig{3, 4, 1e-5, 0.0, 1};
  c.probe_level_min = -1;
  c.probe_level_max = 0;
  LemmaParams lp = default_lemma_params(LemmaId::kKpqmon);
  const VerdictReport k = check_equivalence(LemmaId::kKpqmon, lp, c);
  const bool monotone = k.extra["monotone"].get<bool>();
  // homogeneity of f_{w,l}
  Rng rng(99);
  double worst = 0.0;
  for (int s = 0; s < 2000; ++s) {
    const int l = rng.integer(0, 5);
    const Point w({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, rng.uniform(0.1, 3.0));
    const Point z({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, rng.uniform(0.1, 3.0));
    const double delta = std::exp2(rng.integer(-6, 6));
    Point dw = w, dz = z;
    for (int a = 0; a < 3; ++a) {
      dw[a] *= delta;
      dz[a] *= delta;
    }
    const double base = HarmonicFunction::test(w, l)(z);
    const double scaled = HarmonicFunction::test(dw, l)(dz) * std::pow(delta, 1.0 + l);
    worst = std::max(worst, std::abs(scaled / base - 1.0));
  }
  // K^p_p(m_s) against A(p, s)^p
  const Window win{2, -3, 2, 4.0};
  const WhitneyDecomposition d(win);
  const QuadratureConfig q{3, 5, 1e-6, 0.0, 1};
  double kworst = 0.0;
  for (double s : {0.0, 1.0}) {
    for (int l : {1, 2, 3}) {
      const auto f = HarmonicFunction::test(Point({0.25, -0.5}, 0.75), l);
      if (2.0 * (1.0 + l) <= 3.0 + s) continue;
      const double kp = std::pow(norm_K(f, 2.0, 2.0, Measure::m_lambda(s), slabs_for_window(win), d, q).value, 2.0);
      const double ap = std::pow(norm_A(f, 2.0, s, d, q).value, 2.0);
      kworst = std::max(kworst, std::abs(kp / ap - 1.0));
    }
  }
  const bool pass = k.verdict == Verdict::kExactPass && monotone && worst <= kHomogeneityTol && kworst <= kKppTol;
  return {pass, fmt::format("monotone {} over {} functions; homogeneity max rel err {:.1e}; K^p_p vs A^p max rel "
                            "{:.1e} (verifier {:.1e})",
                            monotone, k.cases.size(), worst, kworst, k.extra["kpp_vs_a_max_rel"].get<double>())};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// 10. Two runs of the suite config through the command line.
Outcome reproducible() {
  const fs::path root = fs::temp_directory_path() / "hcarleson_acceptance";
  fs::remove_all(root);
  const std::string config = std::string(HC_SOURCE_DIR) + "/configs/suite.json";
  std::vector<fs::path> dirs{root / "a", root / "b"};
  for (const fs::path& d : dirs) {
    const std::string cmd = fmt::format("{} --config {} --out {} > /dev/null 2>&1", HC_CLI_PATH, config, d.string());
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, fmt::format("suite run exited with status {}", rc)};
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    ++files;
    const fs::path other = dirs[1] / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
  }
  const std::size_t files_b = static_cast<std::size_t>(std::distance(fs::directory_iterator(dirs[1]), {}));
  return {files > 0 && differing == 0 && files == files_b,
          fmt::format("{} report files, {} differing", files, differing)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> all{
      {1, whitney}, {2, omit_slope}, {3, mlam},    {4, brackets}, {5, theorem1},
      {6, embeddings}, {7, schur},   {8, theorem7}, {9, exact},   {10, reproducible}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    fmt::print("criterion {:2}: {} | {} ({:.1f} s)\n", id, o.pass ? "PASS" : "FAIL", o.detail, seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
