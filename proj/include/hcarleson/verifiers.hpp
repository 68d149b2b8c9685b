#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcarleson/geometry.hpp"
#include "hcarleson/harmonic.hpp"
#include "hcarleson/measures.hpp"
#include "hcarleson/norms.hpp"
#include "hcarleson/quadrature.hpp"

namespace hc {

using json = nlohmann::json;

enum class Verdict { kBounded, kDiverging, kInconclusive, kExactPass, kFail };

std::string verdict_name(Verdict v);
Verdict parse_verdict(const std::string& s);

struct CaseRecord {
  std::string id;
  int level = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct VerdictReport {
  std::string theorem_id;
  json params = json::object();
  std::string window;
  json family = json::object();
  std::vector<CaseRecord> cases;

  /// Degree of the left side in mu; trends use ratio^(1/kappa) so that a
  /// measure deficit of eps shows up as a per-level factor 2^eps.
  double kappa = 1.0;
  double sup_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;  // sup / min over positive ratios
  std::vector<int> levels;
  std::vector<double> level_max;  // normalized
  std::vector<double> trend;      // level_max[i] / level_max[i + 1]

  Verdict verdict = Verdict::kInconclusive;
  std::optional<Verdict> expected;
  double trend_tol = 0.1;
  double growth_floor = 1.0;
  int sustained_levels = 3;
  std::optional<double> window_change;
  bool tolerance_met = true;
  std::vector<std::string> flags;
  json extra = json::object();

  bool as_expected() const { return !expected || *expected == verdict; }
};

/// Settings shared by every verifier: the truncation window, the quadrature,
/// the levels at which families are recentered, and the verdict tolerances.
struct VerifierConfig {
  Window window{2, -3, 3, 8.0};
  QuadratureConfig quad{2, 4, 1e-3, 0.0, 1};
  int probe_level_min = -2;
  int probe_level_max = 1;
  double trend_tol = 0.1;
  double stability_tol = 0.2;
  bool check_stability = true;
  GrowthMode growth = GrowthMode::kFiner;
  int sustained_levels = 3;
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<int> probe_levels() const;
};

/// A family of harmonic functions (or m-tuples of them) that verifiers
/// recenter at cube centers.
struct FamilySpec {
  std::string kind = "combo";  // combo | test | poisson | zero
  int count = 10;
  int combo_size = 3;
  ZooOptions zoo;
  int l = 1;
  std::uint64_t seed = 1;

  void validate() const;
  json to_json() const;
};

/// Member `index`, tuple slot `slot`, anchored at `anchor`. Combos are exact
/// dilates of one another across anchors of the same shape.
HarmonicFunction family_member(const FamilySpec& spec, int n, int index, int slot, const Point& anchor);

/// Normalized-trend verdict from the case list: bounded when every trend lies
/// within [1/(1+tol), 1+tol], diverging when at least `sustained` consecutive
/// trends reach the growth floor, inconclusive otherwise or for a zero family.
void classify_trend(VerdictReport& r);

/// Left and right side of condition 1 for one tuple.
struct CaseValues {
  double lhs = 0.0;
  double rhs = 0.0;
  bool tolerance_met = true;
};

CaseValues evaluate_embedding(TheoremId id, const TheoremParams& params, const Measure& mu, const Tuple& fs,
                              const WhitneyDecomposition& d, const QuadratureConfig& cfg);

double theorem_kappa(TheoremId id, const TheoremParams& params);
int tuple_size(TheoremId id, const TheoremParams& params);

/// Smallest test-function order meeting the convergence constraint the proof
/// of the theorem imposes.
int minimal_test_order(TheoremId id, const TheoremParams& params);

VerdictReport verify_sufficiency(TheoremId id, const TheoremParams& params, const Measure& mu,
                                 const FamilySpec& family, const VerifierConfig& cfg);

/// Builds mu = cube_power(E - eps) on the window and evaluates the embedding
/// ratio for test functions centered at cube centers, one per probe level.
/// eps = 0 is the control run. `l` < 0 selects minimal_test_order.
VerdictReport verify_necessity(TheoremId id, const TheoremParams& params, double epsilon, int l,
                               const VerifierConfig& cfg, std::optional<double> growth_floor = std::nullopt);

struct NecessityPair {
  VerdictReport main;
  VerdictReport control;
  /// Diverging when the run diverges and the control stays bounded;
  /// inconclusive otherwise.
  Verdict verdict = Verdict::kInconclusive;
};

NecessityPair verify_necessity_pair(TheoremId id, const TheoremParams& params, double epsilon, int l,
                                    const VerifierConfig& cfg);

/// Center theta of a test function whose T-set catches the largest share of
/// mu on the cube, among `candidates` seeded centers with heights in
/// [eta/2, 2 eta] (the cube center itself is always a candidate).
struct ThetaChoice {
  Point theta;
  double captured = 0.0;  // mu(T_theta intersect cube)
  double cube_mass = 0.0;
  double tw_fraction = 0.0;
};

ThetaChoice choose_theta(const Cube& cube, const Measure& mu, int l, double c_lower, int candidates,
                         std::uint64_t seed);

enum class LemmaId {
  kOmit,
  kIsum,
  kPrepl,
  kLemmaB,
  kMlam,
  kDis,
  kHeight,
  kEqL4,
  kKpqmon,
  kHardyProp,
  kCorollary1,
  kCorollary2
};

std::string lemma_name(LemmaId id);
LemmaId parse_lemma(const std::string& name);

struct LemmaParams {
  double alpha = 0.0;
  double gamma = 2.0;
  std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
  double s = 2.0;
  double beta = 0.0;
  double p = 2.0;
  double tau = 2.0;
  std::vector<double> s_i{0.0, 0.0};
  std::vector<double> p_i{2.0, 2.0};
  std::vector<double> q_i{2.0, 2.0};
  std::vector<double> lambdas{0.0, 1.0, 2.5};
  std::vector<double> herz_q{1.0, 2.0, 4.0, 8.0};
  int functions = 10;
  double bracket = 50.0;
  double slope_tol = 0.05;
  int samples = 8;
};

/// Per-lemma defaults (e.g. lemmaB needs alpha > 0 and uses a tighter bracket).
LemmaParams default_lemma_params(LemmaId id);

VerdictReport check_equivalence(LemmaId id, const LemmaParams& params, const VerifierConfig& cfg);

json params_to_json(const TheoremParams& p);
json lemma_params_to_json(const LemmaParams& p);

/// Nonnegative functions fed to the Schur operator.
struct SchurInput {
  enum class Kind { kPower, kCubes, kZero };
  Kind kind = Kind::kZero;
  double lambda = 0.0;
  /// Weighted indicator of pairwise disjoint boxes.
  std::vector<std::pair<Box, double>> boxes;

  double operator()(const Point& w) const;
  std::string describe() const;
};

/// Admissible Schur weights: max(-beta n / q', (-n - 2 beta n) / p) < lambda < 0.
std::pair<double, double> schur_window(int n, double p, double beta);

/// Sg(z) at every probe point.
std::vector<double> schur_apply(const SchurInput& g, double beta, const std::vector<Point>& probes,
                                const Window& window, const QuadratureConfig& cfg);

/// Sg for g = s^lambda along the vertical probes (0, t): fitted slope against
/// lambda.
VerdictReport schur_slope(double p, double beta, double lambda, const std::vector<double>& heights,
                          const VerifierConfig& cfg, double slope_tol = 0.05);

/// Seeded sums of weighted indicators of distinct Whitney cubes.
std::vector<SchurInput> schur_family(int n, int count, std::uint64_t seed);

VerdictReport schur_probe(double p, double beta, const std::vector<SchurInput>& family, const VerifierConfig& cfg);

/// Builds the measure for a given window; lets cube-centered measures follow
/// the window as it grows.
using MeasureFactory = std::function<Measure(const Window&)>;

/// Condition 1 integral and condition 2 sum on a sequence of windows, each
/// one level finer than the last.
VerdictReport theorem7_check(double p, double q, double alpha, const MeasureFactory& mu, const std::string& measure_label,
                             const VerifierConfig& cfg, int windows = 3);

/// Condition 1 integral on one window.
QuadResult theorem7_integral(const Measure& mu, const WhitneyDecomposition& d, double p, double q, double alpha,
                             const QuadratureConfig& cfg);

}  // namespace hc
