#include <cmath>
#include <limits>

#include "doctest.h"
#include "hcarleson/verifiers.hpp"

using namespace hc;

namespace {

VerdictReport synthetic(const std::vector<double>& level_ratios, double floor = 1.5) {
  VerdictReport r;
  r.growth_floor = floor;
  for (std::size_t j = 0; j < level_ratios.size(); ++j) {
    r.cases.push_back({"c", static_cast<int>(j), level_ratios[j], 1.0, level_ratios[j]});
  }
  classify_trend(r);
  return r;
}

VerifierConfig small_cfg() {
  VerifierConfig c;
  c.window = Window{2, -2, 1, 2.0};
  c.quad = QuadratureConfig{2, 2, 1e-2, 0.0, 1};
  c.probe_level_min = -1;
  c.probe_level_max = 0;
  return c;
}

}  // namespace

TEST_CASE("trend classification") {
  CHECK(synthetic({1.0, 1.02, 0.98, 1.0}).verdict == Verdict::kBounded);
  // levels ascend, so a ratio that shrinks with the level means growth toward the boundary
  CHECK(synthetic({16.0, 8.0, 4.0, 2.0, 1.0}).verdict == Verdict::kDiverging);
  CHECK(synthetic({16.0, 8.0, 4.0, 2.0, 1.0}, 1.0).verdict == Verdict::kInconclusive);
  CHECK(synthetic({4.0, 2.0, 1.0}).verdict == Verdict::kInconclusive);  // only two trends
  const VerdictReport single = synthetic({1.0});
  CHECK(single.verdict == Verdict::kInconclusive);
  CHECK(single.flags == std::vector<std::string>{"single level"});
  const VerdictReport inf = synthetic({1.0, std::numeric_limits<double>::infinity()});
  CHECK(inf.verdict == Verdict::kInconclusive);
  VerdictReport zero;
  zero.cases.push_back({"z", 0, 0.0, 0.0, 0.0});
  zero.cases.push_back({"z", 1, 0.0, 0.0, 0.0});
  classify_trend(zero);
  CHECK(zero.verdict == Verdict::kInconclusive);
  CHECK(zero.flags == std::vector<std::string>{"zero family"});
  // normalization by kappa: ratios scaling as 2^(2j) with kappa = 2 give trend 1/2
  VerdictReport k;
  k.kappa = 2.0;
  for (int j = 0; j < 3; ++j) k.cases.push_back({"k", j, 1.0, 1.0, std::pow(4.0, j)});
  classify_trend(k);
  CHECK(k.trend[0] == doctest::Approx(0.5));
}

TEST_CASE("verdict names round-trip") {
  for (Verdict v : {Verdict::kBounded, Verdict::kDiverging, Verdict::kInconclusive, Verdict::kExactPass,
                    Verdict::kFail}) {
    CHECK(parse_verdict(verdict_name(v)) == v);
  }
  CHECK_THROWS_AS(parse_verdict("maybe"), ParameterError);
  CHECK(parse_lemma(lemma_name(LemmaId::kCorollary2)) == LemmaId::kCorollary2);
  CHECK_THROWS_AS(parse_lemma("nope"), ParameterError);
}

TEST_CASE("test orders and degrees") {
  TheoremParams p;
  p.m = 2;
  p.p_i = {4.0, 4.0};
  p.q_i = {2.0, 2.0};
  CHECK(minimal_test_order(TheoremId::kT1, p) == 0);
  p.m = 1;
  p.p = 2.0;
  p.q = 4.0;
  CHECK(minimal_test_order(TheoremId::kT8, p) == 1);
  CHECK(theorem_kappa(TheoremId::kT8, p) == 0.5);
  CHECK(theorem_kappa(TheoremId::kT4, p) == 2.0);
  CHECK(tuple_size(TheoremId::kT8, p) == 1);
}

TEST_CASE("families are deterministic") {
  FamilySpec f;
  f.seed = 3;
  const Point a({0.0, 0.0}, 0.75);
  const Point z({0.1, 0.2}, 0.5);
  CHECK(family_member(f, 2, 1, 0, a)(z) == family_member(f, 2, 1, 0, a)(z));
  CHECK(family_member(f, 2, 1, 0, a)(z) != family_member(f, 2, 2, 0, a)(z));
  f.count = 0;
  CHECK_THROWS_AS(f.validate(), ParameterError);
}

TEST_CASE("exact lemma checks") {
  const VerdictReport r = check_equivalence(LemmaId::kMlam, default_lemma_params(LemmaId::kMlam), small_cfg());
  CHECK(r.verdict == Verdict::kExactPass);
  const VerdictReport h = check_equivalence(LemmaId::kHeight, default_lemma_params(LemmaId::kHeight), small_cfg());
  CHECK(h.verdict == Verdict::kExactPass);
}

TEST_CASE("Schur window and cube inputs") {
  const auto [lo, hi] = schur_window(2, 2.0, 1.0);
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == 0.0);
  CHECK_THROWS_AS(schur_window(2, 1.0, 1.0), RejectedConfigurationError);
  // one unit box; the oracle is a midpoint sum of the kernel
  SchurInput g;
  g.kind = SchurInput::Kind::kCubes;
  const Box b{Point({0.0, 0.0}, 1.0), Point({1.0, 1.0}, 2.0)};
  g.boxes.emplace_back(b, 2.0);
  const Point z({3.0, 0.0}, 1.0);
  double ref = 0.0;
  const int m = 40;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Point w({(i + 0.5) / m, (j + 0.5) / m}, 1.0 + (k + 0.5) / m);
        const double rho2 = std::pow(z.x(0) - w.x(0), 2) + std::pow(z.x(1) - w.x(1), 2) + std::pow(z.t() + w.t(), 2);
        ref += std::pow(z.t() * z.t() / (rho2 * rho2), 2.0) * w.t();
      }
  ref *= 2.0 / (double(m) * m * m);
  const auto v = schur_apply(g, 1.0, {z}, Window{2, -2, 1, 2.0}, QuadratureConfig{});
  CHECK(v[0] == doctest::Approx(ref).epsilon(1e-3));
  CHECK(schur_family(2, 10, 1).size() == 10);
  CHECK(schur_apply(SchurInput{}, 1.0, {z}, Window{2, -2, 1, 2.0}, QuadratureConfig{})[0] == 0.0);
}

TEST_CASE("power inputs follow the closed form") {
  // S(s^lambda)(t) = |S^1| Gamma(..) ... reduces to C t^lambda with
  // C = pi Gamma(a - 1) / Gamma(a) * B(beta n + lambda, n + n beta - lambda), a = n (1 + beta)
  const double n = 2, beta = 1, lambda = -0.5, a = n * (1 + beta);
  const double C = M_PI * std::tgamma(a - n / 2) / std::tgamma(a) * std::tgamma(beta * n + lambda) *
                   std::tgamma(n + n * beta - lambda) / std::tgamma(n + 2 * n * beta);
  SchurInput g;
  g.kind = SchurInput::Kind::kPower;
  g.lambda = lambda;
  const auto v = schur_apply(g, beta, {Point({0.0, 0.0}, 0.5), Point({0.0, 0.0}, 3.0)}, Window{2, -2, 1, 2.0},
                             QuadratureConfig{});
  CHECK(v[0] == doctest::Approx(C * std::pow(0.5, lambda)).epsilon(1e-6));
  CHECK(v[1] == doctest::Approx(C * std::pow(3.0, lambda)).epsilon(1e-6));
}

TEST_CASE("integral equivalence rejects p >= q") {
  VerifierConfig c = small_cfg();
  const MeasureFactory mf = [](const Window& w) { return Measure::cube_power(5.0, w); };
  try {
    theorem7_check(2.0, 1.0, 0.5, mf, "cube_power", c);
    FAIL("expected a rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0 < p < q") != std::string::npos);
  }
}

TEST_CASE("theta choice stays inside the cube mass") {
  const WhitneyDecomposition d(Window{2, -1, 0, 1.0});
  const Cube c = d.anchor_cube(0);
  const Measure mu = Measure::m_lambda(0.0);
  const ThetaChoice t = choose_theta(c, mu, 2, calibrate_c_lower(2, 2), 16, 1);
  CHECK(t.captured <= t.cube_mass * (1.0 + 1e-9));
  CHECK(t.captured > 0.0);
}
