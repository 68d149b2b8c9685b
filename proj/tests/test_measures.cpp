#include <cmath>

#include "doctest.h"
#include "hcarleson/measures.hpp"

using namespace hc;

namespace {

// m_lambda of the level-j cube: side^n times the height integral of t^lambda.
double mlam_cube(int n, int j, double lambda) {
  const double h = std::ldexp(1.0, j);
  return std::pow(h, n) * (std::pow(2.0 * h, lambda + 1.0) - std::pow(h, lambda + 1.0)) / (lambda + 1.0);
}

}  // namespace

TEST_CASE("weighted Lebesgue masses of cubes") {
  const WhitneyDecomposition d(Window{2, -3, 2, 4.0});
  for (double lambda : {0.0, 1.0, 2.5, -0.5}) {
    const Measure mu = Measure::m_lambda(lambda);
    const double c = (std::pow(2.0, lambda + 1.0) - 1.0) / ((lambda + 1.0) * std::pow(1.5, 3.0 + lambda));
    for (std::size_t i = 0; i < d.size(); i += 13) {
      const Cube q = d[i];
      CHECK(mu.mass(q) == doctest::Approx(mlam_cube(2, q.level(), lambda)).epsilon(1e-13));
      CHECK(mu.mass(q) / std::pow(q.eta(), 3.0 + lambda) == doctest::Approx(c).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(Measure::m_lambda(-1.0), ParameterError);
  const Box win{Point({0.0, 0.0}, 1.0), Point({1.0, 1.0}, 2.0)};
  const Measure r = Measure::m_lambda(0.0, win);
  CHECK(r.mass(Box{Point({-1.0, -1.0}, 0.5), Point({0.5, 2.0}, 4.0)}) == doctest::Approx(0.5));
}

TEST_CASE("atoms count in half-open boxes") {
  const Measure mu = Measure::atomic({{Point({0.0, 0.0}, 1.0), 2.0}, {Point({1.0, 0.5}, 1.5), 3.0}});
  const Box b{Point({0.0, 0.0}, 1.0), Point({1.0, 1.0}, 2.0)};
  CHECK(mu.mass(b) == 2.0);  // the second atom sits on the upper x face
  CHECK(mu.mass(Box{Point({0.0, 0.0}, 1.0), Point({2.0, 1.0}, 2.0)}) == 5.0);
  CHECK(Measure::zero().is_zero());
  CHECK(Measure::zero().mass(b) == 0.0);
  const QuadResult r = mu.integrate([](const Point& z) { return z.x(0) + 1.0; }, b, QuadratureConfig{});
  CHECK(r.value == 2.0);
}

TEST_CASE("cube power measure") {
  const Window w{2, -2, 0, 1.0};
  const WhitneyDecomposition d(w);
  const Measure mu = Measure::cube_power(2.5, w);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(mu.mass(d[i]) == doctest::Approx(std::pow(d[i].eta(), 2.5)));
  // the slab of level -1 holds 16 centers at height 0.75
  CHECK(mu.mass(Slab{0}, w) == doctest::Approx(16.0 * std::pow(0.75, 2.5)));
  const auto per = mu_per_cube([](const Point&) { return 1.0; }, mu, d, QuadratureConfig{});
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(per[i] == doctest::Approx(std::pow(d[i].eta(), 2.5)));
}

TEST_CASE("required exponents") {
  TheoremParams p;
  p.n = 2;
  p.m = 2;
  p.p_i = {4.0, 4.0};
  p.q_i = {2.0, 2.0};
  p.alpha = 0.5;
  CHECK(required_exponent(TheoremId::kT1, p) == doctest::Approx(7.0));
  p.p = 2.0;
  p.q = 4.0;
  p.s = 2.0;
  p.beta_i = {0.0, 1.0};
  CHECK(required_exponent(TheoremId::kT2, p) == doctest::Approx(3.0 + 4.0));
  p.q = 2.0;
  p.sigma_i = {2.0, 2.0};
  p.alpha_i = {0.0, 0.0};
  CHECK(required_exponent(TheoremId::kT4, p) == doctest::Approx(6.0 + 6.0));
  p.p_i = {2.0, 2.0};
  CHECK(required_exponent(TheoremId::kT5, p) == doctest::Approx(6.0 + 6.0));
  p.m = 1;
  p.alpha = 0.0;
  p.q = 4.0;
  CHECK(required_exponent(TheoremId::kT8, p) == doctest::Approx(3.0));
  p.q_i = {3.0, 3.0};
  p.m = 2;
  CHECK_THROWS_AS(required_exponent(TheoremId::kT1, p), ParameterError);
  CHECK(parse_theorem("T3F") == TheoremId::kT3F);
  CHECK_THROWS_AS(parse_theorem("T9"), ParameterError);
}

TEST_CASE("Carleson sweep of a matched measure is flat") {
  const WhitneyDecomposition d(Window{2, -3, 1, 2.0});
  const CarlesonReport r = carleson_sweep(Measure::m_lambda(3.0), d, 6.0);
  REQUIRE(r.trend.size() == 4);
  for (double t : r.trend) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  const CarlesonReport g = carleson_sweep(Measure::m_lambda(3.0), d, 5.0);
  for (double t : g.trend) CHECK(t == doctest::Approx(0.5).epsilon(1e-12));  // eta^1 deficit per level
}

TEST_CASE("sum side of the integral equivalence") {
  const Window w{2, -2, 0, 1.0};
  const WhitneyDecomposition d(w);
  const double p = 1.0, q = 2.0, alpha = 0.5, e = 5.0;
  double exact = 0.0;
  for (int j = -2; j <= 0; ++j) {
    const double eta = 1.5 * std::ldexp(1.0, j);
    const double count = std::pow(2.0 / std::ldexp(1.0, j), 2);
    exact += count * std::pow(eta, -(alpha * q * 2 + 2) * p / (q - p)) * std::pow(std::pow(eta, e), q / (q - p));
  }
  CHECK(theorem7_sum(Measure::cube_power(e, w), d, p, q, alpha) == doctest::Approx(exact).epsilon(1e-12));
  CHECK_THROWS_AS(theorem7_sum(Measure::zero(), d, 2.0, 1.0, alpha), ParameterError);
}
