#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "hcarleson/quadrature.hpp"
#include "hcarleson/random.hpp"

using namespace hc;

TEST_CASE("Gauss-Legendre exactness") {
  for (int m = 1; m <= 12; ++m) {
    const GaussRule& r = gauss_legendre(m);
    for (int k = 0; k <= 2 * m - 1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}

TEST_CASE("box integrals against closed forms") {
  QuadratureConfig q{4, 4, 1e-10, 0.0, 1};
  // x^2 on [1, 2] with the other axes degenerate
  const Box line{Point({1.0, 0.0}, 1.0), Point({2.0, 0.0}, 1.0)};
  CHECK(integrate_box([](const Point& z) { return z.x(0) * z.x(0); }, line, q).value == doctest::Approx(7.0 / 3.0));
  // product polynomial: exact value by separation
  const Box b{Point({0.0, -1.0}, 1.0), Point({2.0, 1.0}, 3.0)};
  const auto g = [](const Point& z) { return z.x(0) * z.x(0) * (1.0 + z.x(1)) * z.t(); };
  CHECK(integrate_box(g, b, q).value == doctest::Approx(8.0 / 3.0 * 2.0 * 4.0));
  // a non-polynomial integrand forces refinement; the midpoint sum is the oracle
  const auto h = [](const Point& z) { return std::exp(-z.x(0) * z.x(1)) / z.t(); };
  const int m = 400;
  double mid = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = (i + 0.5) * 2.0 / m, y = -1.0 + (j + 0.5) * 2.0 / m;
      mid += std::exp(-x * y);
    }
  mid *= (2.0 / m) * (2.0 / m) * std::log(3.0);
  CHECK(integrate_box(h, b, q).value == doctest::Approx(mid).epsilon(1e-4));
}

TEST_CASE("slices, lines and the truncated half-space") {
  QuadratureConfig q{3, 3, 1e-8, 0.0, 1};
  CHECK(integrate_slice([](const Point&) { return 1.0; }, 2, 0.3, 2.0, q).value == doctest::Approx(16.0));
  CHECK(integrate_vertical([](const Point& z) { return z.t(); }, Point({0.0, 0.0}, 1.0), 1.0, 3.0, q).value ==
        doctest::Approx(4.0));
  const WhitneyDecomposition d(Window{2, -2, 1, 2.0});
  // t^1.5 over [-2, 2]^2 x [1/4, 4]
  const double exact = 16.0 * (std::pow(4.0, 2.5) - std::pow(0.25, 2.5)) / 2.5;
  CHECK(integrate_halfspace([](const Point& z) { return std::pow(z.t(), 1.5); }, d, q).value ==
        doctest::Approx(exact).epsilon(1e-7));
  const Slab s{0};
  CHECK(integrate_slab([](const Point&) { return 1.0; }, s, Window{2, -2, 1, 2.0}, q).value ==
        doctest::Approx(16.0 * 0.5));
}

TEST_CASE("results do not depend on the worker count") {
  const WhitneyDecomposition d(Window{2, -3, 1, 2.0});
  const auto g = [](const Point& z) { return std::sin(z.x(0) + 2.0 * z.x(1)) / (1.0 + z.t() * z.t()); };
  QuadratureConfig q1{3, 3, 1e-6, 0.0, 1};
  QuadratureConfig q3 = q1;
  q3.workers = 3;
  const double a = integrate_halfspace(g, d, q1).value;
  const double b = integrate_halfspace(g, d, q3).value;
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  const auto v1 = parallel_map(1000, 1, [](std::size_t i) { return std::sqrt(double(i)); });
  const auto v4 = parallel_map(1000, 4, [](std::size_t i) { return std::sqrt(double(i)); });
  CHECK(v1 == v4);
}

TEST_CASE("compensated summation") {
  const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(v) == 2.0);
  CompensatedSum s;
  for (int i = 0; i < 10; ++i) s.add(0.1);
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("power-law fit") {
  const std::vector<double> x{0.5, 1.0, 2.0, 4.0};
  std::vector<double> y;
  for (double s : x) y.push_back(3.0 * std::pow(s, -1.5));
  const SlopeFit f = fit_power_law(x, y);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0, 3.0, 2.0}, std::vector<double>{1.0, 2.0, 3.0}),
                  ParameterError);
  CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, 0.0, 3.0}),
                  Error);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((QuadratureConfig{0, 4, 1e-3, 0.0, 1}.validate()), ParameterError);
  CHECK_THROWS_AS((QuadratureConfig{3, 0, 1e-3, 0.0, 1}.validate()), ParameterError);
  CHECK_THROWS_AS((QuadratureConfig{3, 4, 0.0, 0.0, 1}.validate()), ParameterError);
  CHECK_THROWS_AS((QuadratureConfig{3, 4, 1e-3, 0.0, 0}.validate()), ParameterError);
  const Box b{Point({0.0, 0.0}, 1.0), Point({1.0, 1.0}, 2.0)};
  CHECK_THROWS_AS(integrate_box([](const Point&) { return NAN; }, b, QuadratureConfig{}), EvaluationError);
}
