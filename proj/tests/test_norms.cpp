#include <cmath>
#include <vector>

#include "doctest.h"
#include "hcarleson/norms.hpp"

using namespace hc;

namespace {

const QuadratureConfig kQuad{4, 5, 1e-7, 0.0, 1};

// Midpoint rule over [-R, R]^2 x [a, b], the independent oracle for windowed
// integrals of |f|^p t^lambda.
double midpoint(const HarmonicFunction& f, double p, double lambda, double R, double a, double b, int m) {
  double acc = 0.0;
  const double hx = 2.0 * R / m, ht = (b - a) / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Point z({-R + (i + 0.5) * hx, -R + (j + 0.5) * hx}, a + (k + 0.5) * ht);
        acc += std::pow(std::abs(f(z)), p) * std::pow(z.t(), lambda);
      }
  return acc * hx * hx * ht;
}

}  // namespace

TEST_CASE("Bergman norm against a midpoint sum") {
  const auto f = HarmonicFunction::test(Point({0.2, 0.0}, 1.0), 2);
  const WhitneyDecomposition d(Window{2, -1, 0, 1.0});
  const double got = norm_A(f, 2.0, 0.5, d, kQuad).value;
  const double ref = std::sqrt(midpoint(f, 2.0, 0.5, 1.0, 0.5, 2.0, 100));
  CHECK(got == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("mixed norms reduce to the Bergman norm when p = q") {
  const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 0.5), 1);
  const Window w{2, -2, 0, 1.0};
  const double alpha = 0.75, p = 2.0;
  const double a = norm_A(f, p, alpha * p - 1.0, WhitneyDecomposition(w), kQuad).value;
  CHECK(norm_B(f, p, p, alpha, w, kQuad).value == doctest::Approx(a).epsilon(1e-4));
  CHECK(norm_F(f, p, p, alpha, w, kQuad).value == doctest::Approx(a).epsilon(1e-4));
}

TEST_CASE("Herz aggregate") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(herz_aggregate(v, 2.0, 2.0) == doctest::Approx(std::sqrt(6.0)));
  CHECK(herz_aggregate(v, 2.0, 4.0) == doctest::Approx(std::pow(1.0 + 4.0 + 9.0, 0.25)));
  double prev = herz_aggregate(v, 1.0, 1.0);
  for (double q : {1.5, 2.0, 3.0, 8.0, 64.0}) {
    const double k = herz_aggregate(v, 1.0, q);
    CHECK(k <= prev);
    prev = k;
  }
  CHECK(herz_aggregate({0.0, 0.0}, 2.0, 3.0) == 0.0);
}

TEST_CASE("Herz norm with q = p equals the weighted Bergman norm") {
  const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 1.0), 2);
  const Window w{2, -2, 1, 2.0};
  const WhitneyDecomposition d(w);
  const double s = 1.0, p = 2.0;
  const double k = norm_K(f, p, p, Measure::m_lambda(s), slabs_for_window(w), d, kQuad).value;
  const double a = norm_A(f, p, s, d, kQuad).value;
  CHECK(k == doctest::Approx(a).epsilon(1e-3));
  // the A(p,q,m,mu) norm with q = p is the same integral
  CHECK(apqm_norm({f}, p, p, Measure::m_lambda(s), d, kQuad).value == doctest::Approx(a).epsilon(1e-6));
}

TEST_CASE("slice and Hardy norms of a Poisson kernel") {
  const auto P = HarmonicFunction::poisson(Point({0.0, 0.0}, 0.0), 0.0);
  // mass of P(., t) outside [-R, R]^2 is below t / R
  const double m = slice_norm(P, 1.0, 0.02, 8.0, kQuad).value;
  CHECK(m <= 1.0);
  CHECK(m >= 1.0 - 0.02 / 8.0 - 1e-4);
  const HardyResult h = norm_hardy(P, 1.0, Window{2, -2, 1, 4.0}, kQuad, 2);
  CHECK(h.value <= 1.0 + 1e-6);
  CHECK(h.heights.size() == h.slice_norms.size());
  CHECK(h.argmax_t == doctest::Approx(h.heights.front()));
}

TEST_CASE("local cube integral and local means") {
  const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 1.0), 0);
  const Point w({0.0, 0.0}, 1.0);
  // Q_w = [-1/2, 1/2]^2 x [1/2, 3/2]
  double ref = 0.0;
  const int m = 60;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Point z({-0.5 + (i + 0.5) / m, -0.5 + (j + 0.5) / m}, 0.5 + (k + 0.5) / m);
        ref += std::pow(f(z), 2.0) * z.t();
      }
  ref /= double(m) * m * m;
  CHECK(local_cube_integral(f, 2.0, 1.0, w, 6) == doctest::Approx(ref).epsilon(1e-4));
  const WhitneyDecomposition d(Window{2, -1, 0, 1.0});
  const auto g = HarmonicFunction::test(Point({0.0, 0.0}, 1.0), 3);
  CHECK(local_mean_functional(g, 2.0, 1.0, 1.0, d, QuadratureConfig{2, 2, 1e-2, 0.0, 1}).value > 0.0);
  CHECK_THROWS_AS(local_mean_functional(f, 2.0, 1.0, 1.0, d, QuadratureConfig{}), RejectedConfigurationError);
}

TEST_CASE("sup on a box") {
  const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 1.0), 0);
  const Box b{Point({-1.0, -1.0}, 0.5), Point({1.0, 1.0}, 1.0)};
  // |z - w_bar|^-1 peaks at the nearest corner-free point (0, 0, 0.5): 1 / 1.5
  const double s = sup_on_box(f, b, 5);
  CHECK(s <= 1.0 / 1.5 + 1e-15);
  CHECK(s >= f(b.center()));
}

TEST_CASE("divergent configurations are rejected") {
  const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 1.0), 0);  // decay 1
  CHECK_THROWS_AS(require_bergman_convergence(f, 2.0, 0.0), RejectedConfigurationError);
  CHECK_NOTHROW(require_bergman_convergence(f, 4.0, 0.0));
  const auto P = HarmonicFunction::poisson(Point({0.0, 0.0}, 0.0), 0.0);
  CHECK_THROWS_AS(require_bergman_convergence(P, 2.0, 0.0), RejectedConfigurationError);
  CHECK(abs_pow(-2.0, 3.0) == 8.0);
  CHECK(abs_pow(-2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
}
