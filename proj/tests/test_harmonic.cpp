#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hcarleson/harmonic.hpp"
#include "hcarleson/random.hpp"

using namespace hc;

namespace {

// Height derivatives of rho^(1-n) by repeated central differences in long
// double; independent of the term recursion.
long double kernel(int n, long double u, long double r2) { return std::pow(r2 + u * u, (1.0L - n) / 2.0L); }

long double fd_derivative(int n, int l, long double u, long double r2, long double h) {
  if (l == 0) return kernel(n, u, r2);
  return (fd_derivative(n, l - 1, u + h, r2, h) - fd_derivative(n, l - 1, u - h, r2, h)) / (2.0L * h);
}

}  // namespace

TEST_CASE("closed-form terms for n = 2") {
  const TermSum t1 = derive_terms(2, 1);
  REQUIRE(t1.terms().size() == 1);
  CHECK(t1.terms()[0] == Term{-1.0, 1, 3});
  const TermSum t2 = derive_terms(2, 2);
  REQUIRE(t2.terms().size() == 2);
  CHECK(t2.terms()[0] == Term{-1.0, 0, 3});
  CHECK(t2.terms()[1] == Term{3.0, 2, 5});
  // -1/rho^3 + 3 u^2 / rho^5 at u = 1, rho = 1: 2; the angular part at c = 1/2: -1 + 3/4
  CHECK(t2.evaluate(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(t2.angular(0.5) == doctest::Approx(-0.25));
  for (int l = 0; l <= 5; ++l) {
    const TermSum ts = derive_terms(3, l);
    for (const Term& t : ts.terms()) CHECK(t.b - t.a == 3 - 1 + l);
  }
}

TEST_CASE("test functions match finite differences") {
  Rng rng(3);
  for (int n = 2; n <= 4; ++n) {
    for (int l = 0; l <= 3; ++l) {
      for (int s = 0; s < 5; ++s) {
        const Point w = Point::uniform(n, rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
        const Point z = Point::uniform(n, rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
        long double r2 = 0;
        for (int a = 0; a < n; ++a) r2 += (long double)(z.x(a) - w.x(a)) * (z.x(a) - w.x(a));
        const long double ref = fd_derivative(n, l, (long double)z.t() + w.t(), r2, 1e-3L);
        const double got = HarmonicFunction::test(w, l)(z);
        CHECK(got == doctest::Approx((double)ref).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("homogeneity of test functions") {
  Rng rng(9);
  for (int l = 0; l <= 4; ++l) {
    const Point w({0.3, -0.2}, 0.7);
    const Point z({-0.4, 0.9}, 1.3);
    const double base = HarmonicFunction::test(w, l)(z);
    for (double delta : {0.25, 0.5, 3.0, 7.5}) {
      Point dw = w, dz = z;
      for (int i = 0; i < 3; ++i) {
        dw[i] *= delta;
        dz[i] *= delta;
      }
      const double scaled = HarmonicFunction::test(dw, l)(dz) * std::pow(delta, 1 + l);
      CHECK(std::abs(scaled - base) <= 1e-12 * std::abs(base));
    }
  }
}

TEST_CASE("functions are harmonic") {
  const Point z({0.1, 0.2}, 0.9);
  for (int l = 0; l <= 3; ++l) {
    const auto f = HarmonicFunction::test(Point({0.0, 0.0}, 0.5), l);
    CHECK(std::abs(laplacian_residual(f, z, 1e-3)) < 1e-4 * std::abs(f(z)) + 1e-8);
  }
  const auto p = HarmonicFunction::poisson(Point({0.0, 0.0}, 0.0), 0.2);
  CHECK(std::abs(laplacian_residual(p, z, 1e-3)) < 1e-4 * std::abs(p(z)));
}

TEST_CASE("Poisson kernel normalization") {
  CHECK(poisson_normalization(2) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  // c_3 = Gamma(2) / pi^2
  CHECK(poisson_normalization(3) == doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)));
}

TEST_CASE("seeded combos are deterministic dilates") {
  const ZooOptions zoo;
  const Point anchor({0.0, 0.0}, 1.0);
  const auto f = make_combo(2, 42, 4, anchor, zoo);
  const auto g = make_combo(2, 42, 4, anchor, zoo);
  const Point z({0.3, 0.1}, 0.6);
  CHECK(f(z) == g(z));
  CHECK(make_combo(2, 43, 4, anchor, zoo)(z) != f(z));
  for (double delta : {0.125, 4.0}) {
    const auto h = make_combo(2, 42, 4, Point({0.0, 0.0}, delta), zoo);
    const Point dz({0.3 * delta, 0.1 * delta}, 0.6 * delta);
    CHECK(h(dz) == doctest::Approx(f(z)).epsilon(1e-12));
  }
  CHECK(f.decay_order() >= 2.0);
  CHECK(HarmonicFunction::zero(2).is_zero());
}

TEST_CASE("T-set calibration") {
  const double c = calibrate_c_lower(2, 2);
  CHECK(c >= 0.1);
  CHECK(c <= 0.9);
  const TwEstimate e = tw_fraction(Point({0.0, 0.0}, 1.0), 2, 2000, c);
  CHECK(e.fraction >= 0.25);
  CHECK_THROWS_AS(tw_fraction(Point({0.0, 0.0}, 1.0), 2, 10, c), ParameterError);
}
