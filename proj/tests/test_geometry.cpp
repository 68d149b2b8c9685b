#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hcarleson/geometry.hpp"
#include "hcarleson/random.hpp"

using namespace hc;

TEST_CASE("cube count of a small window") {
  // levels -2..0 with R = 1: (2/0.25)^2 + (2/0.5)^2 + (2/1)^2 = 64 + 16 + 4
  const WhitneyDecomposition d(Window{2, -2, 0, 1.0});
  CHECK(d.size() == 84);
  CHECK(d.level_end(-2) - d.level_begin(-2) == 64);
  CHECK(d.per_axis(0) == 2);
}

TEST_CASE("cube metrics are exact") {
  const WhitneyDecomposition d(Window{3, -3, 2, 4.0});
  for (std::size_t i = 0; i < d.size(); i += 37) {
    const Cube c = d[i];
    const double side = std::ldexp(1.0, c.level());
    CHECK(c.boundary_distance() == side);
    CHECK(c.box().lo.t() == side);
    CHECK(c.eta() == 1.5 * side);
    CHECK(std::abs(c.diameter() / c.boundary_distance() - 2.0) < 1e-12);  // sqrt(n + 1) with n = 3
    CHECK(d.position(c) == i);
  }
}

TEST_CASE("points locate into exactly one cube interior") {
  const WhitneyDecomposition d(Window{2, -2, 1, 2.0});
  Rng rng(5);
  const Window& w = d.window();
  for (int s = 0; s < 2000; ++s) {
    const Point z({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, std::exp2(rng.uniform(-2.0, 2.0)));
    REQUIRE(w.contains(z));
    const std::size_t k = d.locate(z);
    int interiors = 0;
    for (std::size_t i : d.cubes_containing(z)) interiors += d[i].box().interior_contains(z) ? 1 : 0;
    CHECK(interiors == 1);
    CHECK(d[k].box().interior_contains(z));
  }
}

TEST_CASE("enlarged cubes overlap boundedly") {
  const WhitneyDecomposition d(Window{2, -3, 1, 2.0});
  Rng rng(11);
  int worst = 0;
  for (int s = 0; s < 3000; ++s) {
    const Point z({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)}, std::exp2(rng.uniform(-2.0, 1.0)));
    const int c = overlap_count(d, z);
    CHECK(c >= 1);
    worst = std::max(worst, c);
  }
  CHECK(worst <= 8);
}

TEST_CASE("window validation") {
  CHECK_THROWS_AS(WhitneyDecomposition(Window{1, 0, 1, 2.0}), UnsupportedDimensionError);
  CHECK_THROWS_AS(WhitneyDecomposition(Window{2, 1, 0, 2.0}), ParameterError);
  CHECK_THROWS_AS(WhitneyDecomposition(Window{2, 0, 2, 3.0}), ParameterError);  // R not a multiple of 4
  CHECK_THROWS_AS(WhitneyDecomposition(Window{2, -2, 0, 1.0}).locate(Point({0.0, 0.0}, 10.0)), DomainError);
}

TEST_CASE("slabs match window levels") {
  const Window w{2, -3, 2, 4.0};
  const SlabFamily s = slabs_for_window(w);
  CHECK(s.size() == 6);
  CHECK(s.t_lo() == w.t_min());
  CHECK(s.t_hi() == w.t_max());
  CHECK(Slab{0}.t_lo() == 0.5);
  CHECK(Slab{0}.t_hi() == 1.0);
}

TEST_CASE("window growth") {
  const Window w{2, -2, 0, 1.0};
  const Window f = grow(w, GrowthMode::kFiner);
  CHECK(f.level_min == -3);
  CHECK(f.level_max == 0);
  const Window b = grow(w, GrowthMode::kBoth);
  CHECK(b.level_min == -3);
  CHECK(b.level_max == 1);
  CHECK(b.x_half_width == 2.0);
}

TEST_CASE("local cubes") {
  const Point w({0.0, 0.0}, 2.0);
  CHECK(local_cube(w, LocalCubeKind::kQ).side == doctest::Approx(2.0));
  CHECK(local_cube(w, LocalCubeKind::kq).side == doctest::Approx(1.6));
}

TEST_CASE("cube csv") {
  std::ostringstream out;
  write_cubes_csv(WhitneyDecomposition(Window{2, 0, 0, 1.0}), out);
  const std::string s = out.str();
  CHECK(s.rfind("level,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}
