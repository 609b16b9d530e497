#include <cmath>

#include "doctest.h"
#include "quermass/arc_kernel.hpp"
#include "quermass/params.hpp"
#include "quermass/percolation.hpp"
#include "test_helpers.hpp"

using namespace quermass;
using quermass::testing::random_config;
using quermass::testing::ring_config;

namespace {

Configuration make_config(std::initializer_list<Disk> disks, double r_max, Rect window = {-50, -50, 50, 50}) {
  Configuration config(window, r_max);
  for (const Disk& d : disks) config.add(d);
  return config;
}

}  // namespace

TEST_CASE("circle intersections") {
  SUBCASE("disjoint") {
    auto r = circle_intersections({0, 0, 1}, {3, 0, 1});
    CHECK(r.count == 0);
    CHECK(!r.coincident);
  }
  SUBCASE("symmetric lens") {
    auto r = circle_intersections({0, 0, 1}, {1, 0, 1});
    REQUIRE(r.count == 2);
    const double e = 1e-12;
    CHECK(r.p[0].x == doctest::Approx(0.5).epsilon(e));
    CHECK(r.p[1].x == doctest::Approx(0.5).epsilon(e));
    CHECK(std::abs(r.p[0].y) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(e));
    CHECK(r.p[0].y == doctest::Approx(-r.p[1].y).epsilon(e));
  }
  SUBCASE("coincident marker") {
    auto r = circle_intersections({0, 0, 1}, {0, 0, 1});
    CHECK(r.coincident);
  }
  SUBCASE("nested") {
    auto r = circle_intersections({0, 0, 2}, {0.1, 0, 1});
    CHECK(r.count == 0);
  }
}

TEST_CASE("boundary arcs of simple unions") {
  SUBCASE("one disk: full circle, one loop") {
    auto config = make_config({{0, 0, 1}}, 1);
    auto arr = boundary_arcs(config);
    REQUIRE(arr.arcs.size() == 1);
    CHECK(arr.arcs[0].full);
    CHECK(arr.loops.size() == 1);
  }
  SUBCASE("two unit disks at distance 1: two 4pi/3 arcs, one loop") {
    auto config = make_config({{0, 0, 1}, {1, 0, 1}}, 1);
    auto arr = boundary_arcs(config);
    REQUIRE(arr.arcs.size() == 2);
    for (const Arc& a : arr.arcs)
      CHECK(a.length_angle() == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
    CHECK(arr.loops.size() == 1);
    CHECK(arr.loops[0].size() == 2);
  }
  SUBCASE("equilateral triad, side 1.9: six arcs, outer loop plus hole loop") {
    const double s = 1.9;
    const double h = s * std::sqrt(3.0) / 2;
    auto config = make_config({{0, 0, 1}, {s, 0, 1}, {s / 2, h, 1}}, 1);
    auto arr = boundary_arcs(config);
    CHECK(arr.arcs.size() == 6);
    CHECK(arr.loops.size() == 2);
  }
  SUBCASE("swallowed disk contributes no arcs") {
    auto config = make_config({{0, 0, 2}, {0.3, 0, 1}}, 2);
    auto arr = boundary_arcs(config);
    REQUIRE(arr.arcs.size() == 1);
    CHECK(arr.arcs[0].disk == 0);
  }
  SUBCASE("coincident disks are degenerate") {
    auto config = make_config({{0, 0, 1}, {0, 0, 1}}, 1);
    CHECK_THROWS_AS(boundary_arcs(config), DegenerateGeometry);
  }
}

TEST_CASE("functionals of reference unions") {
  SUBCASE("empty") {
    Configuration config({0, 0, 1, 1}, 1);
    auto f = functionals(config);
    CHECK(f.area == 0);
    CHECK(f.perimeter == 0);
    CHECK(f.euler == 0);
    CHECK(f.components == 0);
    CHECK(f.holes == 0);
  }
  SUBCASE("one unit disk") {
    auto f = functionals(make_config({{0, 0, 1}}, 1));
    CHECK(f.area == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(f.perimeter == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(f.euler == 1);
  }
  SUBCASE("two unit disks at distance 1: closed-form lens") {
    auto f = functionals(make_config({{0, 0, 1}, {1, 0, 1}}, 1));
    const double expected_area = 4 * kPi / 3 + std::sqrt(3.0) / 2;
    CHECK(f.area == doctest::Approx(expected_area).epsilon(1e-13));
    CHECK(f.perimeter == doctest::Approx(8 * kPi / 3).epsilon(1e-13));
    CHECK(f.euler == 1);
    CHECK(f.components == 1);
    CHECK(f.holes == 0);
  }
  SUBCASE("equilateral triad, side 1.9: one component, one hole") {
    const double s = 1.9;
    const double h = s * std::sqrt(3.0) / 2;
    auto f = functionals(make_config({{0, 0, 1}, {s, 0, 1}, {s / 2, h, 1}}, 1));
    CHECK(f.components == 1);
    CHECK(f.holes == 1);
    CHECK(f.euler == 0);
  }
  SUBCASE("translation and rotation invariance") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      auto config = random_config(rng, {0, 0, 8, 8}, 12, 0.5, 1.0);
      Functionals f0;
      try {
        f0 = functionals(config);
      } catch (const DegenerateGeometry&) {
        continue;
      }
      const double ang = rng.uniform(0, kTwoPi);
      const double tx = rng.uniform(-5, 5), ty = rng.uniform(-5, 5);
      Configuration moved({-40, -40, 40, 40}, 1.0);
      for (const Disk& d : config.disks())
        moved.add({d.x * std::cos(ang) - d.y * std::sin(ang) + tx,
                   d.x * std::sin(ang) + d.y * std::cos(ang) + ty, d.r});
      const Functionals f1 = functionals(moved);
      CHECK(f1.area == doctest::Approx(f0.area).epsilon(1e-8));
      CHECK(f1.perimeter == doctest::Approx(f0.perimeter).epsilon(1e-8));
      CHECK(f1.euler == f0.euler);
      CHECK(f1.components == f0.components);
      CHECK(f1.holes == f0.holes);
    }
  }
  SUBCASE("loops equal components plus holes on random unions") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      auto config = random_config(rng, {0, 0, 9, 9}, 18, 0.5, 1.0);
      try {
        auto arr = boundary_arcs(config);
        auto f = functionals(config);
        CHECK(static_cast<long>(arr.loops.size()) == f.components + f.holes);
        CHECK(f.euler == f.components - f.holes);
      } catch (const DegenerateGeometry&) {
      }
    }
  }
}

TEST_CASE("delta functionals") {
  SUBCASE("disjoint new disk") {
    auto config = make_config({{0, 0, 1}}, 1);
    auto d = delta_functionals({5, 5, 1}, config);
    CHECK(d.d_area == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(d.d_perimeter == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(d.d_euler == 1);
    CHECK(d.d_components == 1);
    CHECK(d.d_holes == 0);
  }
  SUBCASE("new disk inside an existing disk") {
    auto config = make_config({{0, 0, 2}}, 2);
    auto d = delta_functionals({0.2, 0.1, 0.5}, config);
    CHECK(d.d_area == 0.0);
    CHECK(d.d_perimeter == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.d_euler == 0);
    CHECK(d.d_components == 0);
    CHECK(d.d_holes == 0);
  }
  SUBCASE("closing a C-chain into an annulus creates a hole") {
    // 6-disk ring minus one; the returning disk closes the gap.
    auto ring = ring_config({0, 0}, 1.5, 1.0, 6, 1.0);
    Configuration c_shape(ring.window(), 1.0);
    for (int i = 1; i < ring.size(); ++i) c_shape.add(ring.disk(i));
    const Functionals before = functionals(c_shape);
    CHECK(before.components == 1);
    CHECK(before.holes == 0);
    const Disk closing = ring.disk(0);
    auto d = delta_functionals(closing, c_shape);
    CHECK(d.d_holes == 1);
    CHECK(d.d_components == 0);
    CHECK(d.d_euler == -1);
    // cross-check against full recomputation
    Configuration closed(ring.window(), 1.0);
    for (const Disk& disk : c_shape.disks()) closed.add(disk);
    closed.add(closing);
    const Functionals after = functionals(closed);
    CHECK(after.holes - before.holes == d.d_holes);
    CHECK(after.components - before.components == d.d_components);
    CHECK(after.euler - before.euler == d.d_euler);
    CHECK(after.area - before.area == doctest::Approx(d.d_area).epsilon(1e-12));
  }
  SUBCASE("incremental identity on random pairs") {
    Rng rng(1234);
    int tested = 0;
    while (tested < 300) {
      auto config = random_config(rng, {0, 0, 10, 10}, static_cast<int>(rng.below(31)), 0.5, 1.0);
      const Disk p{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0.5, 1.0)};
      try {
        const FunctionalDelta d = delta_functionals(p, config);
        const Functionals f0 = functionals(config);
        Configuration bigger(config.window(), config.r_max_bound());
        for (const Disk& q : config.disks()) bigger.add(q);
        bigger.add(p);
        const Functionals f1 = functionals(bigger);
        CHECK(std::abs((f1.area - f0.area) - d.d_area) <= 1e-9);
        CHECK(std::abs((f1.perimeter - f0.perimeter) - d.d_perimeter) <= 1e-9);
        CHECK(f1.euler - f0.euler == d.d_euler);
        CHECK(f1.components - f0.components == d.d_components);
        CHECK(f1.holes - f0.holes == d.d_holes);
        ++tested;
      } catch (const DegenerateGeometry&) {
      }
    }
  }
  SUBCASE("one-disk variation bounds on random pairs") {
    Rng rng(99);
    const double r0 = 0.5, r1 = 1.0;
    const LocalDeltaBounds b = local_delta_bounds(r0, r1);
    int tested = 0;
    while (tested < 500) {
      auto config = random_config(rng, {0, 0, 8, 8}, 25, r0, r1);
      const Disk p{rng.uniform(0, 8), rng.uniform(0, 8), rng.uniform(r0, r1)};
      try {
        const FunctionalDelta d = delta_functionals(p, config);
        CHECK(d.d_area >= 0.0);
        CHECK(d.d_area <= b.a_max + 1e-9);
        CHECK(d.d_perimeter >= b.l_min - 1e-9);
        CHECK(d.d_perimeter <= b.l_max + 1e-9);
        CHECK(static_cast<double>(d.d_components) >= b.c_min);
        CHECK(d.d_components <= 1);
        ++tested;
      } catch (const DegenerateGeometry&) {
      }
    }
  }
}

TEST_CASE("local energy and window energy") {
  SUBCASE("theta (1,0,0), disjoint unit disk") {
    auto config = make_config({{0, 0, 1}}, 1);
    CHECK(local_energy({5, 5, 1}, config, {1, 0, 0}) == doctest::Approx(kPi).epsilon(1e-14));
  }
  SUBCASE("zero weights give zero energy") {
    auto config = make_config({{0, 0, 1}, {1, 0, 1}}, 1);
    CHECK(local_energy({0.5, 0.2, 0.8}, config, {0, 0, 0}) == 0.0);
  }
  SUBCASE("merging two components costs -1 at theta (0,0,1)") {
    auto config = make_config({{0, 0, 1}, {3, 0, 1}}, 1);
    CHECK(local_energy({1.5, 0, 1}, config, {0, 0, 1}) == doctest::Approx(-1.0));
  }
  SUBCASE("empty window part means zero energy") {
    auto config = make_config({{8, 8, 1}, {9, 8, 1}}, 1);
    CHECK(energy_in({0, 0, 2, 2}, config, {0.7, 0.3, 0.9}) == doctest::Approx(0.0));
  }
  SUBCASE("config inside the region: plain weighted functionals") {
    auto config = make_config({{1, 1, 0.5}, {1.6, 1, 0.5}}, 0.5);
    const Functionals f = functionals(config);
    CHECK(energy_in({0, 0, 3, 3}, config, {1, 0, 0}) == doctest::Approx(f.area).epsilon(1e-12));
  }
  SUBCASE("straddling disk with germ inside carries its full energy") {
    auto config = make_config({{0.1, 1, 0.8}}, 0.8);
    const QuermassWeights w{0.4, 1.3, -0.7};
    const double expected = 0.4 * kPi * 0.64 + 1.3 * kTwoPi * 0.8 - 0.7;
    CHECK(energy_in({0, 0, 2, 2}, config, w) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("configuration serialization") {
  Rng rng(5);
  auto config = random_config(rng, {0, 0, 7, 7}, 13, 0.5, 1.1);
  SUBCASE("json round trip preserves values") {
    const std::string text = config.to_json();
    const Configuration back = Configuration::from_json(text);
    REQUIRE(back.size() == config.size());
    CHECK(back.window() == config.window());
    for (int i = 0; i < config.size(); ++i) CHECK(back.disk(i) == config.disk(i));
  }
  SUBCASE("json with types") {
    std::vector<int> types(static_cast<std::size_t>(config.size()));
    for (std::size_t i = 0; i < types.size(); ++i) types[i] = static_cast<int>(i % 3);
    std::vector<int> back_types;
    const Configuration back = Configuration::from_json(config.to_json(&types), &back_types);
    CHECK(back_types == types);
    CHECK(back.size() == config.size());
  }
  SUBCASE("csv round trip preserves values") {
    const Configuration back = Configuration::from_csv(config.to_csv(), config.window(), config.r_max_bound());
    REQUIRE(back.size() == config.size());
    for (int i = 0; i < config.size(); ++i) CHECK(back.disk(i) == config.disk(i));
  }
}

TEST_CASE("sandwich bounds") {
  QuermassParams params;
  params.r0 = params.r1 = 1.0;
  SUBCASE("zero weights") {
    auto [c0, c1] = poisson_sandwich_bounds(params);
    CHECK(c0 == 0.0);
    CHECK(c1 == 0.0);
  }
  SUBCASE("area weight only") {
    params.theta1 = 1.0;
    auto [c0, c1] = poisson_sandwich_bounds(params);
    CHECK(c0 == doctest::Approx(0.0));
    CHECK(c1 == doctest::Approx(kPi));
  }
  SUBCASE("perimeter weight only") {
    params.theta2 = 1.0;
    auto [c0, c1] = poisson_sandwich_bounds(params);
    CHECK(c0 == doctest::Approx(-8 * kPi));
    CHECK(c1 == doctest::Approx(kTwoPi));
  }
  SUBCASE("unsupported when theta3 is nonzero") {
    params.theta3 = 0.5;
    CHECK_THROWS_AS(poisson_sandwich_bounds(params), UnsupportedParameters);
  }
}
