#include <cmath>

#include "doctest.h"
#include "quermass/oracle.hpp"
#include "test_helpers.hpp"

using namespace quermass;
using quermass::testing::random_config;
using quermass::testing::ring_config;

namespace {

Configuration make_config(std::initializer_list<Disk> disks, double r_max) {
  Configuration config({-50, -50, 50, 50}, r_max);
  for (const Disk& d : disks) config.add(d);
  return config;
}

}  // namespace

TEST_CASE("rasterization basics") {
  SUBCASE("empty config gives an all-false mask") {
    Configuration config({0, 0, 4, 4}, 1);
    auto mask = rasterize(config, 0.05);
    auto f = pixel_functionals(mask);
    CHECK(f.components == 0);
    CHECK(f.holes == 0);
    CHECK(f.area == 0.0);
  }
  SUBCASE("delta above r_min/8 is too coarse") {
    auto config = make_config({{0, 0, 1}}, 1);
    CHECK_THROWS_AS(rasterize(config, 0.2), ResolutionTooCoarse);
  }
  SUBCASE("one unit disk: digitized area within perimeter-scaled bound") {
    auto config = make_config({{0, 0, 1}}, 1);
    const double delta = 1.0 / 64;
    auto f = pixel_functionals(rasterize(config, delta));
    CHECK(std::abs(f.area - kPi) <= 4 * kTwoPi * delta);
    CHECK(f.components == 1);
    CHECK(f.holes == 0);
    CHECK(std::abs(f.perimeter_estimate - kTwoPi) / kTwoPi < 0.01);
  }
  SUBCASE("two disjoint disks: two components") {
    auto config = make_config({{0, 0, 1}, {4, 0, 1}}, 1);
    auto f = pixel_functionals(rasterize(config, 1.0 / 64));
    CHECK(f.components == 2);
    CHECK(f.holes == 0);
  }
}

TEST_CASE("flood-fill hole counting") {
  SUBCASE("equilateral triad side 1.9 at delta 1/128") {
    const double s = 1.9;
    const double h = s * std::sqrt(3.0) / 2;
    auto config = make_config({{0, 0, 1}, {s, 0, 1}, {s / 2, h, 1}}, 1);
    auto f = pixel_functionals(rasterize(config, 1.0 / 128));
    CHECK(!f.degenerate);
    CHECK(f.components == 1);
    CHECK(f.holes == 1);
    CHECK(f.euler == 0);
  }
  SUBCASE("eight-disk annulus has one hole") {
    auto ring = ring_config({0, 0}, 1.6, 1.0, 8, 1.0);
    auto f = pixel_functionals(rasterize(ring, 1.0 / 64));
    CHECK(f.components == 1);
    CHECK(f.holes == 1);
  }
}

TEST_CASE("refinement stability of counts") {
  Rng rng(42);
  int tested = 0;
  while (tested < 15) {
    auto config = random_config(rng, {0, 0, 6, 6}, 12, 0.5, 1.0);
    auto coarse = pixel_functionals(rasterize(config, 0.5 / 64));
    if (coarse.degenerate) continue;
    auto fine = pixel_functionals(rasterize(config, 0.5 / 128));
    CHECK(coarse.components == fine.components);
    CHECK(coarse.holes == fine.holes);
    ++tested;
  }
}

TEST_CASE("per-component holes and shrinking") {
  // A ring with a separate disk far away: the ring's hole belongs to the
  // ring component only.
  auto ring = ring_config({0, 0}, 1.5, 1.0, 6, 1.0);
  Configuration config(ring.window(), 1.0);
  for (const Disk& d : ring.disks()) config.add(d);
  config.add({-4.0, -4.0, 1.0});
  auto mask = rasterize(config, 1.0 / 64);
  std::vector<int> labels;
  const int n_comp = label_foreground(mask, labels);
  REQUIRE(n_comp == 2);
  int with_hole = 0;
  for (int c = 0; c < n_comp; ++c) {
    auto holes = component_holes(mask, labels, c);
    // complement regions that are other components do not count: the
    // far disk sits outside the ring, so only the central hole shows up
    for (const auto& hole : holes) {
      CHECK(!shrink_one(hole).empty());
      ++with_hole;
    }
  }
  CHECK(with_hole == 1);
}
