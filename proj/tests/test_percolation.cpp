#include <cmath>
#include <functional>

#include "doctest.h"
#include "quermass/percolation.hpp"
#include "quermass/rng.hpp"
#include "test_helpers.hpp"

using namespace quermass;
using quermass::testing::random_config;

namespace {

Configuration boolean_sample(Rng& rng, Rect window, double intensity, double radius) {
  Configuration config(window, radius);
  const long n = rng.poisson(intensity * window.area());
  for (long i = 0; i < n; ++i)
    config.add({rng.uniform(window.x0, window.x1), rng.uniform(window.y0, window.y1), radius});
  return config;
}

}  // namespace

TEST_CASE("components") {
  Configuration config({0, 0, 20, 20}, 1);
  SUBCASE("empty") { CHECK(components(config).count == 0); }
  SUBCASE("two disjoint disks") {
    config.add({2, 2, 1});
    config.add({8, 8, 1});
    CHECK(components(config).count == 2);
  }
  SUBCASE("overlapping chain is one component") {
    for (int i = 0; i < 8; ++i) config.add({2.0 + 1.5 * i, 5.0, 1.0});
    auto comps = components(config);
    CHECK(comps.count == 1);
    for (int lab : comps.label) CHECK(lab == 0);
  }
  SUBCASE("tangent disks do not connect") {
    config.add({2, 2, 1});
    config.add({4, 2, 1});
    CHECK(components(config).count == 2);
  }
}

TEST_CASE("window crossing") {
  Rect window{0, 0, 10, 10};
  Configuration config(window, 1);
  SUBCASE("empty does not cross") { CHECK(!crossing(config, window, Direction::horizontal)); }
  SUBCASE("horizontal chain crosses horizontally only") {
    for (int i = 0; i <= 10; ++i) config.add({i * 1.0, 5.0, 0.8});
    CHECK(crossing(config, window, Direction::horizontal));
    CHECK(!crossing(config, window, Direction::vertical));
  }
  SUBCASE("single centered disk does not cross") {
    config.add({5, 5, 2});
    CHECK(!crossing(config, window, Direction::horizontal));
  }
  SUBCASE("dense Boolean samples cross almost surely") {
    // area fraction 0.9 -> intensity log(10)/pi for unit disks
    const double intensity = std::log(10.0) / kPi;
    Rng rng(2024);
    int crossings = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      auto sample = boolean_sample(rng, {0, 0, 20, 20}, intensity, 1.0);
      if (crossing(sample, {0, 0, 20, 20}, Direction::horizontal)) ++crossings;
    }
    CHECK(crossings > trials * 0.9);
  }
}

TEST_CASE("diamond geometry") {
  CHECK_THROWS(DiamondGeometry(3.9, 1.0, 1.0));
  DiamondGeometry geom(5.0, 1.0, 1.0);
  SUBCASE("cardinal boxes sit inside the octagon") {
    for (const Rect& box : {geom.box_north(), geom.box_south(), geom.box_east(), geom.box_west()}) {
      CHECK(geom.inside_octagon({box.x0, box.y0}));
      CHECK(geom.inside_octagon({box.x1, box.y1}));
      CHECK(geom.inside_octagon({box.x0, box.y1}));
      CHECK(geom.inside_octagon({box.x1, box.y0}));
    }
  }
  SUBCASE("octagon corners are excluded, center included") {
    CHECK(!geom.inside_octagon({0, 0}));
    CHECK(!geom.inside_octagon({3 * geom.ell, 0}));
    CHECK(geom.inside_octagon({4.5 * geom.ell, 4.5 * geom.ell}));
  }
}

TEST_CASE("site variable") {
  const double ell = 5.0;
  DiamondGeometry geom(ell, 1.0, 1.0);
  Configuration config({0, 0, 9 * ell, 9 * ell}, 1.0);
  SUBCASE("empty configuration is closed") { CHECK(xi(config, {0, 0}, geom) == 0); }
  SUBCASE("all boxes occupied and chained together opens the site") {
    // one germ per cardinal box, joined by a dense cross of disks
    config.add({4.5 * ell, 7.5 * ell, 1.0});
    config.add({4.5 * ell, 1.5 * ell, 1.0});
    config.add({7.5 * ell, 4.5 * ell, 1.0});
    config.add({1.5 * ell, 4.5 * ell, 1.0});
    for (double t = 1.5; t <= 7.5; t += 0.3) {
      config.add({4.5 * ell, t * ell, 1.0});
      config.add({t * ell, 4.5 * ell, 1.0});
    }
    CHECK(xi(config, {0, 0}, geom) == 1);
  }
  SUBCASE("two separate cardinal components keep the site closed") {
    config.add({4.5 * ell, 7.5 * ell, 1.0});
    config.add({7.5 * ell, 4.5 * ell, 1.0});
    config.add({1.5 * ell, 4.5 * ell, 1.0});
    config.add({4.5 * ell, 1.5 * ell, 1.0});
    // join N-E and S-W only -> two components touch the boxes
    for (double t = 0; t < 1; t += 0.04) {
      config.add({(4.5 + 3 * t) * ell, (7.5 - 3 * t) * ell, 1.0});
      config.add({(1.5 + 3 * t) * ell, (4.5 - 3 * t) * ell, 1.0});
    }
    CHECK(xi(config, {0, 0}, geom) == 0);
  }
  SUBCASE("xi ignores germs outside the octagon") {
    config.add({4.5 * ell, 7.5 * ell, 1.0});
    const int before = xi(config, {0, 0}, geom);
    config.add({-3 * ell, -3 * ell, 1.0});
    config.add({9 * ell + 2, 9 * ell + 2, 1.0});
    CHECK(xi(config, {0, 0}, geom) == before);
  }
}

TEST_CASE("site field") {
  const double ell = 5.0;
  DiamondGeometry geom(ell, 1.0, 1.0);
  SUBCASE("window of exactly one octagon yields one site") {
    Configuration config({0, 0, 9 * ell, 9 * ell}, 1.0);
    auto field = site_field(config, geom);
    CHECK(field.size() == 1);
    CHECK(!field.open(0, 0));
  }
  SUBCASE("too small a window throws") {
    Configuration config({0, 0, 8 * ell, 9 * ell}, 1.0);
    CHECK_THROWS_AS(site_field(config, geom), WindowTooSmall);
  }
  SUBCASE("empty configuration gives an all-zero field") {
    Configuration config({0, 0, 16 * ell, 16 * ell}, 1.0);
    auto field = site_field(config, geom);
    CHECK(field.size() == 4);
    auto summary = site_percolation_summary(field);
    CHECK(summary.p_hat == 0.0);
    CHECK(!summary.lattice_crossing);
  }
}

TEST_CASE("site percolation summary") {
  const auto make_field = [](long ni, long nj, const std::function<bool(long, long)>& open) {
    SiteField f;
    f.ell = 5.0;
    f.i0 = f.j0 = 0;
    f.i1 = ni - 1;
    f.j1 = nj - 1;
    f.open_.assign(static_cast<std::size_t>(ni * nj), 0);
    for (long j = 0; j < nj; ++j)
      for (long i = 0; i < ni; ++i)
        f.open_[static_cast<std::size_t>(j * ni + i)] = open(i, j) ? 1 : 0;
    return f;
  };
  SUBCASE("all open") {
    auto f = make_field(6, 6, [](long, long) { return true; });
    auto s = site_percolation_summary(f);
    CHECK(s.p_hat == 1.0);
    CHECK(s.lattice_crossing);
    CHECK(s.largest_site_cluster == 36);
  }
  SUBCASE("all closed") {
    auto f = make_field(6, 6, [](long, long) { return false; });
    auto s = site_percolation_summary(f);
    CHECK(s.p_hat == 0.0);
    CHECK(!s.lattice_crossing);
    CHECK(s.largest_site_cluster == 0);
  }
  SUBCASE("diagonal neighbors do not connect") {
    auto f = make_field(3, 3, [](long i, long j) { return (i + j) % 2 == 0; });
    auto s = site_percolation_summary(f);
    CHECK(s.largest_site_cluster == 1);
    CHECK(!s.lattice_crossing);
  }
  SUBCASE("supercritical Bernoulli fields cross left to right") {
    Rng rng(77);
    int crossings = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
      auto f = make_field(50, 50, [&](long, long) { return rng.uniform01() < 0.7; });
      if (site_percolation_summary(f).lattice_crossing) ++crossings;
    }
    CHECK(crossings > trials * 0.9);
  }
}

TEST_CASE("lattice crossing implies a continuum crossing over the spanned extent") {
  // dense Boolean soup over a window that fits a few octagons
  const double ell = 5.0;
  DiamondGeometry geom(ell, 1.0, 1.0);
  const double intensity = 3.0 / kPi;  // area fraction ~0.95
  Rng rng(31);
  Rect window{0, 0, 15 * ell, 15 * ell};
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    Configuration sample(window, 1.0);
    const long n = rng.poisson(intensity * window.area());
    for (long i = 0; i < n; ++i)
      sample.add({rng.uniform(window.x0, window.x1), rng.uniform(window.y0, window.y1), 1.0});
    auto field = site_field(sample, geom);
    auto summary = site_percolation_summary(field);
    if (!summary.lattice_crossing) continue;
    const Rect extent{field.i0 * 6 * ell + 2 * ell, window.y0, field.i1 * 6 * ell + 7 * ell,
                      window.y1};
    CHECK(crossing(sample, extent, Direction::horizontal));
    ++checked;
  }
  CHECK(checked > 0);
}
