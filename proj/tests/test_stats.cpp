#include <cmath>

#include "doctest.h"
#include "quermass/rng.hpp"
#include "quermass/stats.hpp"

using namespace quermass;

TEST_CASE("gamma tail and chi-square survival") {
  // chi-square sf with 2 dof is exp(-x/2)
  CHECK(chi_square_sf(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(chi_square_sf(0.0, 5) == doctest::Approx(1.0));
  // known quantile: P(chi2_1 > 3.841) ~ 0.05
  CHECK(chi_square_sf(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
}

TEST_CASE("chi-square accepts true poisson samples and rejects shifted ones") {
  Rng rng(8);
  std::vector<long> good, bad;
  for (int i = 0; i < 5000; ++i) {
    good.push_back(rng.poisson(25.0));
    bad.push_back(rng.poisson(27.0));
  }
  CHECK(chi_square_poisson(good, 25.0).p_value > 0.01);
  CHECK(chi_square_poisson(bad, 25.0).p_value < 1e-6);
}

TEST_CASE("ks test accepts uniforms and rejects skewed samples") {
  Rng rng(9);
  std::vector<double> uniform, squared;
  for (int i = 0; i < 4000; ++i) {
    uniform.push_back(rng.uniform01());
    squared.push_back(rng.uniform01() * rng.uniform01());
  }
  const auto id_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_test(uniform, id_cdf).p_value > 0.01);
  CHECK(ks_test(squared, id_cdf).p_value < 1e-8);
}

TEST_CASE("mean and standard error") {
  auto ms = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(ms.mean == doctest::Approx(2.5));
  CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(mean_se({}).n == 0);
}

TEST_CASE("rng reproducibility and splitting") {
  Rng a(123, 0), b(123, 0), c(123, 1);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  Rng a2(123, 0);
  for (int i = 0; i < 100; ++i) differs |= a2.next_u64() != c.next_u64();
  CHECK(differs);
  Rng split_a = Rng(99).split(4);
  Rng direct(99, 4);
  for (int i = 0; i < 10; ++i) CHECK(split_a.next_u64() == direct.next_u64());
}

TEST_CASE("poisson sampler moments") {
  Rng rng(10);
  const double mean = 73.0;  // exercises the recursive split
  double sum = 0.0, ss = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(mean));
    sum += x;
    ss += x * x;
  }
  const double m = sum / n;
  const double var = ss / n - m * m;
  CHECK(m == doctest::Approx(mean).epsilon(0.01));
  CHECK(var == doctest::Approx(mean).epsilon(0.05));
}
