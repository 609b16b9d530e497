#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace quermass {

/// Seedable, splittable generator: mt19937_64 streams keyed by (seed, stream).
/// All variates are derived from raw 64-bit draws with fixed formulas so that
/// outputs are identical across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(seed), engine_(mix(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(stream + 1))) {}

  /// Independent child stream keyed off the same base seed, e.g. one per replica.
  Rng split(std::uint64_t child) const { return Rng(base_, child); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe for log().
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double exponential(double rate = 1.0) { return -std::log(uniform_pos()) / rate; }

  double normal(double mean = 0.0, double sigma = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sigma * spare_;
    }
    // Box-Muller on raw uniforms.
    const double u = uniform_pos();
    const double v = uniform01();
    const double m = std::sqrt(-2.0 * std::log(u));
    spare_ = m * std::sin(kTau * v);
    have_spare_ = true;
    return mean + sigma * m * std::cos(kTau * v);
  }

  /// Exact Poisson draw. Large means are split in half recursively so the
  /// multiplication loop stays short.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 30.0) return poisson(mean / 2.0) + poisson(mean - mean / 2.0);
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = uniform01();
    while (prod > limit) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }

  /// Uniform integer in [0, n), n > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t maxv = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t lim = maxv - maxv % n;
    std::uint64_t v = engine_();
    while (v >= lim) v = engine_();
    return v % n;
  }

 private:
  static constexpr double kTau = 6.283185307179586476925287;

  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_ = 0;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace quermass
