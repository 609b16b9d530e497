#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "quermass/arc_kernel.hpp"
#include "quermass/rng.hpp"

namespace quermass {

struct UnsupportedParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radius mark distribution Q on [r0, r1].
struct RadiusLaw {
  enum class Kind { fixed, uniform, discrete };
  Kind kind = Kind::fixed;
  double fixed_r = 1.0;
  double lo = 1.0, hi = 1.0;            // uniform
  std::vector<double> values;           // discrete
  std::vector<double> weights;          // discrete, same length, positive

  static RadiusLaw fixed(double r) {
    RadiusLaw law;
    law.kind = Kind::fixed;
    law.fixed_r = r;
    return law;
  }
  static RadiusLaw uniform(double lo, double hi) {
    RadiusLaw law;
    law.kind = Kind::uniform;
    law.lo = lo;
    law.hi = hi;
    return law;
  }
  static RadiusLaw discrete(std::vector<double> values, std::vector<double> weights) {
    RadiusLaw law;
    law.kind = Kind::discrete;
    law.values = std::move(values);
    law.weights = std::move(weights);
    return law;
  }

  double sample(Rng& rng) const;
  double cdf(double r) const;
  double support_min() const;
  double support_max() const;
};

/// Model parameters: interaction weights, activity, radius bounds and law.
struct QuermassParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double z = 1.0;       // activity, points per unit area
  double r0 = 1.0;
  double r1 = 1.0;
  RadiusLaw radius_law = RadiusLaw::fixed(1.0);

  QuermassWeights weights() const { return {theta1, theta2, theta3}; }

  /// Throws std::invalid_argument on hard violations (z <= 0, r0 <= 0,
  /// r0 > r1, law escaping [r0, r1]); returns warnings for soft ones
  /// (radius mass concentrated away from an endpoint), never errors on them.
  std::vector<std::string> validate() const;
};

/// Uniform bounds on the one-disk variations for radii in [r0, r1]:
/// 0 <= dA <= a_max; l_min <= dL <= l_max; c_min <= dComponents <= 1.
struct LocalDeltaBounds {
  double a_max = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;
  double c_min = 0.0;
  double c_max = 1.0;
};

LocalDeltaBounds local_delta_bounds(double r0, double r1);

/// K = |t1| a_max + |t2| max(l_max, -l_min) + |t3| max(c_max, -c_min):
/// a uniform upper bound for t1 dA + t2 dL + t3 dComponents.
double energy_combination_bound(const QuermassWeights& w, double r0, double r1);

/// Uniform local-energy bounds (C0, C1) when theta3 = 0, and the implied
/// Poisson sandwich intensities z e^{-C1} <= density <= z e^{-C0}.
/// Throws UnsupportedParameters when theta3 != 0.
std::pair<double, double> poisson_sandwich_bounds(const QuermassParams& params);

}  // namespace quermass
