#include "quermass/params.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quermass {

double RadiusLaw::sample(Rng& rng) const {
  switch (kind) {
    case Kind::fixed:
      return fixed_r;
    case Kind::uniform:
      return rng.uniform(lo, hi);
    case Kind::discrete: {
      double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double u = rng.uniform01() * total;
      for (std::size_t i = 0; i < values.size(); ++i) {
        u -= weights[i];
        if (u < 0) return values[i];
      }
      return values.back();
    }
  }
  return fixed_r;
}

double RadiusLaw::cdf(double r) const {
  switch (kind) {
    case Kind::fixed:
      return r >= fixed_r ? 1.0 : 0.0;
    case Kind::uniform:
      if (r <= lo) return 0.0;
      if (r >= hi) return 1.0;
      return (r - lo) / (hi - lo);
    case Kind::discrete: {
      const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] <= r) acc += weights[i];
      return acc / total;
    }
  }
  return 0.0;
}

double RadiusLaw::support_min() const {
  switch (kind) {
    case Kind::fixed:
      return fixed_r;
    case Kind::uniform:
      return lo;
    case Kind::discrete:
      return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  }
  return 0.0;
}

double RadiusLaw::support_max() const {
  switch (kind) {
    case Kind::fixed:
      return fixed_r;
    case Kind::uniform:
      return hi;
    case Kind::discrete:
      return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  }
  return 0.0;
}

std::vector<std::string> QuermassParams::validate() const {
  if (!(z > 0)) throw std::invalid_argument("activity z must be positive");
  if (!(r0 > 0)) throw std::invalid_argument("r0 must be positive");
  if (!(r0 <= r1)) throw std::invalid_argument("r0 must not exceed r1");
  if (radius_law.kind == RadiusLaw::Kind::discrete) {
    if (radius_law.values.empty() || radius_law.values.size() != radius_law.weights.size())
      throw std::invalid_argument("discrete radius law needs matching nonempty values/weights");
    for (double w : radius_law.weights)
      if (!(w > 0)) throw std::invalid_argument("discrete radius weights must be positive");
  }
  const double eps = 1e-12 * r1;
  if (radius_law.support_min() < r0 - eps || radius_law.support_max() > r1 + eps)
    throw std::invalid_argument("radius law must be supported on [r0, r1]");

  // Mass near both endpoints is the normalization the sandwich constants
  // assume; its absence is tolerated but worth flagging.
  std::vector<std::string> warnings;
  if (radius_law.support_min() > r0 + eps)
    warnings.push_back("radius law puts no mass near r0; effective lower radius bound is larger");
  if (radius_law.support_max() < r1 - eps)
    warnings.push_back("radius law puts no mass near r1; effective upper radius bound is smaller");
  return warnings;
}

LocalDeltaBounds local_delta_bounds(double r0, double r1) {
  LocalDeltaBounds b;
  b.a_max = kPi * r1 * r1;
  b.l_max = kTwoPi * r1;
  b.l_min = -kTwoPi * (r1 + r0) * (r1 + r0) / r0;
  b.c_max = 1.0;
  b.c_min = -kPi * (1.0 + r1 / r0);
  return b;
}

double energy_combination_bound(const QuermassWeights& w, double r0, double r1) {
  const LocalDeltaBounds b = local_delta_bounds(r0, r1);
  return std::abs(w.theta1) * b.a_max + std::abs(w.theta2) * std::max(b.l_max, -b.l_min) +
         std::abs(w.theta3) * std::max(b.c_max, -b.c_min);
}

std::pair<double, double> poisson_sandwich_bounds(const QuermassParams& params) {
  if (params.theta3 != 0.0)
    throw UnsupportedParameters("uniform local-energy bounds require theta3 = 0");
  const LocalDeltaBounds b = local_delta_bounds(params.r0, params.r1);
  const auto span = [](double theta, double lo, double hi) {
    const double a = theta * lo, b2 = theta * hi;
    return std::pair<double, double>{std::min(a, b2), std::max(a, b2)};
  };
  const auto [a_lo, a_hi] = span(params.theta1, 0.0, b.a_max);
  const auto [l_lo, l_hi] = span(params.theta2, b.l_min, b.l_max);
  return {a_lo + l_lo, a_hi + l_hi};  // (C0, C1)
}

}  // namespace quermass
