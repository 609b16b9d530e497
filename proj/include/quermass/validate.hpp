#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quermass/arc_kernel.hpp"
#include "quermass/configuration.hpp"

namespace quermass::validate {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string details;
  double seconds = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.passed) return false;
    return true;
  }
  std::string to_json() const;
};

struct Options {
  std::uint64_t seed = 20240801;
  int threads = 1;
  /// Oracle cell size; <= 0 means the default r0/64 (escalating to r0/256
  /// on degenerate masks). A value above r0/8 surfaces as a skip.
  double oracle_delta = -1.0;

  long oracle_configs = 500;
  long identity_pairs = 1000;
  long bound_samples = 10000;
  long perimeter_configs = 200;
  long hole_configs = 200;

  long poisson_steps = 1000000;
  long sandwich_replicas = 50;
  long sandwich_steps = 200000;
};

using DeltaFn = std::function<FunctionalDelta(const Disk&, const Configuration&)>;

/// Kernel counts vs pixel oracle on seeded random mixed-radius unions;
/// exact euler/components/holes, area within 2*delta*perimeter, perimeter 5%.
CheckResult kernel_oracle_agreement(const Options& opt);

/// delta_functionals == recompute difference; integers exact, reals within
/// 1e-9 in units of r1^2 / r1. `delta` is injectable for mutation tests.
CheckResult delta_identity(const Options& opt, const DeltaFn& delta = {});

/// One-disk variation bounds (area/perimeter/component window) plus the
/// uniform weighted-combination bound over a grid of weight signs.
CheckResult delta_bounds(const Options& opt);

/// Boundary length of a union with grains in a box never exceeds
/// 2*area(box expanded by r0)/r0.
CheckResult perimeter_density_bound(const Options& opt);

/// Hole geometry of equal-radius unions: squared-distance gap to holes,
/// the sqrt(3)*r0 germ-to-foreign-hole bound, and the 2*r0 hole-to-hole
/// bound, measured on oracle hole masks shrunk by one pixel.
CheckResult hole_distance_bounds(const Options& opt);

/// theta = 0 chain: counts chi-square against Poisson(z|W|), radii KS
/// against the mark law, both at level 0.01.
CheckResult poisson_reduction(const Options& opt);

/// theta3 = 0 chain density lies inside [z e^{-C1}, z e^{-C0}] within 3
/// standard errors over independent replicas.
CheckResult sandwich_domination(const Options& opt);

Report run_all(const Options& opt);

}  // namespace quermass::validate
