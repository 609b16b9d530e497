#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quermass/configuration.hpp"
#include "quermass/geometry.hpp"

namespace quermass {

/// Relative geometric tolerance: lengths within kGeomEps * (smallest radius)
/// of a degenerate contact raise DegenerateGeometry.
inline constexpr double kGeomEps = 1e-9;

/// The five tracked quantities of a disk union: the three Minkowski
/// functionals plus the component/hole split of the Euler characteristic.
struct Functionals {
  double area = 0.0;
  double perimeter = 0.0;
  long euler = 0;
  long components = 0;
  long holes = 0;

  bool operator==(const Functionals&) const = default;
};

/// Field-by-field change of Functionals when one disk is added.
struct FunctionalDelta {
  double d_area = 0.0;
  double d_perimeter = 0.0;
  long d_euler = 0;
  long d_components = 0;
  long d_holes = 0;
};

struct CircleIntersections {
  int count = 0;         // 0, 1 (tangent), or 2
  bool coincident = false;
  Vec2 p[2];
};

/// Intersection points of the two circles bounding d1 and d2.
/// Coincident circles set the `coincident` marker (rejected upstream).
CircleIntersections circle_intersections(const Disk& d1, const Disk& d2);

/// One maximal boundary arc: the angular interval [a0, a1] (a1 > a0, CCW) of
/// circle `disk` not covered by the open union of the other disks.
/// Endpoint identities are intersection-point keys shared with the adjoining
/// circle, which makes loop assembly exact matching rather than tolerance
/// matching. Full circles carry no endpoints.
struct Arc {
  int disk = 0;
  double a0 = 0.0;
  double a1 = 0.0;
  std::uint64_t v0 = 0;
  std::uint64_t v1 = 0;
  bool full = false;

  double length_angle() const { return full ? kTwoPi : a1 - a0; }
};

struct ArcVertex {
  std::uint64_t key = 0;
  Vec2 pos;
};

struct ArcArrangement {
  std::vector<Arc> arcs;
  std::vector<ArcVertex> vertices;
  /// Closed boundary curves; each loop is a cyclic list of arc indices.
  std::vector<std::vector<int>> loops;
};

/// Arc decomposition of the boundary of the disk union.
/// Throws DegenerateGeometry on coincident disks or when the arrangement is
/// within tolerance of a combinatorial ambiguity.
ArcArrangement boundary_arcs(const Configuration& config);

/// Exact Minkowski functionals of the union: area by the boundary line
/// integral, perimeter as total arc length, components by union-find over the
/// strict overlap graph, holes = loops - components.
Functionals functionals(const Configuration& config);

/// Incremental version of functionals(config + p) - functionals(config).
/// Only disks within interaction reach of p are consulted for the geometric
/// deltas; the component delta uses the configuration-wide overlap graph.
FunctionalDelta delta_functionals(const Disk& p, const Configuration& config);

struct QuermassWeights {
  double theta1 = 0.0;  // per unit area
  double theta2 = 0.0;  // per unit perimeter
  double theta3 = 0.0;  // per Euler characteristic unit
};

/// Local energy of p against config: theta1*dA + theta2*dL + theta3*dEuler.
/// Window-independent by construction.
double local_energy(const Disk& p, const Configuration& config, const QuermassWeights& w);

/// Energy inside `region`: H(omega_D) - H(omega_{D\region}) with
/// D = region expanded by 2*R1; restriction is by germ location.
double energy_in(const Rect& region, const Configuration& config, const QuermassWeights& w);

// --- low-level primitives shared with the sampler ------------------------

/// Geometric part of the insertion delta computed from an explicit local
/// environment (all disks within germ distance < p.r + disk.r of p must be
/// present; extras are ignored). `pieces` counts the connected components of
/// (union of neighbors) ∩ (closed new disk), i.e. 1 - d_euler.
struct LocalDelta {
  double d_area = 0.0;
  double d_perimeter = 0.0;
  long d_euler = 0;
  /// Positions into `neighbors` of disks strictly overlapping p.
  std::vector<int> overlapping;
};

/// `tol` is the absolute length tolerance (kGeomEps * smallest radius in play).
LocalDelta add_disk_delta(const Disk& p, std::span<const Disk> neighbors, double tol);

/// Union-find component labels of the strict overlap graph; labels are
/// renumbered 0..k-1 in order of smallest member index. Returns label count.
long overlap_components(const Configuration& config, std::vector<int>& labels);

}  // namespace quermass
