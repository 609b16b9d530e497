#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quermass/configuration.hpp"
#include "quermass/geometry.hpp"

namespace quermass {

enum class Direction { horizontal, vertical };

/// Connected components of the union (strict overlap graph), labelled
/// 0..k-1 by smallest member index.
struct ComponentSet {
  std::vector<int> label;   // per disk
  long count = 0;
};

ComponentSet components(const Configuration& config);

/// True iff one component contains a disk meeting the left edge and a disk
/// meeting the right edge (resp. bottom/top). A disk meets an edge iff the
/// germ-to-edge distance is <= r (closed comparison).
bool crossing(const Configuration& config, const Rect& window, Direction dir);

/// The octagonal evaluation box of side scale ell with its four cardinal
/// sub-boxes; requires ell > 2*R1 + 2*R0.
struct DiamondGeometry {
  double ell = 0.0;

  explicit DiamondGeometry(double ell_, double r0, double r1);

  /// Vertices of the octagon (in units of ell: spans [0,9ell]^2).
  std::vector<Vec2> octagon_vertices() const;
  Rect box_north() const { return {4 * ell, 7 * ell, 5 * ell, 8 * ell}; }
  Rect box_south() const { return {4 * ell, 1 * ell, 5 * ell, 2 * ell}; }
  Rect box_east() const { return {7 * ell, 4 * ell, 8 * ell, 5 * ell}; }
  Rect box_west() const { return {1 * ell, 4 * ell, 2 * ell, 5 * ell}; }
  Rect bounding_box() const { return {0, 0, 9 * ell, 9 * ell}; }

  /// Strict interior of the octagon.
  bool inside_octagon(Vec2 p) const {
    const double s = p.x + p.y, d = p.x - p.y, L = ell;
    return p.x > 0 && p.x < 9 * L && p.y > 0 && p.y < 9 * L && s > 3 * L && s < 15 * L &&
           d > -6 * L && d < 6 * L;
  }
};

/// Site variable at a lattice origin: translates the configuration so the
/// octagon sits at the origin, keeps germs strictly inside it, and returns 1
/// iff every cardinal box holds a germ and all cardinal-box disks belong to
/// one connected component of the restricted union.
int xi(const Configuration& config, Vec2 origin, const DiamondGeometry& geom);

/// 0/1 site field on the rescaled lattice (6*ell*Z)^2; only sites whose
/// octagon fits inside the window are present.
struct SiteField {
  double ell = 0.0;
  long i0 = 0, j0 = 0;      // lattice coordinate ranges [i0, i1] x [j0, j1]
  long i1 = -1, j1 = -1;
  std::vector<char> open_;  // row-major over the range

  long ni() const { return i1 - i0 + 1; }
  long nj() const { return j1 - j0 + 1; }
  long size() const { return ni() * nj(); }
  bool open(long i, long j) const {
    return open_[static_cast<std::size_t>((j - j0) * ni() + (i - i0))] != 0;
  }
  std::string to_csv() const;
};

SiteField site_field(const Configuration& config, const DiamondGeometry& geom);

struct SitePercolationSummary {
  double p_hat = 0.0;
  bool lattice_crossing = false;
  long largest_site_cluster = 0;
  long n_sites = 0;
  /// Literature value of the square-lattice site threshold, reported for
  /// orientation only; never used in pass/fail decisions.
  static constexpr double kSiteThresholdReference = 0.592746;

  std::string to_json() const;
};

/// p_hat, nearest-neighbor left-right crossing of open sites, and the
/// largest open cluster. Absent sites count as closed.
SitePercolationSummary site_percolation_summary(const SiteField& field);

}  // namespace quermass
