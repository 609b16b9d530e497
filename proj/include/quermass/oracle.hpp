#pragma once

#include <string>
#include <vector>

#include "quermass/arc_kernel.hpp"
#include "quermass/configuration.hpp"
#include "quermass/geometry.hpp"

namespace quermass {

/// Pixel-grid reference for area/components/holes/perimeter. Cell (i,j) is
/// foreground iff its center lies in some closed disk; the sampled signed
/// offset field min_k(|q - c_k| - r_k) at the same centers feeds the
/// marching-squares perimeter estimate. A one-cell empty ring is guaranteed
/// around all grains.
struct PixelMask {
  Vec2 origin;        // center of cell (0,0)
  double delta = 0;   // cell side
  int nx = 0, ny = 0;
  std::vector<char> bitmap;    // nx*ny, row-major
  std::vector<float> field;    // signed offset at cell centers
  bool degenerate = false;     // counts untrusted; caller refines delta

  bool at(int i, int j) const { return bitmap[static_cast<std::size_t>(j) * nx + i] != 0; }
  double field_at(int i, int j) const { return field[static_cast<std::size_t>(j) * nx + i]; }
  Vec2 cell_center(int i, int j) const { return {origin.x + i * delta, origin.y + j * delta}; }
};

struct PixelFunctionals {
  double area = 0.0;
  double perimeter_estimate = 0.0;
  long components = 0;
  long holes = 0;
  long euler = 0;
  long foreground_cells = 0;
  long boundary_cells = 0;
  bool degenerate = false;
};

/// Pixel-level topology hazards of a configuration at cell size delta:
/// merge_risk - a gap narrow enough (<= 1.5*delta) for foreground cells to
/// bridge disks that do not overlap; split_risk - an overlap neck thinner
/// than ~1.5 cells that 8-connectivity may fail to follow.
struct ContactRisk {
  bool merge_risk = false;
  bool split_risk = false;
  bool any() const { return merge_risk || split_risk; }
};

ContactRisk contact_risk(const Configuration& config, double delta);

/// Rasterizes the disks over their joint bounding box expanded by 2*delta.
/// Throws ResolutionTooCoarse when delta > (smallest radius)/8.
PixelMask rasterize(const Configuration& config, double delta);

/// Flood-fill counts: 8-connected foreground components, 4-connected
/// background components not reaching the padding ring are holes.
/// Perimeter via marching squares with linear interpolation on the offset
/// field (documented low accuracy at corners).
PixelFunctionals pixel_functionals(const PixelMask& mask);

/// Plain PBM-style P1 dump for eyeballing masks.
void write_pgm(const PixelMask& mask, const std::string& path);

// --- helpers for the hole-distance protocol -------------------------------

/// 8-connected foreground labels (-1 on background); returns component count.
int label_foreground(const PixelMask& mask, std::vector<int>& labels);

/// Holes of ONE labelled component considered alone: bounded 4-connected
/// regions of its complement (other components count as complement).
/// Each hole is reported as a list of (i,j) cells.
std::vector<std::vector<std::pair<int, int>>> component_holes(const PixelMask& mask,
                                                              const std::vector<int>& labels,
                                                              int component);

/// Erodes a cell set by one pixel (drops cells with any 4-neighbor outside
/// the set); the conservative shrink used by the distance checks.
std::vector<std::pair<int, int>> shrink_one(const std::vector<std::pair<int, int>>& cells);

}  // namespace quermass
