#pragma once

#include <cstdint>
#include <vector>

#include "quermass/geometry.hpp"

namespace quermass {

/// Uniform bucket grid over an expanded window; maps cells to point ids.
/// Points slightly outside the nominal bounds are clamped into border cells,
/// so queries stay exact as long as callers filter by true distance (they do).
class SpatialGrid {
 public:
  SpatialGrid() = default;

  /// `bounds` should already include any margin for out-of-window germs
  /// (ghosts, fixed boundary disks). `cell` is the bucket side length.
  SpatialGrid(Rect bounds, double cell) { reset(bounds, cell); }

  void reset(Rect bounds, double cell) {
    bounds_ = bounds;
    cell_ = cell > 0 ? cell : 1.0;
    nx_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(bounds_.width() / cell_)));
    ny_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(bounds_.height() / cell_)));
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  }

  double cell_size() const { return cell_; }

  void insert(int id, Vec2 p) { cells_[cell_index(p)].push_back(id); }

  void remove(int id, Vec2 p) {
    auto& bucket = cells_[cell_index(p)];
    for (std::size_t k = 0; k < bucket.size(); ++k) {
      if (bucket[k] == id) {
        bucket[k] = bucket.back();
        bucket.pop_back();
        return;
      }
    }
  }

  /// Ids of points whose bucket intersects the disk of radius `radius` at `p`.
  /// Superset of the true neighbor set; callers filter by germ distance.
  void query(Vec2 p, double radius, std::vector<int>& out) const {
    out.clear();
    const std::int64_t i0 = clamp_x(coord_x(p.x - radius));
    const std::int64_t i1 = clamp_x(coord_x(p.x + radius));
    const std::int64_t j0 = clamp_y(coord_y(p.y - radius));
    const std::int64_t j1 = clamp_y(coord_y(p.y + radius));
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t i = i0; i <= i1; ++i) {
        const auto& bucket = cells_[static_cast<std::size_t>(j * nx_ + i)];
        out.insert(out.end(), bucket.begin(), bucket.end());
      }
  }

 private:
  std::int64_t coord_x(double x) const {
    return static_cast<std::int64_t>(std::floor((x - bounds_.x0) / cell_));
  }
  std::int64_t coord_y(double y) const {
    return static_cast<std::int64_t>(std::floor((y - bounds_.y0) / cell_));
  }
  std::int64_t clamp_x(std::int64_t i) const { return std::min(std::max<std::int64_t>(i, 0), nx_ - 1); }
  std::int64_t clamp_y(std::int64_t j) const { return std::min(std::max<std::int64_t>(j, 0), ny_ - 1); }

  std::size_t cell_index(Vec2 p) const {
    return static_cast<std::size_t>(clamp_y(coord_y(p.y)) * nx_ + clamp_x(coord_x(p.x)));
  }

  Rect bounds_;
  double cell_ = 1.0;
  std::int64_t nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
};

}  // namespace quermass
