#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quermass/geometry.hpp"
#include "quermass/spatial_grid.hpp"

namespace quermass {

/// Finite set of marked points (disks) with germs in a rectangular window,
/// backed by a uniform grid sized so that one ring of cells covers the full
/// interaction reach 2*R1. Mutation is single-writer (the sampler);
/// all geometry-kernel operations treat a Configuration as immutable.
class Configuration {
 public:
  Configuration() = default;

  /// `r_max_bound` is the largest radius this configuration will ever hold
  /// (grid sizing); `margin` widens the indexed area for out-of-window germs
  /// (ghost replicas, fixed boundary disks near the window).
  explicit Configuration(Rect window, double r_max_bound = 1.0, double margin = -1.0);

  const Rect& window() const { return window_; }
  double r_max_bound() const { return r_max_; }
  /// Smallest radius present (falls back to r_max_bound when empty);
  /// geometric tolerances scale with it.
  double r_min_present() const;

  int size() const { return static_cast<int>(disks_.size()); }
  bool empty() const { return disks_.empty(); }
  const Disk& disk(int i) const { return disks_[static_cast<std::size_t>(i)]; }
  const std::vector<Disk>& disks() const { return disks_; }

  /// Appends a disk; returns its index.
  int add(const Disk& d);

  /// Removes disk `i` by swapping the last disk into its slot.
  /// Returns the index that changed identity (the old last index), or -1.
  int remove_swap(int i);

  /// Moves germ of disk `i` (radius kept).
  void move(int i, Vec2 new_germ);

  /// Indices of disks with germ distance <= radius from p (exact, closed).
  void neighbors_within(Vec2 p, double radius, std::vector<int>& out) const;

  bool operator==(const Configuration& o) const {
    return window_ == o.window_ && disks_ == o.disks_;
  }

  // --- serialization ---------------------------------------------------

  /// {"window":[x0,y0,x1,y1],"points":[[x,y,r],...]} with 17 significant
  /// digits; optional per-point type labels land in "types".
  std::string to_json(const std::vector<int>* types = nullptr) const;
  static Configuration from_json(const std::string& text, std::vector<int>* types = nullptr);

  /// CSV point list with "x,y,r" header.
  std::string to_csv() const;
  /// Parses a CSV point list; the window must be supplied by the caller.
  static Configuration from_csv(const std::string& text, Rect window, double r_max_bound);

 private:
  Rect window_;
  double r_max_ = 1.0;
  std::vector<Disk> disks_;
  SpatialGrid grid_;
  mutable std::vector<int> scratch_;
};

}  // namespace quermass
