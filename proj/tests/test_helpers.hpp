#pragma once

#include "quermass/configuration.hpp"
#include "quermass/rng.hpp"

namespace quermass::testing {

inline Configuration random_config(Rng& rng, Rect window, int n, double r0, double r1) {
  Configuration config(window, r1);
  for (int i = 0; i < n; ++i)
    config.add({rng.uniform(window.x0, window.x1), rng.uniform(window.y0, window.y1),
                rng.uniform(r0, r1)});
  return config;
}

/// Ring of `n` unit-spaced overlapping disks around (cx, cy); consecutive
/// disks overlap when 2 * ring_r * sin(pi/n) < 2 * disk_r.
inline Configuration ring_config(Vec2 c, double ring_r, double disk_r, int n, double r_max) {
  Configuration config({c.x - ring_r - 2 * disk_r, c.y - ring_r - 2 * disk_r,
                        c.x + ring_r + 2 * disk_r, c.y + ring_r + 2 * disk_r},
                       r_max);
  for (int i = 0; i < n; ++i) {
    const double a = kTwoPi * i / n;
    config.add({c.x + ring_r * std::cos(a), c.y + ring_r * std::sin(a), disk_r});
  }
  return config;
}

}  // namespace quermass::testing
