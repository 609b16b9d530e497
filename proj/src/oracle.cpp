#include "quermass/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>

namespace quermass {

namespace {

constexpr float kFarField = 1e30f;

}  // namespace

ContactRisk contact_risk(const Configuration& config, double delta) {
  ContactRisk risk;
  const int n = config.size();
  const double band = 1.5 * delta;
  std::vector<int> nbr;
  for (int i = 0; i < n; ++i) {
    const Disk& a = config.disk(i);
    config.neighbors_within(a.center(), a.r + config.r_max_bound() + 2 * band, nbr);
    for (int j : nbr) {
      if (j <= i) continue;
      const Disk& b = config.disk(j);
      const double d = germ_distance(a, b);
      const double gap = d - (a.r + b.r);
      if (gap >= 0) {
        if (gap <= band) risk.merge_risk = true;
        continue;
      }
      // Nested disks cannot change counts either way.
      if (d <= std::abs(a.r - b.r)) continue;
      // Overlapping: the union pinches to the chord through the two circle
      // intersections; 8-connectivity needs that chord to span >~1.5 cells.
      const double alpha = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
      const double h2 = a.r * a.r - alpha * alpha;
      if (h2 <= band * band) risk.split_risk = true;
    }
  }
  return risk;
}

PixelMask rasterize(const Configuration& config, double delta) {
  if (delta <= 0) throw ResolutionTooCoarse("delta must be positive");
  if (!config.empty() && delta > config.r_min_present() / 8.0)
    throw ResolutionTooCoarse("delta exceeds (smallest radius)/8");
  PixelMask mask;
  mask.delta = delta;
  if (config.empty()) {
    mask.nx = mask.ny = 3;
    mask.origin = {0, 0};
    mask.bitmap.assign(9, 0);
    mask.field.assign(9, kFarField);
    return mask;
  }
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const Disk& d : config.disks()) {
    x0 = std::min(x0, d.x - d.r);
    y0 = std::min(y0, d.y - d.r);
    x1 = std::max(x1, d.x + d.r);
    y1 = std::max(y1, d.y + d.r);
  }
  x0 -= 2 * delta;
  y0 -= 2 * delta;
  x1 += 2 * delta;
  y1 += 2 * delta;
  mask.origin = {x0, y0};
  mask.nx = static_cast<int>(std::ceil((x1 - x0) / delta)) + 1;
  mask.ny = static_cast<int>(std::ceil((y1 - y0) / delta)) + 1;
  mask.bitmap.assign(static_cast<std::size_t>(mask.nx) * mask.ny, 0);
  mask.field.assign(static_cast<std::size_t>(mask.nx) * mask.ny, kFarField);

  for (const Disk& d : config.disks()) {
    // Keep the field exact out to one extra ring so interpolation near the
    // contour never mixes in the far-field sentinel.
    const double reach = d.r + 2 * delta;
    const int i0 = std::max(0, static_cast<int>(std::floor((d.x - reach - x0) / delta)));
    const int i1 = std::min(mask.nx - 1, static_cast<int>(std::ceil((d.x + reach - x0) / delta)));
    const int j0 = std::max(0, static_cast<int>(std::floor((d.y - reach - y0) / delta)));
    const int j1 = std::min(mask.ny - 1, static_cast<int>(std::ceil((d.y + reach - y0) / delta)));
    for (int j = j0; j <= j1; ++j) {
      const double cy = y0 + j * delta;
      for (int i = i0; i <= i1; ++i) {
        const double cx = x0 + i * delta;
        const float off = static_cast<float>(std::hypot(cx - d.x, cy - d.y) - d.r);
        auto& f = mask.field[static_cast<std::size_t>(j) * mask.nx + i];
        if (off < f) f = off;
        if (off <= 0.0f) mask.bitmap[static_cast<std::size_t>(j) * mask.nx + i] = 1;
      }
    }
  }
  mask.degenerate = contact_risk(config, delta).any();
  return mask;
}

int label_foreground(const PixelMask& mask, std::vector<int>& labels) {
  const int nx = mask.nx, ny = mask.ny;
  labels.assign(static_cast<std::size_t>(nx) * ny, -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t idx = 0; idx < mask.bitmap.size(); ++idx) {
    if (!mask.bitmap[idx] || labels[idx] >= 0) continue;
    const int label = count++;
    labels[idx] = label;
    stack.push_back(idx);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const int ci = static_cast<int>(cur % static_cast<std::size_t>(nx));
      const int cj = static_cast<int>(cur / static_cast<std::size_t>(nx));
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj) continue;
          const int ni = ci + di, nj = cj + dj;
          if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
          const std::size_t nidx = static_cast<std::size_t>(nj) * nx + ni;
          if (mask.bitmap[nidx] && labels[nidx] < 0) {
            labels[nidx] = label;
            stack.push_back(nidx);
          }
        }
    }
  }
  return count;
}

namespace {

// 4-connected background labels; label 0 is the outside (flooded from the
// padding ring), labels >= 1 are holes of the union.
int label_background(const PixelMask& mask, std::vector<int>& labels) {
  const int nx = mask.nx, ny = mask.ny;
  labels.assign(static_cast<std::size_t>(nx) * ny, -1);
  std::vector<std::size_t> stack;
  auto flood = [&](std::size_t start, int label) {
    labels[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const int ci = static_cast<int>(cur % static_cast<std::size_t>(nx));
      const int cj = static_cast<int>(cur / static_cast<std::size_t>(nx));
      constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& o : off) {
        const int ni = ci + o[0], nj = cj + o[1];
        if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
        const std::size_t nidx = static_cast<std::size_t>(nj) * nx + ni;
        if (!mask.bitmap[nidx] && labels[nidx] < 0) {
          labels[nidx] = label;
          stack.push_back(nidx);
        }
      }
    }
  };
  flood(0, 0);  // padding ring guarantees (0,0) is background
  int count = 1;
  for (std::size_t idx = 0; idx < mask.bitmap.size(); ++idx)
    if (!mask.bitmap[idx] && labels[idx] < 0) flood(idx, count++);
  return count;
}

double interp_crossing(double f0, double f1) {
  const double d = f1 - f0;
  return d == 0 ? 0.5 : -f0 / d;
}

// Contour length of the zero level set of the interpolated field within one
// cell square whose corners are (f00,f10,f11,f01) CCW from lower-left.
double marching_cell_length(double f00, double f10, double f11, double f01, double delta) {
  int c = 0;
  if (f00 <= 0) c |= 1;
  if (f10 <= 0) c |= 2;
  if (f11 <= 0) c |= 4;
  if (f01 <= 0) c |= 8;
  if (c == 0 || c == 15) return 0.0;
  // Edge crossing parameters (valid only when the edge straddles zero).
  const double b = interp_crossing(f00, f10);  // bottom
  const double r = interp_crossing(f10, f11);  // right
  const double t = interp_crossing(f01, f11);  // top
  const double l = interp_crossing(f00, f01);  // left
  auto seg = [&](double x0, double y0, double x1, double y1) {
    return std::hypot(x1 - x0, y1 - y0) * delta;
  };
  switch (c) {
    case 1:  case 14: return seg(b, 0, 0, l);
    case 2:  case 13: return seg(b, 0, 1, r);
    case 4:  case 11: return seg(1, r, t, 1);
    case 8:  case 7:  return seg(t, 1, 0, l);
    case 3:  case 12: return seg(0, l, 1, r);
    case 6:  case 9:  return seg(b, 0, t, 1);
    case 5:  case 10: return seg(b, 0, 0, l) + seg(1, r, t, 1);  // saddle; rare
    default: return 0.0;
  }
}

}  // namespace

PixelFunctionals pixel_functionals(const PixelMask& mask) {
  PixelFunctionals out;
  out.degenerate = mask.degenerate;
  std::vector<int> fg, bg;
  out.components = label_foreground(mask, fg);
  const int bg_count = label_background(mask, bg);

  // A hole counts only when it has interior: some cell center further than
  // 0.75*delta from the union. Sub-pixel slivers at hole-corner pinches are
  // the 4-connectivity tails of an adjacent hole and are dropped; a sliver
  // with no 8-adjacent background neighbor could be a real hole below
  // resolution, which marks the mask untrusted (caller refines delta).
  const int nx = mask.nx, ny = mask.ny;
  std::vector<double> max_field(static_cast<std::size_t>(bg_count), -1.0);
  std::vector<char> has_bg_neighbor(static_cast<std::size_t>(bg_count), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int label = bg[static_cast<std::size_t>(j) * nx + i];
      if (label <= 0) continue;
      max_field[static_cast<std::size_t>(label)] =
          std::max(max_field[static_cast<std::size_t>(label)], mask.field_at(i, j));
      for (int dj = -1; dj <= 1 && !has_bg_neighbor[static_cast<std::size_t>(label)]; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ni2 = i + di, nj2 = j + dj;
          if (ni2 < 0 || nj2 < 0 || ni2 >= nx || nj2 >= ny) continue;
          const int other = bg[static_cast<std::size_t>(nj2) * nx + ni2];
          if (other >= 0 && other != label) {
            has_bg_neighbor[static_cast<std::size_t>(label)] = 1;
            break;
          }
        }
    }
  out.holes = 0;
  for (int h = 1; h < bg_count; ++h) {
    const double mf = max_field[static_cast<std::size_t>(h)];
    if (mf >= 0.75 * mask.delta) {
      ++out.holes;
      if (mf < 2.0 * mask.delta) out.degenerate = true;  // barely resolved
    } else if (!has_bg_neighbor[static_cast<std::size_t>(h)]) {
      out.degenerate = true;  // isolated sub-resolution cavity
    }
  }
  out.euler = out.components - out.holes;

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (mask.at(i, j)) {
        ++out.foreground_cells;
        const bool border = i == 0 || j == 0 || i == nx - 1 || j == ny - 1 || !mask.at(i - 1, j) ||
                            !mask.at(i + 1, j) || !mask.at(i, j - 1) || !mask.at(i, j + 1);
        if (border) ++out.boundary_cells;
      }
  out.area = static_cast<double>(out.foreground_cells) * mask.delta * mask.delta;

  // Only cells straddling the contour contribute; the quick reject keeps the
  // scan linear in the mask size with a tiny constant.
  const float near = static_cast<float>(2.0 * mask.delta);
  for (int j = 0; j + 1 < ny; ++j) {
    const float* row0 = mask.field.data() + static_cast<std::size_t>(j) * nx;
    const float* row1 = row0 + nx;
    for (int i = 0; i + 1 < nx; ++i) {
      if (std::abs(row0[i]) > near && std::abs(row0[i + 1]) > near && std::abs(row1[i]) > near &&
          std::abs(row1[i + 1]) > near)
        continue;
      out.perimeter_estimate +=
          marching_cell_length(row0[i], row0[i + 1], row1[i + 1], row1[i], mask.delta);
    }
  }

  return out;
}

void write_pgm(const PixelMask& mask, const std::string& path) {
  std::ofstream os(path);
  os << "P1\n" << mask.nx << " " << mask.ny << "\n";
  for (int j = mask.ny - 1; j >= 0; --j) {
    for (int i = 0; i < mask.nx; ++i) os << (mask.at(i, j) ? "1 " : "0 ");
    os << "\n";
  }
}

std::vector<std::vector<std::pair<int, int>>> component_holes(const PixelMask& mask,
                                                              const std::vector<int>& labels,
                                                              int component) {
  const int nx = mask.nx, ny = mask.ny;
  // Complement of this component = every cell not labelled `component`.
  std::vector<char> visited(static_cast<std::size_t>(nx) * ny, 0);
  std::deque<std::pair<int, int>> queue;
  auto is_complement = [&](int i, int j) {
    return labels[static_cast<std::size_t>(j) * nx + i] != component;
  };
  auto flood = [&](int si, int sj, std::vector<std::pair<int, int>>* sink) {
    visited[static_cast<std::size_t>(sj) * nx + si] = 1;
    queue.push_back({si, sj});
    while (!queue.empty()) {
      auto [ci, cj] = queue.front();
      queue.pop_front();
      if (sink) sink->push_back({ci, cj});
      constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& o : off) {
        const int ni = ci + o[0], nj = cj + o[1];
        if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
        const std::size_t nidx = static_cast<std::size_t>(nj) * nx + ni;
        if (!visited[nidx] && is_complement(ni, nj)) {
          visited[nidx] = 1;
          queue.push_back({ni, nj});
        }
      }
    }
  };
  flood(0, 0, nullptr);  // unbounded part
  std::vector<std::vector<std::pair<int, int>>> holes;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      if (!visited[idx] && is_complement(i, j)) {
        holes.emplace_back();
        flood(i, j, &holes.back());
      }
    }
  return holes;
}

std::vector<std::pair<int, int>> shrink_one(const std::vector<std::pair<int, int>>& cells) {
  std::set<std::pair<int, int>> in(cells.begin(), cells.end());
  std::vector<std::pair<int, int>> out;
  for (const auto& [i, j] : cells) {
    if (in.count({i + 1, j}) && in.count({i - 1, j}) && in.count({i, j + 1}) &&
        in.count({i, j - 1}))
      out.push_back({i, j});
  }
  return out;
}

}  // namespace quermass
