#include "quermass/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quermass/union_find.hpp"

namespace quermass {

ComponentSet components(const Configuration& config) {
  ComponentSet out;
  const int n = config.size();
  UnionFind uf(n);
  std::vector<int> nbr;
  for (int i = 0; i < n; ++i) {
    const Disk& di = config.disk(i);
    config.neighbors_within(di.center(), di.r + config.r_max_bound(), nbr);
    for (int j : nbr)
      if (j > i && disks_overlap(di, config.disk(j))) uf.unite(i, j);
  }
  out.count = uf.compact_labels(out.label);
  return out;
}

bool crossing(const Configuration& config, const Rect& window, Direction dir) {
  const int n = config.size();
  if (n == 0) return false;
  const ComponentSet comps = components(config);
  std::vector<char> touch_lo(static_cast<std::size_t>(comps.count), 0);
  std::vector<char> touch_hi(static_cast<std::size_t>(comps.count), 0);
  const auto edge_distance = [&](const Disk& d, bool high) {
    // Distance from the germ to the window edge segment.
    if (dir == Direction::horizontal) {
      const double ex = high ? window.x1 : window.x0;
      const double dy = std::max({window.y0 - d.y, 0.0, d.y - window.y1});
      return std::hypot(d.x - ex, dy);
    }
    const double ey = high ? window.y1 : window.y0;
    const double dx = std::max({window.x0 - d.x, 0.0, d.x - window.x1});
    return std::hypot(d.y - ey, dx);
  };
  for (int i = 0; i < n; ++i) {
    const Disk& d = config.disk(i);
    const int c = comps.label[static_cast<std::size_t>(i)];
    if (edge_distance(d, false) <= d.r) touch_lo[static_cast<std::size_t>(c)] = 1;
    if (edge_distance(d, true) <= d.r) touch_hi[static_cast<std::size_t>(c)] = 1;
  }
  for (long c = 0; c < comps.count; ++c)
    if (touch_lo[static_cast<std::size_t>(c)] && touch_hi[static_cast<std::size_t>(c)]) return true;
  return false;
}

DiamondGeometry::DiamondGeometry(double ell_, double r0, double r1) : ell(ell_) {
  if (!(ell > 2 * r1 + 2 * r0))
    throw std::invalid_argument("diamond scale must exceed 2*R1 + 2*R0");
}

std::vector<Vec2> DiamondGeometry::octagon_vertices() const {
  const double L = ell;
  return {{3 * L, 0}, {6 * L, 0}, {9 * L, 3 * L}, {9 * L, 6 * L},
          {6 * L, 9 * L}, {3 * L, 9 * L}, {0, 6 * L}, {0, 3 * L}};
}

int xi(const Configuration& config, Vec2 origin, const DiamondGeometry& geom) {
  // Restriction of the translated configuration to the open octagon.
  std::vector<Disk> kept;
  std::vector<int> ids;
  config.neighbors_within({origin.x + 4.5 * geom.ell, origin.y + 4.5 * geom.ell},
                          4.5 * geom.ell * std::numbers::sqrt2 + config.r_max_bound(), ids);
  for (int id : ids) {
    Disk d = config.disk(id);
    d.x -= origin.x;
    d.y -= origin.y;
    if (geom.inside_octagon(d.center())) kept.push_back(d);
  }
  if (kept.empty()) return 0;

  const Rect boxes[4] = {geom.box_north(), geom.box_south(), geom.box_east(), geom.box_west()};
  bool box_hit[4] = {false, false, false, false};
  std::vector<int> box_of(kept.size(), -1);
  for (std::size_t k = 0; k < kept.size(); ++k)
    for (int b = 0; b < 4; ++b)
      if (boxes[b].contains(kept[k].center())) {
        box_hit[b] = true;
        box_of[k] = b;
      }
  if (!(box_hit[0] && box_hit[1] && box_hit[2] && box_hit[3])) return 0;  // (occupancy)

  // Components of the restricted union touching any cardinal box.
  UnionFind uf(static_cast<int>(kept.size()));
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = a + 1; b < kept.size(); ++b)
      if (disks_overlap(kept[a], kept[b])) uf.unite(static_cast<int>(a), static_cast<int>(b));
  int spanning = -1;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (box_of[k] < 0) continue;
    const int root = uf.find(static_cast<int>(k));
    if (spanning < 0)
      spanning = root;
    else if (spanning != root)
      return 0;  // more than one component reaches the cardinal boxes
  }
  return 1;
}

SiteField site_field(const Configuration& config, const DiamondGeometry& geom) {
  const Rect w = config.window();
  const double span = 9 * geom.ell;
  const double step = 6 * geom.ell;
  SiteField field;
  field.ell = geom.ell;
  field.i0 = static_cast<long>(std::ceil(w.x0 / step - 1e-12));
  field.j0 = static_cast<long>(std::ceil(w.y0 / step - 1e-12));
  field.i1 = static_cast<long>(std::floor((w.x1 - span) / step + 1e-12));
  field.j1 = static_cast<long>(std::floor((w.y1 - span) / step + 1e-12));
  if (field.i1 < field.i0 || field.j1 < field.j0)
    throw WindowTooSmall("no translated octagon fits in the window");
  field.open_.assign(static_cast<std::size_t>(field.size()), 0);
  for (long j = field.j0; j <= field.j1; ++j)
    for (long i = field.i0; i <= field.i1; ++i) {
      const Vec2 origin{i * step, j * step};
      field.open_[static_cast<std::size_t>((j - field.j0) * field.ni() + (i - field.i0))] =
          static_cast<char>(xi(config, origin, geom));
    }
  return field;
}

std::string SiteField::to_csv() const {
  std::ostringstream os;
  os << "i,j,xi\n";
  for (long j = j0; j <= j1; ++j)
    for (long i = i0; i <= i1; ++i) os << i << "," << j << "," << (open(i, j) ? 1 : 0) << "\n";
  return os.str();
}

SitePercolationSummary site_percolation_summary(const SiteField& field) {
  SitePercolationSummary out;
  out.n_sites = field.size();
  if (out.n_sites == 0) return out;
  long open_count = 0;
  const long ni = field.ni(), nj = field.nj();
  UnionFind uf(static_cast<int>(ni * nj));
  for (long j = 0; j < nj; ++j)
    for (long i = 0; i < ni; ++i) {
      if (!field.open(field.i0 + i, field.j0 + j)) continue;
      ++open_count;
      if (i + 1 < ni && field.open(field.i0 + i + 1, field.j0 + j))
        uf.unite(static_cast<int>(j * ni + i), static_cast<int>(j * ni + i + 1));
      if (j + 1 < nj && field.open(field.i0 + i, field.j0 + j + 1))
        uf.unite(static_cast<int>(j * ni + i), static_cast<int>((j + 1) * ni + i));
    }
  out.p_hat = static_cast<double>(open_count) / static_cast<double>(out.n_sites);

  std::vector<long> cluster(static_cast<std::size_t>(ni * nj), 0);
  for (long j = 0; j < nj; ++j)
    for (long i = 0; i < ni; ++i)
      if (field.open(field.i0 + i, field.j0 + j))
        ++cluster[static_cast<std::size_t>(uf.find(static_cast<int>(j * ni + i)))];
  for (long c : cluster) out.largest_site_cluster = std::max(out.largest_site_cluster, c);

  // Left-to-right crossing of open sites.
  for (long jl = 0; jl < nj && !out.lattice_crossing; ++jl) {
    if (!field.open(field.i0, field.j0 + jl)) continue;
    const int left = uf.find(static_cast<int>(jl * ni));
    for (long jr = 0; jr < nj; ++jr) {
      if (field.open(field.i0 + ni - 1, field.j0 + jr) &&
          uf.find(static_cast<int>(jr * ni + ni - 1)) == left) {
        out.lattice_crossing = true;
        break;
      }
    }
  }
  return out;
}

std::string SitePercolationSummary::to_json() const {
  std::ostringstream os;
  os << "{\"pHat\": " << p_hat << ", \"latticeCrossing\": " << (lattice_crossing ? "true" : "false")
     << ", \"largestSiteCluster\": " << largest_site_cluster << ", \"nSites\": " << n_sites
     << ", \"siteThresholdReference\": " << kSiteThresholdReference << "}";
  return os.str();
}

}  // namespace quermass
