#include "quermass/arc_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "quermass/union_find.hpp"

namespace quermass {

namespace {

double norm_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// Canonical key of one of the two intersection points of circles i and j.
// For the ordered pair (a,b) with a < b, s = 0 is the point where circle a
// enters disk b (which is the same planar point where circle b exits disk a),
// s = 1 the other one. Endpoint matching during loop assembly is therefore
// exact key equality, never coordinate comparison.
std::uint64_t vkey(int i, int j, bool i_enters_j) {
  int a = i, b = j;
  int s = i_enters_j ? 0 : 1;
  if (i > j) {
    a = j;
    b = i;
    s = 1 - s;
  }
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 33) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 1) |
         static_cast<std::uint64_t>(s);
}

// Angular span [a0, a0+len) of one circle, endpoints tagged with vertex keys.
struct AngSpan {
  double a0 = 0.0;
  double len = 0.0;
  std::uint64_t v0 = 0;
  std::uint64_t v1 = 0;
};

enum class CoverKind { none, swallows, partial };

struct PairCover {
  CoverKind kind = CoverKind::none;
  AngSpan span;
};

// How disk `other` covers the circle of `self`.
PairCover cover_of_circle(const Disk& self, int self_idx, const Disk& other, int other_idx,
                          double tol) {
  PairCover out;
  const double d = germ_distance(self, other);
  if (d <= tol && std::abs(self.r - other.r) <= tol)
    throw DegenerateGeometry("coincident disks");
  if (d >= self.r + other.r) return out;              // no contact
  if (d <= other.r - self.r) {                        // self strictly inside other
    out.kind = CoverKind::swallows;
    return out;
  }
  if (d <= self.r - other.r) return out;              // other strictly inside self
  const double arg = (d * d + self.r * self.r - other.r * other.r) / (2.0 * d * self.r);
  const double alpha = std::acos(std::clamp(arg, -1.0, 1.0));
  if (alpha <= 0.0) return out;
  if (alpha >= kPi) {
    out.kind = CoverKind::swallows;
    return out;
  }
  const double phi = std::atan2(other.y - self.y, other.x - self.x);
  out.kind = CoverKind::partial;
  out.span.a0 = norm_angle(phi - alpha);
  out.span.len = 2.0 * alpha;
  out.span.v0 = vkey(self_idx, other_idx, true);
  out.span.v1 = vkey(self_idx, other_idx, false);
  return out;
}

struct CoverResult {
  bool swallowed = false;  // circle entirely covered by the open union
  bool untouched = false;  // circle entirely uncovered
  std::vector<AngSpan> uncovered;
  std::vector<AngSpan> covered;
};

// Circular union of covered spans; complements within tolerance of a sliver
// (two boundary vertices closer than tol_angle along the circle) throw.
CoverResult merge_cover(const std::vector<AngSpan>& spans, double tol_angle) {
  CoverResult res;
  if (spans.empty()) {
    res.untouched = true;
    return res;
  }
  struct Event {
    double a;
    int delta;
    std::uint64_t key;
  };
  std::vector<Event> ev;
  ev.reserve(2 * spans.size());
  int count = 0;
  for (const AngSpan& s : spans) {
    const double end = s.a0 + s.len;
    if (end >= kTwoPi) ++count;  // covers the seam just below 2*pi
    ev.push_back({s.a0, +1, s.v0});
    ev.push_back({norm_angle(end), -1, s.v1});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.a != b.a) return a.a < b.a;
    if (a.delta != b.delta) return a.delta < b.delta;  // ends before starts
    return a.key < b.key;
  });
  struct Transition {
    double a;
    std::uint64_t key;
    bool to_covered;
  };
  std::vector<Transition> trs;
  for (const Event& e : ev) {
    const int next = count + e.delta;
    if (next < 0) throw DegenerateGeometry("coverage sweep underflow");
    if (count == 0 && next >= 1)
      trs.push_back({e.a, e.key, true});
    else if (count >= 1 && next == 0)
      trs.push_back({e.a, e.key, false});
    count = next;
  }
  if (trs.empty()) {
    res.swallowed = true;  // covered spans present and coverage never drops
    return res;
  }
  const std::size_t m = trs.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Transition& cur = trs[k];
    const Transition& nxt = trs[(k + 1) % m];
    double len = nxt.a - cur.a;
    if (k + 1 == m) len += kTwoPi;
    if (len <= tol_angle) throw DegenerateGeometry("sliver arc");
    AngSpan span{cur.a, len, cur.key, nxt.key};
    if (cur.to_covered)
      res.covered.push_back(span);
    else
      res.uncovered.push_back(span);
  }
  return res;
}

// Line integral of (x dy - y dx) along a CCW arc of the circle of `c`.
double arc_integral(const Disk& c, double a0, double len, bool full) {
  if (full) return kTwoPi * c.r * c.r;
  const double a1 = a0 + len;
  return c.r * c.r * len + c.x * c.r * (std::sin(a1) - std::sin(a0)) -
         c.y * c.r * (std::cos(a1) - std::cos(a0));
}

std::vector<std::vector<int>> assemble_loops(const std::vector<Arc>& arcs) {
  std::unordered_map<std::uint64_t, int> by_start;
  by_start.reserve(arcs.size() * 2);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].full) continue;
    if (!by_start.emplace(arcs[i].v0, static_cast<int>(i)).second)
      throw DegenerateGeometry("duplicate boundary vertex");
  }
  std::vector<char> used(arcs.size(), 0);
  std::vector<std::vector<int>> loops;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].full) {
      loops.push_back({static_cast<int>(i)});
      used[i] = 1;
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (used[i]) continue;
    std::vector<int> loop;
    int cur = static_cast<int>(i);
    do {
      if (used[static_cast<std::size_t>(cur)])
        throw DegenerateGeometry("boundary walk revisited an arc");
      used[static_cast<std::size_t>(cur)] = 1;
      loop.push_back(cur);
      const auto it = by_start.find(arcs[static_cast<std::size_t>(cur)].v1);
      if (it == by_start.end()) throw DegenerateGeometry("open boundary chain");
      cur = it->second;
    } while (cur != static_cast<int>(i));
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Pieces of span set `spans` (disjoint spans of one circle) falling inside
// window span `win`; nullptr window keeps everything. Endpoint keys are
// inherited from whichever bound cuts; near-coincident cuts throw.
void clip_spans(const std::vector<AngSpan>& spans, const AngSpan* win, double tol_angle,
                std::vector<AngSpan>& out) {
  if (!win) {
    out.insert(out.end(), spans.begin(), spans.end());
    return;
  }
  const double w0 = win->a0;
  const double w1 = win->a0 + win->len;
  for (const AngSpan& s : spans) {
    for (int k = -1; k <= 1; ++k) {
      const double s0 = s.a0 + k * kTwoPi;
      const double s1 = s0 + s.len;
      const double lo = std::max(s0, w0);
      const double hi = std::min(s1, w1);
      if (hi - lo <= 0) continue;
      if (hi - lo <= tol_angle) throw DegenerateGeometry("sliver clipped arc");
      // The two candidate bounds nearly coinciding at a cut is a near triple
      // point: the surviving vertex identity would be ambiguous.
      if (std::abs(s0 - w0) <= tol_angle || std::abs(s1 - w1) <= tol_angle)
        throw DegenerateGeometry("near triple point");
      AngSpan piece;
      piece.a0 = lo;
      piece.len = hi - lo;
      piece.v0 = (lo == s0) ? s.v0 : win->v0;
      piece.v1 = (hi == s1) ? s.v1 : win->v1;
      out.push_back(piece);
    }
  }
}

struct DeltaWorkspace {
  std::vector<Disk> local;
  std::vector<int> local_pos;  // position in the caller's neighbor span
  std::vector<AngSpan> pair_spans;
  std::vector<Arc> region_arcs;
};

}  // namespace

CircleIntersections circle_intersections(const Disk& d1, const Disk& d2) {
  CircleIntersections out;
  const double d = germ_distance(d1, d2);
  const double tol = kGeomEps * std::min(d1.r, d2.r);
  if (d <= tol && std::abs(d1.r - d2.r) <= tol) {
    out.coincident = true;
    return out;
  }
  if (d > d1.r + d2.r + tol || d < std::abs(d1.r - d2.r) - tol) return out;
  const double ux = (d2.x - d1.x) / d;
  const double uy = (d2.y - d1.y) / d;
  const double a = (d * d + d1.r * d1.r - d2.r * d2.r) / (2.0 * d);
  const double h2 = d1.r * d1.r - a * a;
  if (std::abs(d - (d1.r + d2.r)) <= tol || std::abs(d - std::abs(d1.r - d2.r)) <= tol) {
    out.count = 1;
    out.p[0] = {d1.x + a * ux, d1.y + a * uy};
    return out;
  }
  const double h = std::sqrt(std::max(h2, 0.0));
  out.count = 2;
  out.p[0] = {d1.x + a * ux - h * uy, d1.y + a * uy + h * ux};
  out.p[1] = {d1.x + a * ux + h * uy, d1.y + a * uy - h * ux};
  return out;
}

ArcArrangement boundary_arcs(const Configuration& config) {
  ArcArrangement arr;
  const int n = config.size();
  if (n == 0) return arr;
  const double tol = kGeomEps * config.r_min_present();
  std::vector<int> nbr;
  std::vector<AngSpan> spans;
  for (int i = 0; i < n; ++i) {
    const Disk& di = config.disk(i);
    config.neighbors_within(di.center(), di.r + config.r_max_bound(), nbr);
    spans.clear();
    bool swallowed = false;
    for (int j : nbr) {
      if (j == i) continue;
      const PairCover pc = cover_of_circle(di, i, config.disk(j), j, tol);
      if (pc.kind == CoverKind::swallows) {
        swallowed = true;
        break;
      }
      if (pc.kind == CoverKind::partial) spans.push_back(pc.span);
    }
    if (swallowed) continue;
    const CoverResult cover = merge_cover(spans, tol / di.r);
    if (cover.swallowed) continue;
    if (cover.untouched) {
      arr.arcs.push_back({i, 0.0, kTwoPi, 0, 0, true});
      continue;
    }
    for (const AngSpan& s : cover.uncovered)
      arr.arcs.push_back({i, s.a0, s.a0 + s.len, s.v0, s.v1, false});
  }
  arr.loops = assemble_loops(arr.arcs);
  for (const Arc& a : arr.arcs) {
    if (a.full) continue;
    const Disk& d = config.disk(a.disk);
    arr.vertices.push_back(
        {a.v0, {d.x + d.r * std::cos(a.a0), d.y + d.r * std::sin(a.a0)}});
  }
  return arr;
}

long overlap_components(const Configuration& config, std::vector<int>& labels) {
  const int n = config.size();
  UnionFind uf(n);
  std::vector<int> nbr;
  for (int i = 0; i < n; ++i) {
    const Disk& di = config.disk(i);
    config.neighbors_within(di.center(), di.r + config.r_max_bound(), nbr);
    for (int j : nbr)
      if (j > i && disks_overlap(di, config.disk(j))) uf.unite(i, j);
  }
  return uf.compact_labels(labels);
}

Functionals functionals(const Configuration& config) {
  Functionals f;
  if (config.empty()) return f;
  const ArcArrangement arr = boundary_arcs(config);
  double integral = 0.0;
  for (const Arc& a : arr.arcs) {
    const Disk& d = config.disk(a.disk);
    integral += arc_integral(d, a.a0, a.a1 - a.a0, a.full);
    f.perimeter += d.r * a.length_angle();
  }
  f.area = 0.5 * integral;
  std::vector<int> labels;
  f.components = overlap_components(config, labels);
  const long loops = static_cast<long>(arr.loops.size());
  f.holes = loops - f.components;
  if (f.holes < 0) throw DegenerateGeometry("inconsistent loop count");
  f.euler = f.components - f.holes;
  return f;
}

LocalDelta add_disk_delta(const Disk& p, std::span<const Disk> neighbors, double tol) {
  thread_local DeltaWorkspace ws;
  ws.local.clear();
  ws.local_pos.clear();
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    if (disks_overlap(p, neighbors[k])) {
      ws.local.push_back(neighbors[k]);
      ws.local_pos.push_back(static_cast<int>(k));
    }
  }
  LocalDelta out;
  out.overlapping = ws.local_pos;

  // Working frame: index 0 is the new disk, 1..m its overlapping neighbors.
  const int m = static_cast<int>(ws.local.size());
  const double tol_p = tol / p.r;

  // Coverage of the new circle by the neighbors.
  ws.pair_spans.clear();
  bool swallowed_p = false;
  for (int k = 0; k < m; ++k) {
    const PairCover pc = cover_of_circle(p, 0, ws.local[static_cast<std::size_t>(k)], k + 1, tol);
    if (pc.kind == CoverKind::swallows) swallowed_p = true;
    if (pc.kind == CoverKind::partial) ws.pair_spans.push_back(pc.span);
  }
  CoverResult cover_p;
  if (swallowed_p)
    cover_p.swallowed = true;
  else
    cover_p = merge_cover(ws.pair_spans, tol_p);

  ws.region_arcs.clear();
  double new_integral = 0.0;
  double new_perimeter = 0.0;
  if (cover_p.swallowed) {
    // Whole new circle lies inside the union: it bounds the intersection region.
    ws.region_arcs.push_back({0, 0.0, kTwoPi, 0, 0, true});
  } else if (!cover_p.untouched) {
    for (const AngSpan& s : cover_p.uncovered) {
      new_integral += arc_integral(p, s.a0, s.len, false);
      new_perimeter += p.r * s.len;
    }
    for (const AngSpan& s : cover_p.covered)
      ws.region_arcs.push_back({0, s.a0, s.a0 + s.len, s.v0, s.v1, false});
  } else {
    new_integral = arc_integral(p, 0.0, kTwoPi, true);
    new_perimeter = kTwoPi * p.r;
  }

  // Existing boundary arcs falling inside the new disk.
  double lost_integral = 0.0;
  double lost_perimeter = 0.0;
  std::vector<AngSpan> spans;
  std::vector<AngSpan> clipped;
  for (int k = 0; k < m; ++k) {
    const Disk& di = ws.local[static_cast<std::size_t>(k)];
    const int self = k + 1;
    // Portion of circle k+1 inside the open new disk.
    const PairCover in_p = cover_of_circle(di, self, p, 0, tol);
    if (in_p.kind == CoverKind::none) continue;  // circle stays outside the new disk
    // Uncovered set of circle k+1 among the other neighbors.
    spans.clear();
    bool swallowed = false;
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      const PairCover pc =
          cover_of_circle(di, self, ws.local[static_cast<std::size_t>(j)], j + 1, tol);
      if (pc.kind == CoverKind::swallows) {
        swallowed = true;
        break;
      }
      if (pc.kind == CoverKind::partial) spans.push_back(pc.span);
    }
    if (swallowed) continue;
    const CoverResult cover = merge_cover(spans, tol / di.r);
    if (cover.swallowed) continue;
    clipped.clear();
    if (in_p.kind == CoverKind::swallows) {
      // Circle entirely inside the new disk.
      if (cover.untouched) {
        ws.region_arcs.push_back({self, 0.0, kTwoPi, 0, 0, true});
        lost_integral += arc_integral(di, 0.0, kTwoPi, true);
        lost_perimeter += kTwoPi * di.r;
        continue;
      }
      clip_spans(cover.uncovered, nullptr, tol / di.r, clipped);
    } else if (cover.untouched) {
      clipped.push_back(in_p.span);
    } else {
      clip_spans(cover.uncovered, &in_p.span, tol / di.r, clipped);
    }
    for (const AngSpan& s : clipped) {
      lost_integral += arc_integral(di, s.a0, s.len, false);
      lost_perimeter += di.r * s.len;
      ws.region_arcs.push_back({self, s.a0, s.a0 + s.len, s.v0, s.v1, false});
    }
  }

  out.d_area = 0.5 * (new_integral - lost_integral);
  if (out.d_area < 0 && out.d_area > -kGeomEps * p.r * p.r) out.d_area = 0.0;
  out.d_perimeter = new_perimeter - lost_perimeter;

  // Euler characteristic of (existing union) ∩ (closed new disk), loop by loop:
  // positively oriented loops bound pieces, negatively oriented ones holes.
  const auto loops = assemble_loops(ws.region_arcs);
  long chi = 0;
  for (const auto& loop : loops) {
    double signed_area = 0.0;
    for (int idx : loop) {
      const Arc& a = ws.region_arcs[static_cast<std::size_t>(idx)];
      const Disk& d = a.disk == 0 ? p : ws.local[static_cast<std::size_t>(a.disk - 1)];
      signed_area += arc_integral(d, a.a0, a.a1 - a.a0, a.full);
    }
    if (!std::isfinite(signed_area) || signed_area == 0.0)
      throw DegenerateGeometry("null region loop");
    chi += signed_area > 0 ? 1 : -1;
  }
  out.d_euler = 1 - chi;
  return out;
}

namespace {

// Neighbors of p gathered from the configuration in a canonical order, so
// that repeated evaluations are bitwise identical regardless of grid state.
void gather_sorted(const Disk& p, const Configuration& config, std::vector<Disk>& disks,
                   std::vector<int>& ids) {
  thread_local std::vector<int> raw;
  config.neighbors_within(p.center(), p.r + config.r_max_bound(), raw);
  ids = raw;
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const Disk& da = config.disk(a);
    const Disk& db = config.disk(b);
    if (da.x != db.x) return da.x < db.x;
    if (da.y != db.y) return da.y < db.y;
    if (da.r != db.r) return da.r < db.r;
    return a < b;
  });
  disks.clear();
  for (int id : ids) disks.push_back(config.disk(id));
}

}  // namespace

FunctionalDelta delta_functionals(const Disk& p, const Configuration& config) {
  thread_local std::vector<Disk> disks;
  thread_local std::vector<int> ids;
  gather_sorted(p, config, disks, ids);
  const double tol = kGeomEps * std::min(config.r_min_present(), p.r);
  const LocalDelta ld = add_disk_delta(p, disks, tol);

  FunctionalDelta out;
  out.d_area = ld.d_area;
  out.d_perimeter = ld.d_perimeter;
  out.d_euler = ld.d_euler;
  std::vector<int> labels;
  overlap_components(config, labels);
  std::vector<int> merged;
  for (int pos : ld.overlapping) merged.push_back(labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(pos)])]);
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  out.d_components = 1 - static_cast<long>(merged.size());
  out.d_holes = out.d_components - out.d_euler;
  return out;
}

double local_energy(const Disk& p, const Configuration& config, const QuermassWeights& w) {
  thread_local std::vector<Disk> disks;
  thread_local std::vector<int> ids;
  gather_sorted(p, config, disks, ids);
  const double tol = kGeomEps * std::min(config.r_min_present(), p.r);
  const LocalDelta ld = add_disk_delta(p, disks, tol);
  return w.theta1 * ld.d_area + w.theta2 * ld.d_perimeter + w.theta3 * static_cast<double>(ld.d_euler);
}

double energy_in(const Rect& region, const Configuration& config, const QuermassWeights& w) {
  const Rect outer = region.expanded(2.0 * config.r_max_bound());
  Configuration inside(outer, config.r_max_bound());
  Configuration ring(outer, config.r_max_bound());
  for (const Disk& d : config.disks()) {
    if (!outer.contains(d.center())) continue;
    inside.add(d);
    if (!region.contains(d.center())) ring.add(d);
  }
  const Functionals f_all = functionals(inside);
  const Functionals f_ring = functionals(ring);
  const auto energy = [&](const Functionals& f) {
    return w.theta1 * f.area + w.theta2 * f.perimeter + w.theta3 * static_cast<double>(f.euler);
  };
  return energy(f_all) - energy(f_ring);
}

}  // namespace quermass
