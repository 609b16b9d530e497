#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace quermass {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// A germ (planar point) with a radius mark: one grain of the germ-grain surface.
struct Disk {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  Vec2 center() const { return {x, y}; }
  bool operator==(const Disk&) const = default;
};

inline double germ_distance(const Disk& a, const Disk& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Strict-overlap convention shared by all modules: tangent disks do not touch.
inline bool disks_overlap(const Disk& a, const Disk& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, s = a.r + b.r;
  return dx * dx + dy * dy < s * s;
}

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
  Rect expanded(double pad) const { return {x0 - pad, y0 - pad, x1 + pad, y1 + pad}; }
  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Vec2 p) const {
    const double dx = std::max({x0 - p.x, 0.0, p.x - x1});
    const double dy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::hypot(dx, dy);
  }
  bool operator==(const Rect&) const = default;
};

/// Raised when an arc arrangement is within tolerance of a combinatorial
/// ambiguity (tangency, coincident circles, triple point, sliver arc).
/// Callers with continuous proposals may retry; analysis callers may jitter.
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResolutionTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quermass
