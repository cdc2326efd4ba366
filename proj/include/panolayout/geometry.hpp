#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "panolayout/common.hpp"

namespace panolayout {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  double squared_norm() const { return x * x + y * y; }
  Vec2 normalized() const {
    double n = norm();
    if (n == 0.0) throw ValidationError("cannot normalize zero vector");
    return {x / n, y / n};
  }
  // 90 degree counterclockwise rotation.
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0.0) throw ValidationError("cannot normalize zero vector");
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec2 unit_from_degrees(double deg) {
  double r = deg_to_rad(deg);
  return {std::cos(r), std::sin(r)};
}

// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.squared_norm();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

// Signed polygon area (positive for counterclockwise orientation).
inline double polygon_signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    s += a.cross(b);
  }
  return 0.5 * s;
}

inline double polygon_area(const std::vector<Vec2>& poly) {
  return std::fabs(polygon_signed_area(poly));
}

// Even-odd crossing test.  Points exactly on an edge may land on either side;
// callers that care use explicit distance checks.
inline bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    bool crosses = (a.y > p.y) != (b.y > p.y);
    if (crosses) {
      double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

namespace detail {

inline int orientation_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = (b - a).cross(c - a);
  constexpr double kEps = 1e-12;
  if (v > kEps) return 1;
  if (v < -kEps) return -1;
  return 0;
}

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

}  // namespace detail

// True if segments [a,b] and [c,d] intersect (including touching endpoints).
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = detail::orientation_sign(a, b, c);
  int o2 = detail::orientation_sign(a, b, d);
  int o3 = detail::orientation_sign(c, d, a);
  int o4 = detail::orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && detail::on_segment(a, b, c)) return true;
  if (o2 == 0 && detail::on_segment(a, b, d)) return true;
  if (o3 == 0 && detail::on_segment(c, d, a)) return true;
  if (o4 == 0 && detail::on_segment(c, d, b)) return true;
  return false;
}

// True if the closed polygon has no self-intersections between non-adjacent
// edges and no zero-length edges.
inline bool polygon_is_simple(const std::vector<Vec2>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e0 = poly[(i + 1) % n] - poly[i];
    Vec2 e1 = poly[(i + 2) % n] - poly[(i + 1) % n];
    if (e0.norm() < 1e-12) return false;
    // Spike: consecutive edges folding straight back onto each other.
    if (std::fabs(e0.cross(e1)) < 1e-12 && e0.dot(e1) < 0.0) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share an endpoint by construction).
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

// Clips subject polygon by one half-plane: keeps points p with
// (b - a) x (p - a) >= 0, i.e. the left side of directed edge a->b.
inline std::vector<Vec2> clip_by_half_plane(const std::vector<Vec2>& subject,
                                            const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  std::size_t n = subject.size();
  if (n == 0) return out;
  Vec2 dir = b - a;
  auto side = [&](const Vec2& p) { return dir.cross(p - a); };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& cur = subject[i];
    const Vec2& nxt = subject[(i + 1) % n];
    double sc = side(cur);
    double sn = side(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
      double t = sc / (sc - sn);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

// Area of the intersection of a convex clip polygon (counterclockwise) with a
// subject convex polygon, via Sutherland-Hodgman clipping.
inline double convex_intersection_area(const std::vector<Vec2>& subject,
                                       const std::vector<Vec2>& clip_ccw) {
  std::vector<Vec2> poly = subject;
  std::size_t n = clip_ccw.size();
  for (std::size_t i = 0; i < n && !poly.empty(); ++i) {
    poly = clip_by_half_plane(poly, clip_ccw[i], clip_ccw[(i + 1) % n]);
  }
  if (poly.size() < 3) return 0.0;
  return polygon_area(poly);
}

// Axis-aligned or rotated rectangular footprint on the floor plane.
// `depth` extends along the facing direction (angle_deg), `width` across it.
struct OrientedRect {
  Vec2 center;
  double angle_deg = 0.0;
  double depth = 0.0;
  double width = 0.0;

  // Corners in counterclockwise order.
  std::array<Vec2, 4> corners() const {
    Vec2 f = unit_from_degrees(angle_deg);
    Vec2 s = f.perp();
    Vec2 hd = f * (0.5 * depth);
    Vec2 hw = s * (0.5 * width);
    return {center + hd + hw, center - hd + hw, center - hd - hw, center + hd - hw};
  }

  std::vector<Vec2> corner_list() const {
    auto c = corners();
    return {c[0], c[1], c[2], c[3]};
  }

  double area() const { return depth * width; }
};

// Overlap area of two rectangular footprints.
inline double rect_intersection_area(const OrientedRect& a, const OrientedRect& b) {
  return convex_intersection_area(a.corner_list(), b.corner_list());
}

// First intersection of ray origin + t * dir (t > 0) with segment [a, b].
// Returns the ray parameter t, or nullopt.
inline std::optional<double> ray_segment_intersection(const Vec2& origin, const Vec2& dir,
                                                      const Vec2& a, const Vec2& b) {
  Vec2 seg = b - a;
  double denom = dir.cross(seg);
  if (std::fabs(denom) < 1e-14) return std::nullopt;  // parallel
  Vec2 rel = a - origin;
  double t = rel.cross(seg) / denom;
  double s = rel.cross(dir) / denom;
  if (t <= 1e-12 || s < -1e-12 || s > 1.0 + 1e-12) return std::nullopt;
  return t;
}

struct RayHit {
  double t = 0.0;
  int segment_index = -1;
};

// Nearest forward intersection of a ray with a closed polygon boundary.
inline std::optional<RayHit> ray_polygon_first_hit(const Vec2& origin, const Vec2& dir,
                                                   const std::vector<Vec2>& poly) {
  std::optional<RayHit> best;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto t = ray_segment_intersection(origin, dir, poly[i], poly[(i + 1) % n]);
    if (t && (!best || *t < best->t)) best = RayHit{*t, static_cast<int>(i)};
  }
  return best;
}

// Area of polygon `subject` lying outside convex region `clip_ccw`.
inline double area_outside_convex(const std::vector<Vec2>& subject,
                                  const std::vector<Vec2>& clip_ccw) {
  double inside = convex_intersection_area(subject, clip_ccw);
  return std::max(0.0, polygon_area(subject) - inside);
}

// Solves the dense linear system A x = b by Gaussian elimination with partial
// pivoting.  A is row-major n x n.  Throws EstimationError when singular.
inline std::vector<double> solve_linear_system(std::vector<double> a,
                                               std::vector<double> b) {
  std::size_t n = b.size();
  if (a.size() != n * n) throw ValidationError("solve_linear_system: bad shape");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::fabs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-12) throw EstimationError("solve_linear_system: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    double d = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri * n + c] * x[c];
    x[ri] = s / a[ri * n + ri];
  }
  return x;
}

}  // namespace panolayout
