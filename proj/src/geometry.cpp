#include "navsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace navsim {

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

Vec2 OrientedRect::to_local(Vec2 p) const {
  const Vec2 d = p - center;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {d.x * c - d.z * s, d.x * s + d.z * c};
}

Vec2 OrientedRect::to_world(Vec2 l) const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {center.x + l.x * c + l.z * s, center.z - l.x * s + l.z * c};
}

std::array<Vec2, 4> OrientedRect::corners() const {
  const double hx = half_extents.x;
  const double hz = half_extents.z;
  return {to_world({-hx, -hz}), to_world({-hx, hz}), to_world({hx, hz}), to_world({hx, -hz})};
}

bool OrientedRect::contains(Vec2 p) const {
  const Vec2 l = to_local(p);
  return std::abs(l.x) <= half_extents.x && std::abs(l.z) <= half_extents.z;
}

Vec2 OrientedRect::closest_point(Vec2 p) const {
  const Vec2 l = to_local(p);
  return to_world({std::clamp(l.x, -half_extents.x, half_extents.x),
                   std::clamp(l.z, -half_extents.z, half_extents.z)});
}

double OrientedRect::distance(Vec2 p) const {
  const Vec2 l = to_local(p);
  const double dx = std::max(std::abs(l.x) - half_extents.x, 0.0);
  const double dz = std::max(std::abs(l.z) - half_extents.z, 0.0);
  return std::hypot(dx, dz);
}

std::array<Vec2, 2> OrientedRect::aabb() const {
  const double c = std::abs(std::cos(yaw));
  const double s = std::abs(std::sin(yaw));
  const double ex = half_extents.x * c + half_extents.z * s;
  const double ez = half_extents.x * s + half_extents.z * c;
  return {Vec2{center.x - ex, center.z - ez}, Vec2{center.x + ex, center.z + ez}};
}

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double distance_to_segment(Vec2 a, Vec2 b, Vec2 p) {
  return length(p - closest_point_on_segment(a, b, p));
}

double signed_area(std::span<const Vec2> poly) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly[i];
    const Vec2 q = poly[(i + 1) % poly.size()];
    acc += p.z * q.x - q.z * p.x;
  }
  return 0.5 * acc;
}

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.z - a.z) - (b.z - a.z) * (c.x - a.x);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.z, b.z) <= p.z &&
         p.z <= std::max(a.z, b.z);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  // Adjacent edges may only share their common vertex.
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const Vec2 c = poly[(i + 2) % n];
    if (orient(a, b, c) == 0.0 && dot(b - a, c - b) < 0.0) return false;
  }
  return true;
}

bool point_in_polygon(std::span<const Vec2> poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.z > p.z) != (b.z > p.z)) {
      const double x = (b.x - a.x) * (p.z - a.z) / (b.z - a.z) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Vec2 closest_point_on_polygon(std::span<const Vec2> poly, Vec2 p) {
  if (point_in_polygon(poly, p)) return p;
  Vec2 best = poly.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 q = closest_point_on_segment(poly[i], poly[(i + 1) % poly.size()], p);
    const double d = length(p - q);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

double distance_to_polygon(std::span<const Vec2> poly, Vec2 p) {
  return length(p - closest_point_on_polygon(poly, p));
}

std::vector<Vec2> rectangle_polygon(Vec2 min, Vec2 max) {
  return {{min.x, min.z}, {min.x, max.z}, {max.x, max.z}, {max.x, min.z}};
}

}  // namespace navsim
