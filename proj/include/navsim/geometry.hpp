#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace navsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Ground-plane vector. The world is right-handed with y up; the ground plane is x-z.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, z + o.z}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, z - o.z}; }
  constexpr Vec2 operator-() const { return {-x, -z}; }
  constexpr Vec2 operator*(double s) const { return {x * s, z * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, z / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; z += o.z; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; z -= o.z; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
inline double length(Vec2 v) { return std::hypot(v.x, v.z); }
inline Vec2 normalized(Vec2 v) {
  const double l = length(v);
  return l > 0.0 ? v / l : Vec2{};
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(Vec3 v) {
  const double l = length(v);
  return l > 0.0 ? v * (1.0 / l) : Vec3{};
}

// Yaw 0 faces +z; yaw grows counterclockwise seen from +y, so yaw pi/2 faces +x.
inline Vec2 heading(double yaw) { return {std::sin(yaw), std::cos(yaw)}; }
// The agent's left-hand direction for a given yaw.
inline Vec2 left_of(double yaw) { return {std::cos(yaw), -std::sin(yaw)}; }

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Rectangle in the ground plane rotated by `yaw` about +y.
///
/// Local +z maps to heading(yaw) and local +x to left_of(yaw). Half extents are
/// given in the local frame as (x, z).
struct OrientedRect {
  Vec2 center;
  Vec2 half_extents;
  double yaw = 0.0;

  Vec2 to_local(Vec2 p) const;
  Vec2 to_world(Vec2 local) const;
  std::array<Vec2, 4> corners() const;
  bool contains(Vec2 p) const;
  Vec2 closest_point(Vec2 p) const;
  double distance(Vec2 p) const;
  // Axis-aligned bounding box (min, max).
  std::array<Vec2, 2> aabb() const;

  bool operator==(const OrientedRect&) const = default;
};

// Oriented footprint extruded vertically over [y0, y1].
struct Box3 {
  OrientedRect footprint;
  double y0 = 0.0;
  double y1 = 0.0;
};

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p);
double distance_to_segment(Vec2 a, Vec2 b, Vec2 p);

// Polygon helpers. Vertex order is counterclockwise seen from +y, which is a
// positive signed area in the (z, x) plane.
double signed_area(std::span<const Vec2> poly);
bool is_simple_polygon(std::span<const Vec2> poly);
bool point_in_polygon(std::span<const Vec2> poly, Vec2 p);
Vec2 closest_point_on_polygon(std::span<const Vec2> poly, Vec2 p);
// Zero for points inside.
double distance_to_polygon(std::span<const Vec2> poly, Vec2 p);

// Axis-aligned rectangle in CCW (seen from +y) vertex order.
std::vector<Vec2> rectangle_polygon(Vec2 min, Vec2 max);

}  // namespace navsim
