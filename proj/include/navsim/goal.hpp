#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "navsim/geometry.hpp"
#include "navsim/scene.hpp"

namespace navsim {

// Navigate to a point. Without an explicit point one is sampled in free space.
struct PointGoal {
  std::optional<Vec2> point;
  double success_radius = 0.5;
};

enum class InstanceSelect { any, random, closest };

// Navigate to an instance of an object category. Doors and windows resolve to
// openings, other categories to scene objects.
struct ObjectGoal {
  Category category = Category::door;
  InstanceSelect select = InstanceSelect::any;
};

struct RoomGoal {
  RoomClass room = RoomClass::kitchen;
};

using GoalSpec = std::variant<PointGoal, ObjectGoal, RoomGoal>;

std::string_view to_string(InstanceSelect s);
std::optional<InstanceSelect> parse_instance_select(std::string_view name);

// Short human-readable description, e.g. "object:door:closest".
std::string describe(const GoalSpec& goal);

struct Segment2 {
  Vec2 a;
  Vec2 b;
};

// Resolved goal: a union of shapes. Distances are measured to the closest
// point of any shape; points inside rectangles or polygons are at distance 0.
struct GoalRegion {
  enum class Kind { point, object, room, opening };

  Kind kind = Kind::point;
  std::vector<Vec2> points;
  std::vector<OrientedRect> rects;
  std::vector<std::vector<Vec2>> polygons;
  std::vector<Segment2> segments;
  std::vector<std::size_t> instances;  // indices of the chosen objects / rooms / openings

  Vec2 closest_point(Vec2 p) const;
  double distance(Vec2 p) const;
  bool empty() const { return points.empty() && rects.empty() && polygons.empty() && segments.empty(); }
};

}  // namespace navsim
