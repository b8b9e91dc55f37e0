#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "navsim/error.hpp"
#include "navsim/geometry.hpp"

namespace navsim {

// Flat category vocabulary shared by scene objects, architecture and the
// semantic sensor. Semantic label = enumerator value + 1; 0 means "nothing".
enum class Category : std::uint8_t {
  wall,
  floor,
  ceiling,
  door,
  window,
  chair,
  table,
  sofa,
  bed,
  shelf,
  lamp,
  toilet,
  sink,
  tv,
  plant,
  misc,
};
inline constexpr std::size_t kCategoryCount = 16;

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);
constexpr int semantic_label(Category c) { return static_cast<int>(c) + 1; }

enum class RoomClass : std::uint8_t {
  kitchen,
  bedroom,
  living_room,
  toilet,
  bathroom,
  dining_room,
  office,
  hallway,
  miscellaneous,
};
inline constexpr std::size_t kRoomClassCount = 9;

std::string_view to_string(RoomClass c);
std::optional<RoomClass> parse_room_class(std::string_view name);

inline constexpr int kPaletteSize = 8;

struct Material {
  int palette_id = 0;
  int albedo = 128;  // gray level, [0, 255]

  bool operator==(const Material&) const = default;
};

// Gray level of palette entry `palette_id` for a category. Entries of one
// category stay in a band around that category's base tone.
int palette_albedo(Category c, int palette_id);
Material palette_material(Category c, int palette_id);

struct SceneObject {
  std::string id;
  Category category = Category::misc;
  OrientedRect footprint;
  double base_height = 0.0;
  double height = 0.0;
  Material material;

  double top() const { return base_height + height; }
  bool operator==(const SceneObject&) const = default;
};

enum class OpeningKind : std::uint8_t { door, window };

struct Opening {
  std::string wall_ref;
  double t0 = 0.0;  // span along the wall, fractions in [0, 1]
  double t1 = 0.0;
  double bottom = 0.0;
  double top = 0.0;
  OpeningKind kind = OpeningKind::door;

  bool operator==(const Opening&) const = default;
};

struct Room {
  std::string id;
  RoomClass category = RoomClass::miscellaneous;
  std::vector<Vec2> floor_polygon;  // simple, counterclockwise seen from +y
  double ceiling_height = 2.8;

  bool operator==(const Room&) const = default;
};

struct Wall {
  std::string id;
  Vec2 a;
  Vec2 b;
  double thickness = 0.1;
  double height = 2.8;
  Material material;

  double length() const { return navsim::length(b - a); }
  bool operator==(const Wall&) const = default;
};

struct Bounds {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.z >= min.z && p.z <= max.z; }
  bool operator==(const Bounds&) const = default;
};

// Single-floor 2.5D house. Immutable once built; share it read-only.
struct House {
  std::string id;
  Bounds bounds;
  std::vector<Room> rooms;
  std::vector<Wall> walls;
  std::vector<Opening> openings;
  std::vector<SceneObject> objects;

  const Wall* find_wall(std::string_view id) const;
  bool operator==(const House&) const = default;
};

struct Violation {
  std::string code;    // e.g. "dangling_wall_ref", "object_out_of_bounds"
  std::string entity;  // id of the offending entity, empty for house-level checks
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

std::vector<Violation> validate_house(const House& h);

// Rooms connected through a door opening, as index pairs into House::rooms.
std::vector<std::array<std::size_t, 2>> door_adjacency(const House& h);
bool rooms_connected(const House& h);

// Index of the room whose floor polygon contains p, if any.
std::optional<std::size_t> room_at(const House& h, Vec2 p);

// Door opening on the wall center line.
struct DoorSegment {
  std::size_t opening;  // index into House::openings
  Vec2 a;
  Vec2 b;
  Vec2 midpoint() const { return (a + b) * 0.5; }
};
std::vector<DoorSegment> door_segments(const House& h);

// Solid geometry derived from the house. Walls are split around their openings
// and extended by half their thickness at both ends so corners close.
struct SolidPiece {
  Box3 box;
  Category category = Category::wall;
  bool is_wall = true;
  std::size_t source = 0;  // index into House::walls or House::objects
  int albedo = 128;
};
std::vector<SolidPiece> solid_pieces(const House& h);

// Ground footprints that block navigation: walls minus door spans, all object
// footprints, and slabs enclosing the house bounds.
std::vector<OrientedRect> navigation_obstacles(const House& h);
std::vector<OrientedRect> boundary_slabs(const Bounds& b);

// Scene file I/O (JSON document, see README for the schema).
House parse_house(std::string_view text);
std::string serialize_house(const House& h);
House load_house(const std::filesystem::path& path);
void save_house(const House& h, const std::filesystem::path& path);

struct GenerationParams {
  double min_room_edge = 3.0;
  double max_room_edge = 8.0;
  double wall_height = 2.8;
  double wall_thickness = 0.1;
  double door_width = 0.9;
  double extra_door_probability = 0.3;
  int min_objects_per_room = 4;
  int max_objects_per_room = 12;
  double clearance = 0.35;
  int placement_attempts = 200;
  double door_keepout = 1.0;
  double yard_margin = 1.0;
  double window_probability = 0.5;
  int max_retries = 64;
};

House generate_house(std::uint64_t seed, int n_rooms, bool furnished, const GenerationParams& params = {});

struct VariationSpec {
  std::optional<std::uint64_t> retexture_seed;
  std::set<std::string> remove_categories;
};

House apply_variation(const House& h, const VariationSpec& v);

}  // namespace navsim
