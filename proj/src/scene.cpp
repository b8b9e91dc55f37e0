#include "navsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace navsim {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "wall", "floor", "ceiling", "door", "window", "chair", "table", "sofa",
    "bed",  "shelf", "lamp",    "toilet", "sink", "tv",     "plant", "misc",
};

constexpr std::array<std::string_view, kRoomClassCount> kRoomClassNames = {
    "kitchen", "bedroom", "living_room", "toilet", "bathroom",
    "dining_room", "office", "hallway", "miscellaneous",
};

constexpr std::array<int, kCategoryCount> kBaseTone = {
    200, 150, 230, 120, 210, 110, 140, 90, 170, 100, 220, 235, 225, 40, 70, 130,
};

std::string format_violation(const std::vector<Violation>& v) {
  std::string out = "invalid house:";
  for (const auto& item : v) {
    out += " [" + item.code;
    if (!item.entity.empty()) out += " " + item.entity;
    out += ": " + item.message + "]";
  }
  return out;
}

struct WallSpan {
  double s0 = 0.0;
  double s1 = 0.0;
  std::vector<std::pair<double, double>> solid;  // y intervals
  bool door = false;                             // span lies inside a door opening
};

// Splits a wall along its length at every opening boundary. Each span records
// the vertical intervals that remain solid.
std::vector<WallSpan> split_wall(const Wall& w, const std::vector<const Opening*>& openings) {
  const double len = w.length();
  const double ext = 0.5 * w.thickness;
  std::vector<double> cuts = {-ext, len + ext};
  for (const Opening* o : openings) {
    cuts.push_back(o->t0 * len);
    cuts.push_back(o->t1 * len);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<WallSpan> spans;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s0 = cuts[i];
    const double s1 = cuts[i + 1];
    if (s1 - s0 <= 1e-12) continue;
    const double mid = 0.5 * (s0 + s1);
    std::vector<std::pair<double, double>> holes;
    bool door = false;
    for (const Opening* o : openings) {
      if (o->t0 * len <= mid && mid <= o->t1 * len) {
        holes.emplace_back(o->bottom, o->top);
        door = door || o->kind == OpeningKind::door;
      }
    }
    std::sort(holes.begin(), holes.end());
    std::vector<std::pair<double, double>> solid;
    double y = 0.0;
    for (const auto& [lo, hi] : holes) {
      if (lo > y) solid.emplace_back(y, std::min(lo, w.height));
      y = std::max(y, hi);
    }
    if (y < w.height) solid.emplace_back(y, w.height);
    if (!spans.empty() && spans.back().solid == solid && spans.back().door == door &&
        spans.back().s1 == s0) {
      spans.back().s1 = s1;
    } else {
      spans.push_back({s0, s1, std::move(solid), door});
    }
  }
  return spans;
}

OrientedRect wall_span_rect(const Wall& w, double s0, double s1) {
  const Vec2 u = normalized(w.b - w.a);
  OrientedRect r;
  r.center = w.a + u * (0.5 * (s0 + s1));
  r.half_extents = {0.5 * w.thickness, 0.5 * (s1 - s0)};
  r.yaw = std::atan2(u.x, u.z);
  return r;
}

std::vector<std::vector<const Opening*>> openings_by_wall(const House& h) {
  std::vector<std::vector<const Opening*>> out(h.walls.size());
  for (const auto& o : h.openings) {
    for (std::size_t i = 0; i < h.walls.size(); ++i) {
      if (h.walls[i].id == o.wall_ref) {
        out[i].push_back(&o);
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::string_view to_string(RoomClass c) { return kRoomClassNames[static_cast<std::size_t>(c)]; }

std::optional<RoomClass> parse_room_class(std::string_view name) {
  for (std::size_t i = 0; i < kRoomClassNames.size(); ++i) {
    if (kRoomClassNames[i] == name) return static_cast<RoomClass>(i);
  }
  return std::nullopt;
}

int palette_albedo(Category c, int palette_id) {
  const int base = kBaseTone[static_cast<std::size_t>(c)];
  return std::clamp(base + (palette_id - 3) * 10, 0, 255);
}

Material palette_material(Category c, int palette_id) {
  return {palette_id, palette_albedo(c, palette_id)};
}

const Wall* House::find_wall(std::string_view wall_id) const {
  for (const auto& w : walls) {
    if (w.id == wall_id) return &w;
  }
  return nullptr;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(format_violation(violations)), violations_(std::move(violations)) {}

std::optional<std::size_t> room_at(const House& h, Vec2 p) {
  for (std::size_t i = 0; i < h.rooms.size(); ++i) {
    if (point_in_polygon(h.rooms[i].floor_polygon, p)) return i;
  }
  return std::nullopt;
}

std::vector<DoorSegment> door_segments(const House& h) {
  std::vector<DoorSegment> out;
  for (std::size_t i = 0; i < h.openings.size(); ++i) {
    const Opening& o = h.openings[i];
    if (o.kind != OpeningKind::door) continue;
    const Wall* w = h.find_wall(o.wall_ref);
    if (w == nullptr) continue;
    const Vec2 d = w->b - w->a;
    out.push_back({i, w->a + d * o.t0, w->a + d * o.t1});
  }
  return out;
}

std::vector<std::array<std::size_t, 2>> door_adjacency(const House& h) {
  std::vector<std::array<std::size_t, 2>> edges;
  for (const auto& door : door_segments(h)) {
    const Wall& w = *h.find_wall(h.openings[door.opening].wall_ref);
    const Vec2 u = normalized(w.b - w.a);
    const Vec2 n{u.z, -u.x};
    const double probe = 0.5 * w.thickness + 0.05;
    const auto a = room_at(h, door.midpoint() + n * probe);
    const auto b = room_at(h, door.midpoint() - n * probe);
    if (a && b && *a != *b) edges.push_back({std::min(*a, *b), std::max(*a, *b)});
  }
  return edges;
}

namespace {

std::vector<bool> reachable_rooms(const House& h) {
  std::vector<bool> seen(h.rooms.size(), false);
  if (h.rooms.empty()) return seen;
  std::vector<std::vector<std::size_t>> adj(h.rooms.size());
  for (const auto& [a, b] : door_adjacency(h)) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const std::size_t r = q.front();
    q.pop();
    for (std::size_t n : adj[r]) {
      if (!seen[n]) {
        seen[n] = true;
        q.push(n);
      }
    }
  }
  return seen;
}

}  // namespace

bool rooms_connected(const House& h) {
  const auto seen = reachable_rooms(h);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<Violation> validate_house(const House& h) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string entity, std::string message) {
    out.push_back({std::move(code), std::move(entity), std::move(message)});
  };
  auto check_material = [&](const Material& m, const std::string& id) {
    if (m.albedo < 0 || m.albedo > 255) add("bad_material", id, "albedo outside [0, 255]");
    if (m.palette_id < 0 || m.palette_id >= kPaletteSize) add("bad_material", id, "palette_id out of range");
  };

  if (!(h.bounds.min.x < h.bounds.max.x && h.bounds.min.z < h.bounds.max.z)) {
    add("degenerate_bounds", h.id, "bounds must have positive extent");
  }

  std::unordered_set<std::string> ids;
  for (const auto& r : h.rooms) {
    if (!ids.insert("room:" + r.id).second) add("duplicate_id", r.id, "room id repeated");
    if (!is_simple_polygon(r.floor_polygon)) {
      add("non_simple_polygon", r.id, "floor polygon is not simple");
    } else if (signed_area(r.floor_polygon) <= 0.0) {
      add("polygon_orientation", r.id, "floor polygon must be counterclockwise with positive area");
    }
    if (!(r.ceiling_height > 0.0)) add("bad_room", r.id, "ceiling height must be positive");
  }
  for (const auto& w : h.walls) {
    if (!ids.insert("wall:" + w.id).second) add("duplicate_id", w.id, "wall id repeated");
    if (!(w.length() > 0.0)) add("degenerate_wall", w.id, "wall has zero length");
    if (!(w.thickness > 0.0) || !(w.height > 0.0)) add("bad_wall", w.id, "thickness and height must be positive");
    check_material(w.material, w.id);
  }
  for (std::size_t i = 0; i < h.openings.size(); ++i) {
    const Opening& o = h.openings[i];
    const std::string label = "opening#" + std::to_string(i);
    const Wall* w = h.find_wall(o.wall_ref);
    if (w == nullptr) {
      add("dangling_wall_ref", o.wall_ref, label + " references missing wall '" + o.wall_ref + "'");
      continue;
    }
    if (!(0.0 <= o.t0 && o.t0 < o.t1 && o.t1 <= 1.0)) add("bad_opening", label, "span must satisfy 0 <= t0 < t1 <= 1");
    if (!(o.bottom < o.top && o.top <= w->height)) add("bad_opening", label, "need bottom < top <= wall height");
    if (o.kind == OpeningKind::door && o.bottom != 0.0) add("bad_opening", label, "doors start at the floor");
  }
  for (const auto& obj : h.objects) {
    if (!ids.insert("object:" + obj.id).second) add("duplicate_id", obj.id, "object id repeated");
    if (!(obj.footprint.half_extents.x > 0.0 && obj.footprint.half_extents.z > 0.0)) {
      add("bad_object", obj.id, "half extents must be positive");
    }
    if (!(obj.height > 0.0)) add("bad_object", obj.id, "height must be positive");
    check_material(obj.material, obj.id);
    for (const Vec2& c : obj.footprint.corners()) {
      if (!h.bounds.contains(c)) {
        add("object_out_of_bounds", obj.id, "footprint leaves the house bounds");
        break;
      }
    }
  }

  const bool structurally_ok = std::none_of(out.begin(), out.end(), [](const Violation& v) {
    return v.code == "non_simple_polygon" || v.code == "dangling_wall_ref" || v.code == "degenerate_wall";
  });
  if (structurally_ok && h.rooms.size() > 1) {
    const auto seen = reachable_rooms(h);
    std::string unreachable;
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) unreachable += (unreachable.empty() ? "" : ",") + h.rooms[i].id;
    }
    if (!unreachable.empty()) {
      add("rooms_disconnected", unreachable, "rooms not reachable through doors from " + h.rooms[0].id);
    }
  }
  return out;
}

std::vector<SolidPiece> solid_pieces(const House& h) {
  std::vector<SolidPiece> out;
  const auto by_wall = openings_by_wall(h);
  for (std::size_t i = 0; i < h.walls.size(); ++i) {
    const Wall& w = h.walls[i];
    if (!(w.length() > 0.0)) continue;
    for (const auto& span : split_wall(w, by_wall[i])) {
      const OrientedRect rect = wall_span_rect(w, span.s0, span.s1);
      for (const auto& [y0, y1] : span.solid) {
        out.push_back({Box3{rect, y0, y1}, Category::wall, true, i, w.material.albedo});
      }
    }
  }
  for (std::size_t i = 0; i < h.objects.size(); ++i) {
    const SceneObject& o = h.objects[i];
    out.push_back({Box3{o.footprint, o.base_height, o.top()}, o.category, false, i, o.material.albedo});
  }
  return out;
}

std::vector<OrientedRect> boundary_slabs(const Bounds& b) {
  constexpr double t = 1.0;
  auto slab = [](Vec2 lo, Vec2 hi) {
    return OrientedRect{(lo + hi) * 0.5, (hi - lo) * 0.5, 0.0};
  };
  return {
      slab({b.min.x - t, b.min.z - t}, {b.min.x, b.max.z + t}),
      slab({b.max.x, b.min.z - t}, {b.max.x + t, b.max.z + t}),
      slab({b.min.x, b.min.z - t}, {b.max.x, b.min.z}),
      slab({b.min.x, b.max.z}, {b.max.x, b.max.z + t}),
  };
}

std::vector<OrientedRect> navigation_obstacles(const House& h) {
  std::vector<OrientedRect> out;
  const auto by_wall = openings_by_wall(h);
  for (std::size_t i = 0; i < h.walls.size(); ++i) {
    const Wall& w = h.walls[i];
    if (!(w.length() > 0.0)) continue;
    std::vector<const Opening*> doors;
    for (const Opening* o : by_wall[i]) {
      if (o->kind == OpeningKind::door) doors.push_back(o);
    }
    for (const auto& span : split_wall(w, doors)) {
      if (!span.door) out.push_back(wall_span_rect(w, span.s0, span.s1));
    }
  }
  for (const auto& o : h.objects) out.push_back(o.footprint);
  for (const auto& s : boundary_slabs(h.bounds)) out.push_back(s);
  return out;
}

}  // namespace navsim
