#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

#include "navsim/nav.hpp"
#include "navsim/rng.hpp"
#include "navsim/scene.hpp"

namespace navsim {

namespace {

struct Rect {
  double x0, z0, x1, z1;
  double w() const { return x1 - x0; }
  double d() const { return z1 - z0; }
  double area() const { return w() * d(); }
};

double snap(double v) { return std::round(v * 20.0) / 20.0; }

// Recursive subdivision: repeatedly split the largest splittable rectangle
// across its longer side.
std::optional<std::vector<Rect>> subdivide(Rng& rng, int n_rooms, const GenerationParams& p) {
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_rooms))));
  const int rows = (n_rooms + cols - 1) / cols;
  const double lo = p.min_room_edge + 0.5;
  const double hi = std::max(lo, std::min(p.max_room_edge - 1.5, 6.5));
  const double width = snap(cols * rng.uniform(lo, hi));
  const double depth = snap(rows * rng.uniform(lo, hi));
  std::vector<Rect> rects = {{0.0, 0.0, width, depth}};

  while (static_cast<int>(rects.size()) < n_rooms) {
    std::vector<std::size_t> order(rects.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rects[a].area() > rects[b].area(); });
    bool split = false;
    for (std::size_t idx : order) {
      const Rect r = rects[idx];
      const bool along_x = r.w() >= r.d();
      for (int axis_try = 0; axis_try < 2 && !split; ++axis_try) {
        const bool cut_x = axis_try == 0 ? along_x : !along_x;
        const double len = cut_x ? r.w() : r.d();
        if (len < 2.0 * p.min_room_edge) continue;
        const double at = snap(rng.uniform(p.min_room_edge, len - p.min_room_edge));
        if (at < p.min_room_edge - 1e-9 || len - at < p.min_room_edge - 1e-9) continue;
        Rect a = r;
        Rect b = r;
        if (cut_x) {
          a.x1 = b.x0 = r.x0 + at;
        } else {
          a.z1 = b.z0 = r.z0 + at;
        }
        rects[idx] = a;
        rects.push_back(b);
        split = true;
      }
      if (split) break;
    }
    if (!split) return std::nullopt;
  }
  for (const Rect& r : rects) {
    if (r.w() > p.max_room_edge + 1e-9 || r.d() > p.max_room_edge + 1e-9) return std::nullopt;
  }
  return rects;
}

struct WallInfo {
  Wall wall;
  std::vector<std::size_t> rooms;  // one (exterior) or two (shared)
};

// Splits all rectangle edges into maximal segments bordered by the same rooms.
std::vector<WallInfo> build_walls(const std::vector<Rect>& rects, const GenerationParams& p, const Material& mat) {
  struct Piece {
    double lo, hi;
    std::size_t room;
  };
  // key: (0 = constant z, 1 = constant x; coordinate)
  std::map<std::pair<int, double>, std::vector<Piece>> lines;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const Rect& r = rects[i];
    lines[{0, r.z0}].push_back({r.x0, r.x1, i});
    lines[{0, r.z1}].push_back({r.x0, r.x1, i});
    lines[{1, r.x0}].push_back({r.z0, r.z1, i});
    lines[{1, r.x1}].push_back({r.z0, r.z1, i});
  }
  std::vector<WallInfo> walls;
  for (const auto& [key, pieces] : lines) {
    std::vector<double> cuts;
    for (const Piece& pc : pieces) {
      cuts.push_back(pc.lo);
      cuts.push_back(pc.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::size_t> current_rooms;
    double start = 0.0;
    bool open = false;
    auto flush = [&](double end) {
      if (!open) return;
      WallInfo info;
      const double c = key.second;
      info.wall.a = key.first == 0 ? Vec2{start, c} : Vec2{c, start};
      info.wall.b = key.first == 0 ? Vec2{end, c} : Vec2{c, end};
      info.wall.thickness = p.wall_thickness;
      info.wall.height = p.wall_height;
      info.wall.material = mat;
      info.rooms = current_rooms;
      walls.push_back(std::move(info));
      open = false;
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      std::vector<std::size_t> covering;
      for (const Piece& pc : pieces) {
        if (pc.lo <= mid && mid <= pc.hi) covering.push_back(pc.room);
      }
      std::sort(covering.begin(), covering.end());
      if (open && covering != current_rooms) flush(cuts[k]);
      if (!covering.empty() && !open) {
        open = true;
        start = cuts[k];
        current_rooms = covering;
      }
    }
    flush(cuts.back());
  }
  for (std::size_t i = 0; i < walls.size(); ++i) walls[i].wall.id = "w" + std::to_string(i);
  return walls;
}

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

Opening place_opening(Rng& rng, const Wall& w, double width, double margin, double bottom, double top,
                      OpeningKind kind) {
  const double len = w.length();
  const double center = rng.uniform(margin + 0.5 * width, len - margin - 0.5 * width);
  return {w.id, (center - 0.5 * width) / len, (center + 0.5 * width) / len, bottom, top, kind};
}

struct FurnitureShape {
  Category category;
  double hx_lo, hx_hi, hz_lo, hz_hi, h_lo, h_hi, base_lo, base_hi;
};

constexpr std::array<FurnitureShape, 11> kShapes = {{
    {Category::chair, 0.20, 0.28, 0.20, 0.28, 0.80, 1.00, 0.0, 0.0},
    {Category::table, 0.35, 0.90, 0.35, 0.60, 0.70, 0.78, 0.0, 0.0},
    {Category::sofa, 0.70, 1.10, 0.38, 0.50, 0.75, 0.90, 0.0, 0.0},
    {Category::bed, 0.50, 0.95, 0.95, 1.10, 0.50, 0.65, 0.0, 0.0},
    {Category::shelf, 0.35, 0.70, 0.15, 0.25, 1.20, 2.00, 0.0, 0.0},
    {Category::lamp, 0.12, 0.20, 0.12, 0.20, 1.20, 1.70, 0.0, 0.0},
    {Category::toilet, 0.18, 0.22, 0.28, 0.35, 0.70, 0.80, 0.0, 0.0},
    {Category::sink, 0.25, 0.40, 0.20, 0.28, 0.80, 0.90, 0.0, 0.0},
    {Category::tv, 0.40, 0.70, 0.08, 0.15, 0.35, 0.60, 0.45, 0.70},
    {Category::plant, 0.12, 0.25, 0.12, 0.25, 0.40, 1.40, 0.0, 0.0},
    {Category::misc, 0.12, 0.40, 0.12, 0.40, 0.20, 1.00, 0.0, 0.0},
}};

const FurnitureShape& shape_of(Category c) {
  for (const auto& s : kShapes) {
    if (s.category == c) return s;
  }
  return kShapes.back();
}

std::vector<Category> furniture_pool(RoomClass c) {
  using C = Category;
  switch (c) {
    case RoomClass::kitchen: return {C::table, C::chair, C::chair, C::sink, C::shelf, C::misc, C::plant, C::lamp};
    case RoomClass::bedroom: return {C::bed, C::shelf, C::lamp, C::chair, C::tv, C::plant, C::misc, C::table};
    case RoomClass::living_room: return {C::sofa, C::table, C::chair, C::tv, C::lamp, C::plant, C::shelf, C::misc};
    case RoomClass::toilet: return {C::toilet, C::sink, C::misc, C::plant};
    case RoomClass::bathroom: return {C::toilet, C::sink, C::shelf, C::misc, C::plant};
    case RoomClass::dining_room: return {C::table, C::chair, C::chair, C::chair, C::shelf, C::lamp, C::plant};
    case RoomClass::office: return {C::table, C::chair, C::shelf, C::lamp, C::tv, C::misc, C::plant};
    case RoomClass::hallway: return {C::shelf, C::plant, C::lamp, C::misc};
    case RoomClass::miscellaneous: return {C::misc, C::shelf, C::chair, C::table, C::plant, C::lamp};
  }
  return {C::misc};
}

// Gap between two axis-aligned boxes given as (min, max); zero when overlapping.
double aabb_gap(const std::array<Vec2, 2>& a, const std::array<Vec2, 2>& b) {
  const double dx = std::max({0.0, b[0].x - a[1].x, a[0].x - b[1].x});
  const double dz = std::max({0.0, b[0].z - a[1].z, a[0].z - b[1].z});
  return std::hypot(dx, dz);
}

void furnish_room(Rng& rng, House& h, const Rect& room, RoomClass cls, const std::vector<Vec2>& door_points,
                  const GenerationParams& p) {
  const auto pool = furniture_pool(cls);
  const int target = rng.range(p.min_objects_per_room, p.max_objects_per_room);
  const double inset = 0.5 * p.wall_thickness + p.clearance;
  std::vector<std::array<Vec2, 2>> placed;
  for (int n = 0; n < target; ++n) {
    const FurnitureShape& shape = shape_of(pool[rng.below(pool.size())]);
    const double hx = rng.uniform(shape.hx_lo, shape.hx_hi);
    const double hz = rng.uniform(shape.hz_lo, shape.hz_hi);
    const double height = rng.uniform(shape.h_lo, shape.h_hi);
    const double base = rng.uniform(shape.base_lo, shape.base_hi);
    for (int attempt = 0; attempt < p.placement_attempts; ++attempt) {
      const int quarter = rng.range(0, 3);
      const double yaw = quarter * 0.5 * kPi;
      const double ex = quarter % 2 == 0 ? hx : hz;
      const double ez = quarter % 2 == 0 ? hz : hx;
      const double xlo = room.x0 + inset + ex;
      const double xhi = room.x1 - inset - ex;
      const double zlo = room.z0 + inset + ez;
      const double zhi = room.z1 - inset - ez;
      if (xlo > xhi || zlo > zhi) continue;
      const Vec2 c{rng.uniform(xlo, xhi), rng.uniform(zlo, zhi)};
      const std::array<Vec2, 2> box = {Vec2{c.x - ex, c.z - ez}, Vec2{c.x + ex, c.z + ez}};
      bool ok = true;
      for (const auto& other : placed) {
        if (aabb_gap(box, other) < p.clearance) {
          ok = false;
          break;
        }
      }
      for (const Vec2& d : door_points) {
        if (!ok) break;
        const double dx = std::max({0.0, box[0].x - d.x, d.x - box[1].x});
        const double dz = std::max({0.0, box[0].z - d.z, d.z - box[1].z});
        if (std::hypot(dx, dz) < p.door_keepout) ok = false;
      }
      if (!ok) continue;
      SceneObject obj;
      obj.id = "o" + std::to_string(h.objects.size());
      obj.category = shape.category;
      obj.footprint = {c, {hx, hz}, yaw};
      obj.base_height = base;
      obj.height = height;
      obj.material = palette_material(shape.category, static_cast<int>(rng.below(kPaletteSize)));
      h.objects.push_back(std::move(obj));
      placed.push_back(box);
      break;
    }
  }
}

RoomClass pick_room_class(Rng& rng, const Rect& r, std::size_t index) {
  const double aspect = std::max(r.w(), r.d()) / std::min(r.w(), r.d());
  if (aspect > 2.0) return RoomClass::hallway;
  if (index == 0) return RoomClass::living_room;
  static constexpr std::array<RoomClass, 8> kPool = {
      RoomClass::kitchen, RoomClass::bedroom,     RoomClass::bathroom, RoomClass::dining_room,
      RoomClass::office,  RoomClass::bedroom,     RoomClass::toilet,   RoomClass::miscellaneous,
  };
  return kPool[rng.below(kPool.size())];
}

// Door cells must be free and mutually reachable on the default navigation grid.
bool doors_connected(const House& h) {
  const OccupancyGrid grid = build_grid(h, 0.1, 0.1);
  const auto doors = door_segments(h);
  if (doors.empty()) return false;
  std::vector<Cell> cells;
  for (const auto& d : doors) {
    const Cell c = grid.geometry().cell_at(d.midpoint());
    if (!grid.free(c)) return false;
    cells.push_back(c);
  }
  const std::array<Cell, 1> src = {cells.front()};
  const DistanceField field = distance_field(grid, src);
  return std::all_of(cells.begin(), cells.end(), [&](const Cell& c) { return std::isfinite(field.at(c)); });
}

std::optional<House> try_generate(Rng& rng, std::uint64_t seed, int n_rooms, bool furnished,
                                  const GenerationParams& p) {
  const auto rects = subdivide(rng, n_rooms, p);
  if (!rects) return std::nullopt;

  House h;
  h.id = "gen-" + std::to_string(seed) + "-" + std::to_string(n_rooms) + (furnished ? "f" : "e");
  double max_x = 0.0;
  double max_z = 0.0;
  for (std::size_t i = 0; i < rects->size(); ++i) {
    const Rect& r = (*rects)[i];
    Room room;
    room.id = "r" + std::to_string(i);
    room.category = pick_room_class(rng, r, i);
    room.floor_polygon = rectangle_polygon({r.x0, r.z0}, {r.x1, r.z1});
    room.ceiling_height = p.wall_height;
    h.rooms.push_back(std::move(room));
    max_x = std::max(max_x, r.x1);
    max_z = std::max(max_z, r.z1);
  }
  h.bounds = {{-p.yard_margin, -p.yard_margin}, {max_x + p.yard_margin, max_z + p.yard_margin}};

  const Material wall_material = palette_material(Category::wall, static_cast<int>(rng.below(kPaletteSize)));
  auto walls = build_walls(*rects, p, wall_material);
  for (const auto& w : walls) h.walls.push_back(w.wall);

  const double door_margin = 0.3;
  const double min_door_wall = p.door_width + 2.0 * door_margin;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;  // room pair -> longest wall
  std::vector<std::size_t> exterior;
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto& rooms = walls[i].rooms;
    if (walls[i].wall.length() < min_door_wall) continue;
    if (rooms.size() == 2) {
      const auto key = std::make_pair(rooms[0], rooms[1]);
      auto it = shared.find(key);
      if (it == shared.end() || walls[it->second].wall.length() < walls[i].wall.length()) shared[key] = i;
    } else if (rooms.size() == 1) {
      exterior.push_back(i);
    }
  }
  if (exterior.empty()) return std::nullopt;

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> edges(shared.begin(), shared.end());
  for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[rng.below(i)]);
  DisjointSet sets(rects->size());
  std::vector<bool> has_door(walls.size(), false);
  std::size_t joined = 1;
  for (const auto& [pair, wall] : edges) {
    const bool tree = sets.unite(pair.first, pair.second);
    if (tree) ++joined;
    if (tree || rng.bernoulli(p.extra_door_probability)) {
      h.openings.push_back(place_opening(rng, walls[wall].wall, p.door_width, door_margin, 0.0, p.wall_height,
                                         OpeningKind::door));
      has_door[wall] = true;
    }
  }
  if (joined != rects->size()) return std::nullopt;

  const std::size_t front = exterior[rng.below(exterior.size())];
  h.openings.push_back(
      place_opening(rng, walls[front].wall, p.door_width, door_margin, 0.0, p.wall_height, OpeningKind::door));
  has_door[front] = true;

  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (walls[i].rooms.size() != 1 || has_door[i]) continue;
    const double len = walls[i].wall.length();
    if (len < 1.6 || !rng.bernoulli(p.window_probability)) continue;
    const double width = rng.uniform(0.8, std::min(1.6, len - 0.6));
    h.openings.push_back(place_opening(rng, walls[i].wall, width, 0.3, 0.9, 2.1, OpeningKind::window));
  }

  if (furnished) {
    const auto doors = door_segments(h);
    for (std::size_t i = 0; i < rects->size(); ++i) {
      std::vector<Vec2> door_points;
      for (const auto& d : doors) door_points.push_back(d.midpoint());
      furnish_room(rng, h, (*rects)[i], h.rooms[i].category, door_points, p);
    }
  }

  if (!validate_house(h).empty()) return std::nullopt;
  if (!doors_connected(h)) return std::nullopt;
  return h;
}

}  // namespace

House generate_house(std::uint64_t seed, int n_rooms, bool furnished, const GenerationParams& params) {
  if (n_rooms < 1) throw GenerationError("n_rooms must be at least 1");
  Rng rng(mix_seed(seed, 0x67656e));
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    if (auto h = try_generate(rng, seed, n_rooms, furnished, params)) return std::move(*h);
  }
  throw GenerationError("house generation failed for seed " + std::to_string(seed) + " with " +
                        std::to_string(n_rooms) + " rooms");
}

}  // namespace navsim
