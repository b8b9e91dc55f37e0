#include "navsim/nav.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "navsim/rng.hpp"

namespace navsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Path length in units of the grid resolution, kept as integer step counts so
// that equal paths compare equal regardless of summation order.
struct StepCount {
  std::int32_t axial = -1;
  std::int32_t diagonal = 0;

  bool reached() const { return axial >= 0; }
  double cost() const { return axial + diagonal * kSqrt2; }
};

struct QueueEntry {
  double cost;
  std::size_t index;
  std::int32_t axial;
  std::int32_t diagonal;

  bool operator>(const QueueEntry& o) const {
    if (cost != o.cost) return cost > o.cost;
    return index > o.index;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Goal helpers

std::string_view to_string(InstanceSelect s) {
  switch (s) {
    case InstanceSelect::any: return "any";
    case InstanceSelect::random: return "random";
    case InstanceSelect::closest: return "closest";
  }
  return "any";
}

std::optional<InstanceSelect> parse_instance_select(std::string_view name) {
  if (name == "any") return InstanceSelect::any;
  if (name == "random") return InstanceSelect::random;
  if (name == "closest") return InstanceSelect::closest;
  return std::nullopt;
}

std::string describe(const GoalSpec& goal) {
  struct Visitor {
    std::string operator()(const PointGoal& g) const {
      if (!g.point) return "point";
      return "point:" + std::to_string(g.point->x) + "," + std::to_string(g.point->z);
    }
    std::string operator()(const ObjectGoal& g) const {
      return "object:" + std::string(to_string(g.category)) + ":" + std::string(to_string(g.select));
    }
    std::string operator()(const RoomGoal& g) const { return "room:" + std::string(to_string(g.room)); }
  };
  return std::visit(Visitor{}, goal);
}

Vec2 GoalRegion::closest_point(Vec2 p) const {
  Vec2 best = p;
  double best_d = kUnreachable;
  auto consider = [&](Vec2 q) {
    const double d = length(p - q);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  };
  for (const Vec2& q : points) consider(q);
  for (const auto& r : rects) consider(r.closest_point(p));
  for (const auto& poly : polygons) consider(closest_point_on_polygon(poly, p));
  for (const auto& s : segments) consider(closest_point_on_segment(s.a, s.b, p));
  return best;
}

double GoalRegion::distance(Vec2 p) const {
  if (empty()) return kUnreachable;
  return length(p - closest_point(p));
}

double success_threshold(const GoalSpec& goal, double success_distance) {
  if (const auto* p = std::get_if<PointGoal>(&goal)) return p->success_radius;
  return success_distance;
}

// ---------------------------------------------------------------------------
// Grid

Cell GridGeometry::cell_at(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
          static_cast<int>(std::floor((p.z - origin.z) / resolution))};
}

OccupancyGrid::OccupancyGrid(GridGeometry geometry, std::vector<std::uint8_t> blocked)
    : geometry_(geometry), blocked_(std::move(blocked)) {
  if (!(geometry_.resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  if (blocked_.size() != geometry_.size()) throw ConfigError("grid cell count does not match width * height");
}

OccupancyGrid build_grid(const House& h, double agent_radius, double resolution) {
  if (!(resolution > 0.0 && resolution <= agent_radius)) {
    throw ConfigError("grid resolution must lie in (0, agent_radius]");
  }
  const Vec2 extent = h.bounds.max - h.bounds.min;
  if (!(extent.x > 0.0 && extent.z > 0.0)) throw Error("degenerate house bounds in " + h.id);

  GridGeometry geo;
  geo.resolution = resolution;
  geo.origin = h.bounds.min;
  geo.width = static_cast<int>(std::ceil(extent.x / resolution - 1e-9));
  geo.height = static_cast<int>(std::ceil(extent.z / resolution - 1e-9));
  std::vector<std::uint8_t> blocked(geo.size(), 0);

  for (const OrientedRect& rect : navigation_obstacles(h)) {
    const auto [lo, hi] = rect.aabb();
    const int i0 = std::max(0, static_cast<int>(std::floor((lo.x - agent_radius - geo.origin.x) / resolution)));
    const int j0 = std::max(0, static_cast<int>(std::floor((lo.z - agent_radius - geo.origin.z) / resolution)));
    const int i1 = std::min(geo.width - 1, static_cast<int>(std::floor((hi.x + agent_radius - geo.origin.x) / resolution)));
    const int j1 = std::min(geo.height - 1, static_cast<int>(std::floor((hi.z + agent_radius - geo.origin.z) / resolution)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const std::size_t idx = geo.index({i, j});
        if (blocked[idx] != 0) continue;
        if (rect.distance(geo.center({i, j})) < agent_radius) blocked[idx] = 1;
      }
    }
  }
  return OccupancyGrid(geo, std::move(blocked));
}

// ---------------------------------------------------------------------------
// Distance field

DistanceField::DistanceField(GridGeometry geometry, std::vector<double> dist)
    : geometry_(geometry), dist_(std::move(dist)) {}

double DistanceField::sample(Vec2 p) const {
  const double u = (p.x - geometry_.origin.x) / geometry_.resolution - 0.5;
  const double v = (p.z - geometry_.origin.z) / geometry_.resolution - 0.5;
  const int i0 = static_cast<int>(std::floor(u));
  const int j0 = static_cast<int>(std::floor(v));
  const double fx = u - i0;
  const double fz = v - j0;
  const std::array<std::pair<Cell, double>, 4> corners = {{
      {{i0, j0}, (1.0 - fx) * (1.0 - fz)},
      {{i0 + 1, j0}, fx * (1.0 - fz)},
      {{i0, j0 + 1}, (1.0 - fx) * fz},
      {{i0 + 1, j0 + 1}, fx * fz},
  }};
  double weight = 0.0;
  double acc = 0.0;
  double nearest = kUnreachable;
  for (const auto& [c, w] : corners) {
    if (!geometry_.in_bounds(c)) continue;
    const double d = at(c);
    if (!std::isfinite(d)) continue;
    nearest = std::min(nearest, d);
    weight += w;
    acc += w * d;
  }
  if (weight > 0.0) return acc / weight;
  return nearest;
}

DistanceField distance_field(const OccupancyGrid& g, std::span<const Cell> goal_cells) {
  const GridGeometry& geo = g.geometry();
  std::vector<StepCount> best(geo.size());
  std::vector<std::uint8_t> is_goal(geo.size(), 0);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;

  for (const Cell& c : goal_cells) {
    if (!geo.in_bounds(c)) throw Error("goal cell outside the grid");
    const std::size_t idx = geo.index(c);
    is_goal[idx] = 1;
    best[idx] = {0, 0};
    if (!g.blocked(c)) open.push({0.0, idx, 0, 0});
  }

  static constexpr std::array<std::array<int, 2>, 8> kMoves = {{
      {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
  }};

  while (!open.empty()) {
    const QueueEntry e = open.top();
    open.pop();
    const StepCount cur = best[e.index];
    if (cur.axial != e.axial || cur.diagonal != e.diagonal) continue;
    const Cell c = geo.cell(e.index);
    for (const auto& [di, dj] : kMoves) {
      const Cell n{c.i + di, c.j + dj};
      if (!g.free(n)) continue;
      const bool diagonal = di != 0 && dj != 0;
      if (diagonal && (!g.free({c.i + di, c.j}) || !g.free({c.i, c.j + dj}))) continue;
      const StepCount cand{cur.axial + (diagonal ? 0 : 1), cur.diagonal + (diagonal ? 1 : 0)};
      const std::size_t ni = geo.index(n);
      if (!best[ni].reached() || cand.cost() < best[ni].cost()) {
        best[ni] = cand;
        open.push({cand.cost(), ni, cand.axial, cand.diagonal});
      }
    }
  }

  std::vector<double> dist(geo.size(), kUnreachable);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (best[i].reached()) dist[i] = geo.resolution * best[i].cost();
  }
  return DistanceField(geo, std::move(dist));
}

bool is_navigable(const OccupancyGrid& g, Cell start, std::span<const Cell> goal_cells) {
  if (!g.in_bounds(start)) throw Error("start cell outside the grid");
  return std::isfinite(distance_field(g, goal_cells).at(start));
}

std::vector<Cell> goal_cells(const OccupancyGrid& g, const GoalRegion& region, double agent_radius) {
  const GridGeometry& geo = g.geometry();
  std::vector<std::uint8_t> mark(geo.size(), 0);
  const double overlap = 0.5 * kSqrt2 * geo.resolution + 1e-12;

  auto scan = [&](Vec2 lo, Vec2 hi, double reach, auto&& dist) {
    const int i0 = std::max(0, static_cast<int>(std::floor((lo.x - reach - geo.origin.x) / geo.resolution)));
    const int j0 = std::max(0, static_cast<int>(std::floor((lo.z - reach - geo.origin.z) / geo.resolution)));
    const int i1 = std::min(geo.width - 1, static_cast<int>(std::floor((hi.x + reach - geo.origin.x) / geo.resolution)));
    const int j1 = std::min(geo.height - 1, static_cast<int>(std::floor((hi.z + reach - geo.origin.z) / geo.resolution)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        if (dist(geo.center({i, j})) <= reach) mark[geo.index({i, j})] = 1;
      }
    }
  };

  for (const Vec2& p : region.points) {
    scan(p, p, overlap, [&](Vec2 c) { return length(c - p); });
  }
  for (const auto& r : region.rects) {
    const auto [lo, hi] = r.aabb();
    scan(lo, hi, agent_radius + geo.resolution, [&](Vec2 c) { return r.distance(c); });
  }
  for (const auto& poly : region.polygons) {
    Vec2 lo = poly.front();
    Vec2 hi = poly.front();
    for (const Vec2& v : poly) {
      lo = {std::min(lo.x, v.x), std::min(lo.z, v.z)};
      hi = {std::max(hi.x, v.x), std::max(hi.z, v.z)};
    }
    scan(lo, hi, overlap, [&](Vec2 c) { return distance_to_polygon(poly, c); });
  }
  for (const auto& s : region.segments) {
    const Vec2 lo{std::min(s.a.x, s.b.x), std::min(s.a.z, s.b.z)};
    const Vec2 hi{std::max(s.a.x, s.b.x), std::max(s.a.z, s.b.z)};
    scan(lo, hi, overlap, [&](Vec2 c) { return distance_to_segment(s.a, s.b, c); });
  }

  std::vector<Cell> out;
  for (std::size_t i = 0; i < mark.size(); ++i) {
    if (mark[i] != 0) out.push_back(geo.cell(i));
  }
  return out;
}

std::vector<Cell> interior_free_cells(const OccupancyGrid& g, const House& h) {
  std::vector<Cell> out;
  const GridGeometry& geo = g.geometry();
  for (std::size_t idx = 0; idx < geo.size(); ++idx) {
    const Cell c = geo.cell(idx);
    if (g.blocked(c)) continue;
    if (room_at(h, geo.center(c))) out.push_back(c);
  }
  return out;
}

GoalRegion goal_candidates(const House& h, const GoalSpec& goal) {
  GoalRegion region;
  if (const auto* p = std::get_if<PointGoal>(&goal)) {
    region.kind = GoalRegion::Kind::point;
    if (p->point) region.points.push_back(*p->point);
  } else if (const auto* o = std::get_if<ObjectGoal>(&goal)) {
    if (o->category == Category::door || o->category == Category::window) {
      region.kind = GoalRegion::Kind::opening;
      const OpeningKind kind = o->category == Category::door ? OpeningKind::door : OpeningKind::window;
      for (std::size_t i = 0; i < h.openings.size(); ++i) {
        const Opening& op = h.openings[i];
        const Wall* w = h.find_wall(op.wall_ref);
        if (op.kind != kind || w == nullptr) continue;
        const Vec2 d = w->b - w->a;
        region.segments.push_back({w->a + d * op.t0, w->a + d * op.t1});
        region.instances.push_back(i);
      }
    } else {
      region.kind = GoalRegion::Kind::object;
      for (std::size_t i = 0; i < h.objects.size(); ++i) {
        if (h.objects[i].category != o->category) continue;
        region.rects.push_back(h.objects[i].footprint);
        region.instances.push_back(i);
      }
    }
  } else {
    const auto& r = std::get<RoomGoal>(goal);
    region.kind = GoalRegion::Kind::room;
    for (std::size_t i = 0; i < h.rooms.size(); ++i) {
      if (h.rooms[i].category != r.room) continue;
      region.polygons.push_back(h.rooms[i].floor_polygon);
      region.instances.push_back(i);
    }
  }
  return region;
}

namespace {

// Sub-region made of the k-th shape of a candidate region.
GoalRegion instance_region(const GoalRegion& all, std::size_t k) {
  GoalRegion r;
  r.kind = all.kind;
  r.instances = {all.instances[k]};
  if (!all.segments.empty()) r.segments = {all.segments[k]};
  if (!all.rects.empty()) r.rects = {all.rects[k]};
  if (!all.polygons.empty()) r.polygons = {all.polygons[k]};
  return r;
}

std::size_t instance_count(const GoalRegion& r) { return r.instances.size(); }

}  // namespace

StartGoal sample_start_goal(const House& h, const OccupancyGrid& g, const GoalSpec& goal, std::uint64_t seed,
                            const StartGoalOptions& options) {
  Rng rng(seed);
  const auto interior = interior_free_cells(g, h);
  if (interior.empty()) throw GoalError("house " + h.id + " has no free interior cells");
  const GridGeometry& geo = g.geometry();
  const double threshold = success_threshold(goal, options.success_distance);

  auto pick_start = [&]() { return interior[rng.below(interior.size())]; };
  auto finish = [&](Cell start, GoalRegion region, DistanceField field) {
    StartGoal out;
    out.position = geo.center(start);
    out.yaw = rng.uniform(0.0, kTwoPi);
    out.goal = std::move(region);
    out.field = std::move(field);
    return out;
  };
  auto acceptable = [&](Cell start, const GoalRegion& region, double path) {
    return std::isfinite(path) && path >= options.min_path_distance &&
           region.distance(geo.center(start)) > threshold;
  };

  GoalRegion candidates = goal_candidates(h, goal);
  const auto* point_goal = std::get_if<PointGoal>(&goal);

  if (point_goal != nullptr && !point_goal->point) {
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
      const Cell start = pick_start();
      const std::array<Cell, 1> src = {start};
      const DistanceField from_start = distance_field(g, src);
      std::vector<Cell> targets;
      for (const Cell& c : interior) {
        const double d = from_start.at(c);
        if (std::isfinite(d) && d >= options.min_path_distance &&
            length(geo.center(c) - geo.center(start)) > threshold) {
          targets.push_back(c);
        }
      }
      if (targets.empty()) continue;
      GoalRegion region;
      region.kind = GoalRegion::Kind::point;
      region.points = {geo.center(targets[rng.below(targets.size())])};
      const auto cells = goal_cells(g, region, options.agent_radius);
      DistanceField field = distance_field(g, cells);
      if (!acceptable(start, region, field.at(start))) continue;
      return finish(start, std::move(region), std::move(field));
    }
    throw GoalError("no navigable start/goal pair found in " + h.id);
  }

  if (candidates.empty()) throw GoalError("goal " + describe(goal) + " has no instance in house " + h.id);

  const auto* object_goal = std::get_if<ObjectGoal>(&goal);
  if (object_goal != nullptr && object_goal->select == InstanceSelect::closest) {
    const std::size_t n = instance_count(candidates);
    std::vector<std::vector<Cell>> cells(n);
    for (std::size_t k = 0; k < n; ++k) cells[k] = goal_cells(g, instance_region(candidates, k), options.agent_radius);
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
      const Cell start = pick_start();
      const std::array<Cell, 1> src = {start};
      const DistanceField from_start = distance_field(g, src);
      std::size_t best = n;
      double best_d = kUnreachable;
      for (std::size_t k = 0; k < n; ++k) {
        for (const Cell& c : cells[k]) {
          const double d = from_start.at(c);
          if (d < best_d) {
            best_d = d;
            best = k;
          }
        }
      }
      if (best == n) continue;
      GoalRegion region = instance_region(candidates, best);
      if (!acceptable(start, region, best_d)) continue;
      DistanceField field = distance_field(g, cells[best]);
      return finish(start, std::move(region), std::move(field));
    }
    throw GoalError("no navigable start for " + describe(goal) + " in " + h.id);
  }

  const bool pick_random = object_goal != nullptr && object_goal->select == InstanceSelect::random;
  std::map<std::size_t, DistanceField> fields;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::size_t k = pick_random ? rng.below(instance_count(candidates)) : 0;
    GoalRegion region = pick_random ? instance_region(candidates, k) : candidates;
    auto it = fields.find(k);
    if (it == fields.end()) {
      it = fields.emplace(k, distance_field(g, goal_cells(g, region, options.agent_radius))).first;
    }
    const Cell start = pick_start();
    if (!acceptable(start, region, it->second.at(start))) continue;
    return finish(start, std::move(region), it->second);
  }
  throw GoalError("no navigable start for " + describe(goal) + " in " + h.id);
}

}  // namespace navsim
