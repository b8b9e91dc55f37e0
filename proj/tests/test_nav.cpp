#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "navsim/nav.hpp"
#include "navsim/rng.hpp"
#include "oracles.hpp"

namespace navsim {
namespace {

const std::filesystem::path kFixtures = NAVSIM_FIXTURE_DIR;

House one_room() { return load_house(kFixtures / "one_room.house.json"); }

OccupancyGrid make_grid(int w, int h, std::vector<std::uint8_t> blocked, double res = 0.1) {
  GridGeometry geo;
  geo.resolution = res;
  geo.width = w;
  geo.height = h;
  return OccupancyGrid(geo, std::move(blocked));
}

// Distance to the fixture's blocking geometry from axis-aligned boxes written
// out by hand: walls extended by half their thickness at both ends, the door
// span [1.6, 2.5] removed from w0, and the outside of the bounds.
double fixture_clearance(Vec2 p) {
  const double t = 0.05;
  double d = std::min({p.x + 1.0, 5.0 - p.x, p.z + 1.0, 5.0 - p.z});
  d = std::min(d, oracle::box_distance(-t, -t, 1.6, t, p.x, p.z));
  d = std::min(d, oracle::box_distance(2.5, -t, 4 + t, t, p.x, p.z));
  d = std::min(d, oracle::box_distance(4 - t, -t, 4 + t, 4 + t, p.x, p.z));
  d = std::min(d, oracle::box_distance(-t, 4 - t, 4 + t, 4 + t, p.x, p.z));
  d = std::min(d, oracle::box_distance(-t, -t, t, 4 + t, p.x, p.z));
  return d;
}

TEST(Grid, OneRoomMatchesDiscOracle) {
  for (const double radius : {0.1, 0.12, 0.23}) {
    const OccupancyGrid g = build_grid(one_room(), radius, 0.1);
    ASSERT_EQ(g.width(), 60);
    ASSERT_EQ(g.height(), 60);
    int ties = 0;
    for (int j = 0; j < g.height(); ++j) {
      for (int i = 0; i < g.width(); ++i) {
        const double d = fixture_clearance(g.geometry().center({i, j}));
        if (std::abs(d - radius) < 1e-9) {
          ++ties;  // exactly tangent; rounding decides
          continue;
        }
        EXPECT_EQ(g.blocked({i, j}), d < radius) << radius << " " << i << "," << j;
      }
    }
    // With radius 0.1 whole rows of centers sit exactly one radius from a wall face.
    if (radius != 0.1) EXPECT_EQ(ties, 0);
    EXPECT_TRUE(g.free(g.geometry().cell_at({2.0, 2.0})));
    EXPECT_TRUE(g.free(g.geometry().cell_at({2.05, 0.0})));
    EXPECT_FALSE(g.free(g.geometry().cell_at({1.0, 0.0})));
  }
}

TEST(Grid, ObjectFootprintBlocksItsCells) {
  House h = one_room();
  SceneObject obj;
  obj.id = "table";
  obj.category = Category::table;
  obj.footprint = {{2.0, 2.0}, {0.4, 0.3}, 0.5};
  obj.height = 0.7;
  h.objects.push_back(obj);
  const OccupancyGrid g = build_grid(h, 0.1, 0.1);
  EXPECT_TRUE(g.blocked(g.geometry().cell_at({2.0, 2.0})));
  EXPECT_TRUE(g.blocked(g.geometry().cell_at({2.1, 2.1})));
}

TEST(Grid, RejectsResolutionCoarserThanRadius) {
  EXPECT_THROW(build_grid(one_room(), 0.1, 0.2), ConfigError);
  EXPECT_THROW(build_grid(one_room(), 0.1, 0.0), ConfigError);
}

TEST(DistanceField, StartIsGoal) {
  const OccupancyGrid g = make_grid(5, 5, std::vector<std::uint8_t>(25, 0));
  const std::array<Cell, 1> goal = {Cell{2, 2}};
  const DistanceField f = distance_field(g, goal);
  EXPECT_EQ(f.at({2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(f.at({4, 2}), 0.2);
  EXPECT_DOUBLE_EQ(f.at({4, 4}), 0.2 * std::sqrt(2.0));
}

TEST(DistanceField, StraightCorridor) {
  // 51 cells long at 0.1 m: goal at the far end, 5.0 m axially.
  std::vector<std::uint8_t> blocked(53 * 3, 1);
  for (int i = 1; i <= 51; ++i) blocked[53 + i] = 0;
  const OccupancyGrid g = make_grid(53, 3, blocked);
  const std::array<Cell, 1> goal = {Cell{51, 1}};
  const DistanceField f = distance_field(g, goal);
  EXPECT_NEAR(f.at({1, 1}), 5.0, 0.1);
  const auto want = oracle::grid_dijkstra(blocked, 53, 3, {{51, 1}}, 0.1);
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_EQ(f.values()[k], want[k]);
  // Sampled between cell centers on the corridor axis the field stays within a cell of the Euclidean distance.
  const Vec2 goal_center = g.geometry().center({51, 1});
  for (double x = 0.15; x < 5.1; x += 0.37) {
    const Vec2 p{x, 0.15};
    EXPECT_NEAR(f.sample(p), length(goal_center - p), 0.1 + 1e-9);
  }
}

TEST(DistanceField, SealedRoomIsUnreachable) {
  // A closed ring of blocked cells around the goal.
  const int w = 12, h = 12;
  std::vector<std::uint8_t> blocked(w * h, 0);
  for (int k = 3; k <= 8; ++k) {
    blocked[3 * w + k] = blocked[8 * w + k] = blocked[k * w + 3] = blocked[k * w + 8] = 1;
  }
  const OccupancyGrid g = make_grid(w, h, blocked);
  const std::array<Cell, 1> goal = {Cell{5, 5}};
  const DistanceField f = distance_field(g, goal);
  EXPECT_TRUE(std::isfinite(f.at({6, 6})));
  EXPECT_EQ(f.at({0, 0}), kUnreachable);
  EXPECT_EQ(f.at({10, 5}), kUnreachable);
  EXPECT_EQ(f.sample({0.05, 0.05}), kUnreachable);
  const std::array<Cell, 1> out = {Cell{0, 0}};
  EXPECT_FALSE(is_navigable(g, {5, 5}, out));
  EXPECT_TRUE(is_navigable(g, {4, 4}, goal));
}

TEST(DistanceField, NoCornerCutting) {
  // Two blocked cells touching diagonally leave no diagonal passage between them.
  std::vector<std::uint8_t> blocked(4, 0);
  blocked[1] = blocked[2] = 1;  // (1,0) and (0,1)
  const OccupancyGrid g = make_grid(2, 2, blocked);
  const std::array<Cell, 1> goal = {Cell{0, 0}};
  EXPECT_EQ(distance_field(g, goal).at({1, 1}), kUnreachable);
}

TEST(DistanceField, MatchesOracleOnRandomGrids) {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = rng.range(1, 64);
    const int h = rng.range(1, 64);
    const double density = rng.uniform(0.0, 0.45);
    std::vector<std::uint8_t> blocked(static_cast<std::size_t>(w) * h);
    for (auto& b : blocked) b = rng.bernoulli(density) ? 1 : 0;
    std::vector<Cell> goals;
    std::vector<std::pair<int, int>> goal_pairs;
    const int n_goals = rng.range(1, 4);
    for (int k = 0; k < n_goals; ++k) {
      const Cell c{rng.range(0, w - 1), rng.range(0, h - 1)};
      goals.push_back(c);
      goal_pairs.emplace_back(c.i, c.j);
    }
    const double res = rng.bernoulli(0.5) ? 0.1 : 0.05;
    const OccupancyGrid g = make_grid(w, h, blocked, res);
    const DistanceField f = distance_field(g, goals);
    const auto want = oracle::grid_dijkstra(blocked, w, h, goal_pairs, res);
    ASSERT_EQ(f.values().size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) ASSERT_EQ(f.values()[k], want[k]) << "trial " << trial << " cell " << k;
  }
}

TEST(DistanceField, TriangleInequalityAndEuclideanBound) {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const House h = generate_house(seed, 3, true);
    const OccupancyGrid g = build_grid(h, 0.1, 0.1);
    const auto interior = interior_free_cells(g, h);
    ASSERT_FALSE(interior.empty());
    const std::array<Cell, 1> goal = {interior[interior.size() / 2]};
    const DistanceField f = distance_field(g, goal);
    const Vec2 gc = g.geometry().center(goal[0]);
    for (int j = 0; j < g.height(); ++j) {
      for (int i = 0; i < g.width(); ++i) {
        const Cell c{i, j};
        const double d = f.at(c);
        if (!std::isfinite(d)) continue;
        EXPECT_GE(d + 1e-9, length(g.geometry().center(c) - gc));
        for (const auto [di, dj] : {std::pair{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
          const Cell n{i + di, j + dj};
          if (!g.free(n) || !std::isfinite(f.at(n))) continue;
          const double step = (di != 0 && dj != 0) ? 0.1 * std::sqrt(2.0) : 0.1;
          if (di != 0 && dj != 0 && (!g.free({i + di, j}) || !g.free({i, j + dj}))) continue;
          EXPECT_LE(std::abs(d - f.at(n)), step + 1e-9);
        }
      }
    }
  }
}

TEST(Sampling, PointGoalInEmptyRoom) {
  const House h = one_room();
  const OccupancyGrid g = build_grid(h, 0.1, 0.1);
  const StartGoal sg = sample_start_goal(h, g, PointGoal{}, 5);
  EXPECT_TRUE(g.free(g.geometry().cell_at(sg.position)));
  ASSERT_EQ(sg.goal.points.size(), 1u);
  EXPECT_TRUE(std::isfinite(sg.field.sample(sg.position)));
  const StartGoal again = sample_start_goal(h, g, PointGoal{}, 5);
  EXPECT_EQ(again.position, sg.position);
  EXPECT_EQ(again.yaw, sg.yaw);
  EXPECT_EQ(again.goal.points[0], sg.goal.points[0]);
}

TEST(Sampling, MinimumPathDistanceHonoured) {
  const House h = generate_house(31, 3, false);
  const OccupancyGrid g = build_grid(h, 0.1, 0.1);
  StartGoalOptions opt;
  opt.min_path_distance = 2.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const StartGoal sg = sample_start_goal(h, g, PointGoal{}, s, opt);
    EXPECT_GE(sg.field.at(g.geometry().cell_at(sg.position)), 2.0);
  }
}

TEST(Sampling, MissingRoomClassIsGoalError) {
  const House h = one_room();  // a single bedroom
  const OccupancyGrid g = build_grid(h, 0.1, 0.1);
  EXPECT_THROW(sample_start_goal(h, g, RoomGoal{RoomClass::kitchen}, 1), GoalError);
  // Starts lie inside rooms and outside the goal, so a house that is all goal has none.
  EXPECT_THROW(sample_start_goal(h, g, RoomGoal{RoomClass::bedroom}, 1), GoalError);
}

TEST(Sampling, RoomGoalIsUnionOfMatchingRooms) {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    const House h = generate_house(seed, 5, false);
    const RoomClass cls = h.rooms[0].category;
    const OccupancyGrid g = build_grid(h, 0.1, 0.1);
    const StartGoal sg = sample_start_goal(h, g, RoomGoal{cls}, seed);
    std::vector<std::vector<Vec2>> want;
    for (const Room& r : h.rooms) {
      if (r.category == cls) want.push_back(r.floor_polygon);
    }
    EXPECT_EQ(sg.goal.polygons, want);
  }
}

TEST(Sampling, ClosestDoorMinimisesPathDistance) {
  int checked = 0;
  for (std::uint64_t seed = 70; seed < 90; ++seed) {
    const House h = generate_house(seed, 4, true);
    const OccupancyGrid g = build_grid(h, 0.1, 0.1);
    const GoalRegion all = goal_candidates(h, ObjectGoal{Category::door, InstanceSelect::any});
    if (all.segments.size() < 2) continue;
    const StartGoal sg = sample_start_goal(h, g, ObjectGoal{Category::door, InstanceSelect::closest}, seed);
    ASSERT_EQ(sg.goal.segments.size(), 1u);
    const Cell start = g.geometry().cell_at(sg.position);
    const std::vector<std::uint8_t> blocked(g.cells().begin(), g.cells().end());
    double best = oracle::kInf;
    double chosen = oracle::kInf;
    for (std::size_t k = 0; k < all.segments.size(); ++k) {
      GoalRegion one;
      one.kind = all.kind;
      one.segments = {all.segments[k]};
      std::vector<std::pair<int, int>> cells;
      for (const Cell& c : goal_cells(g, one, 0.1)) cells.emplace_back(c.i, c.j);
      const auto dist = oracle::grid_dijkstra(blocked, g.width(), g.height(), cells, 0.1);
      const double d = dist[g.geometry().index(start)];
      best = std::min(best, d);
      if (all.segments[k].a == sg.goal.segments[0].a && all.segments[k].b == sg.goal.segments[0].b) chosen = d;
    }
    EXPECT_EQ(chosen, best) << "seed " << seed;
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

}  // namespace
}  // namespace navsim
