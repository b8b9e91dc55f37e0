#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "navsim/goal.hpp"
#include "navsim/scene.hpp"

namespace navsim {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct Cell {
  int i = 0;  // column, along +x
  int j = 0;  // row, along +z
  auto operator<=>(const Cell&) const = default;
};

struct GridGeometry {
  double resolution = 0.1;
  Vec2 origin;  // corner of cell (0, 0)
  int width = 0;
  int height = 0;

  bool in_bounds(Cell c) const { return c.i >= 0 && c.j >= 0 && c.i < width && c.j < height; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.j) * width + c.i; }
  Cell cell(std::size_t idx) const { return {static_cast<int>(idx % width), static_cast<int>(idx / width)}; }
  std::size_t size() const { return static_cast<std::size_t>(width) * height; }
  Vec2 center(Cell c) const { return {origin.x + (c.i + 0.5) * resolution, origin.z + (c.j + 0.5) * resolution}; }
  Cell cell_at(Vec2 p) const;
};

class OccupancyGrid {
 public:
  OccupancyGrid(GridGeometry geometry, std::vector<std::uint8_t> blocked);

  const GridGeometry& geometry() const { return geometry_; }
  double resolution() const { return geometry_.resolution; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  bool in_bounds(Cell c) const { return geometry_.in_bounds(c); }
  bool blocked(Cell c) const { return blocked_[geometry_.index(c)] != 0; }
  bool free(Cell c) const { return in_bounds(c) && !blocked(c); }
  std::span<const std::uint8_t> cells() const { return blocked_; }

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> blocked_;
};

// A cell is blocked iff a disc of agent_radius at its center intersects a
// navigation obstacle (walls minus doors, object footprints, the house boundary).
OccupancyGrid build_grid(const House& h, double agent_radius, double resolution = 0.1);

// Shortest-path distances over the 8-connected grid. Diagonal moves cost
// resolution * sqrt(2) and need both adjacent axial cells free.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(GridGeometry geometry, std::vector<double> dist);

  const GridGeometry& geometry() const { return geometry_; }
  double at(Cell c) const { return dist_[geometry_.index(c)]; }
  std::span<const double> values() const { return dist_; }
  // Bilinear interpolation between cell centers, ignoring unreachable corners.
  // kUnreachable when no surrounding cell is reachable.
  double sample(Vec2 p) const;

 private:
  GridGeometry geometry_;
  std::vector<double> dist_;
};

DistanceField distance_field(const OccupancyGrid& g, std::span<const Cell> goal_cells);

bool is_navigable(const OccupancyGrid& g, Cell start, std::span<const Cell> goal_cells);

// Cells counted as "at the goal" for a region. Cells overlapping points, rooms
// and openings qualify; object footprints are blocked, so for objects the ring
// of cells within agent_radius + resolution of the footprint qualifies.
std::vector<Cell> goal_cells(const OccupancyGrid& g, const GoalRegion& region, double agent_radius);

// Free cells whose centers lie inside some room polygon (the house interior).
std::vector<Cell> interior_free_cells(const OccupancyGrid& g, const House& h);

// Every instance the goal could refer to, without selection applied.
GoalRegion goal_candidates(const House& h, const GoalSpec& goal);

struct StartGoalOptions {
  double agent_radius = 0.1;
  double success_distance = 0.5;      // for object and room goals
  double min_path_distance = 0.0;     // minimum start-goal shortest-path distance
  int max_attempts = 200;
};

struct StartGoal {
  Vec2 position;
  double yaw = 0.0;
  GoalRegion goal;
  DistanceField field;  // distances to the goal region
};

double success_threshold(const GoalSpec& goal, double success_distance);

StartGoal sample_start_goal(const House& h, const OccupancyGrid& g, const GoalSpec& goal, std::uint64_t seed,
                            const StartGoalOptions& options = {});

}  // namespace navsim
