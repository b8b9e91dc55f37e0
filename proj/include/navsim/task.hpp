#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navsim/goal.hpp"
#include "navsim/nav.hpp"
#include "navsim/physics.hpp"
#include "navsim/scene.hpp"
#include "navsim/sensors.hpp"

namespace navsim {

struct EpisodeConfig {
  std::string house_id;
  std::uint64_t seed = 0;
  GoalSpec goal = PointGoal{};
  int max_steps = 500;
  int trials_per_scene = 10;
  double success_distance = 0.5;         // object and room goals
  double min_start_goal_distance = 0.0;  // shortest-path metres
  double grid_resolution = 0.1;

  void validate() const;
};

// Seed of trial k of an episode configuration.
std::uint64_t trial_seed(std::uint64_t base, int trial);

// Immutable per-scene data, shareable between simulations.
struct World {
  std::shared_ptr<const House> house;
  std::shared_ptr<const OccupancyGrid> grid;
  std::shared_ptr<const RenderWorld> render;
  std::shared_ptr<const CollisionWorld> collision;

  static World build(House house, const AgentConfig& agent, double grid_resolution = 0.1);
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  double progress = 0.0;  // d_{t-1} - d_t, the distance part of the reward
  bool done = false;
  bool success = false;
  int step = 0;
};

struct EpisodeResult {
  bool success = false;
  int steps_taken = 0;
  double speed = 0.0;
};

// Fraction of the time budget left at success, 0 on failure.
double episode_speed(bool success, int steps_taken, int max_steps);

struct Metrics {
  double success_rate = 0.0;  // percent
  double mean_speed = 0.0;    // percent
  std::size_t episodes = 0;
};

// Throws Error on an empty list.
Metrics aggregate(std::span<const EpisodeResult> results);

// One line of an episode log.
struct EpisodeRecord {
  std::string scene;
  std::uint64_t seed = 0;
  std::string goal;
  bool success = false;
  int steps = 0;
  double speed = 0.0;

  EpisodeResult result() const { return {success, steps, speed}; }
};

std::string to_json_line(const EpisodeRecord& r);
EpisodeRecord parse_episode_record(std::string_view line);
std::vector<EpisodeRecord> read_episode_records(const std::filesystem::path& path);

// One agent running episodes in one world.
class Simulation {
 public:
  Simulation(World world, AgentConfig agent, std::vector<SensorSpec> sensors, EpisodeConfig episode);

  // Starts a new episode. `seed` overrides the configured episode seed.
  Observation reset(std::optional<std::uint64_t> seed = std::nullopt);
  // Throws EpisodeError before the first reset and after done.
  StepResult step(ControlCommand cmd);

  // Moves the agent without advancing the clock. The caller keeps the pose
  // collision free; the episode must be active.
  void place_agent(const AgentState& state);

  Observation observe() const;
  // Observation as if the agent were at `state`, with the current clock and goal.
  Observation observe_at(const AgentState& state) const;

  const World& world() const { return world_; }
  const AgentConfig& agent_config() const { return agent_; }
  const std::vector<SensorSpec>& sensors() const { return sensors_; }
  const EpisodeConfig& episode_config() const { return episode_; }

  bool active() const { return started_ && !done_; }
  bool started() const { return started_; }
  bool done() const { return done_; }
  bool success() const { return success_; }
  int steps() const { return steps_; }
  std::uint64_t episode_seed() const { return seed_; }
  const AgentState& state() const { return state_; }
  const GoalRegion& goal() const { return goal_; }
  const DistanceField& field() const { return field_; }
  double distance_to_goal() const { return goal_.distance(state_.position); }
  double success_threshold() const;
  EpisodeResult result() const;
  // One-hot goal class: 9 room classes for room goals, 16 categories for
  // object goals, empty for point goals.
  std::vector<int> goal_onehot() const;

 private:
  Observation observe_state(const AgentState& state, const MotionSample& motion, const ContactReading& contact) const;

  World world_;
  AgentConfig agent_;
  std::vector<SensorSpec> sensors_;
  EpisodeConfig episode_;

  bool started_ = false;
  bool done_ = false;
  bool success_ = false;
  int steps_ = 0;
  std::uint64_t seed_ = 0;
  AgentState state_;
  GoalRegion goal_;
  DistanceField field_;
  MotionSample motion_;
  ContactReading contact_;
};

}  // namespace navsim
