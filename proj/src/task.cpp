#include "navsim/task.hpp"

#include <fstream>

#include <json.hpp>

#include "navsim/rng.hpp"

namespace navsim {

void EpisodeConfig::validate() const {
  if (max_steps < 1) throw ConfigError("episode max_steps must be at least 1");
  if (trials_per_scene < 1) throw ConfigError("episode trials_per_scene must be at least 1");
  if (!(success_distance > 0.0)) throw ConfigError("episode success_distance must be positive");
  if (!(min_start_goal_distance >= 0.0)) throw ConfigError("episode min_start_goal_distance must be non-negative");
  if (!(grid_resolution > 0.0)) throw ConfigError("episode grid_resolution must be positive");
  if (const auto* p = std::get_if<PointGoal>(&goal); p != nullptr && !(p->success_radius > 0.0)) {
    throw ConfigError("point goal success_radius must be positive");
  }
}

std::uint64_t trial_seed(std::uint64_t base, int trial) { return mix_seed(base, 0x747269616c00ULL + trial); }

World World::build(House house, const AgentConfig& agent, double grid_resolution) {
  World w;
  auto h = std::make_shared<const House>(std::move(house));
  w.grid = std::make_shared<const OccupancyGrid>(build_grid(*h, agent.radius, grid_resolution));
  w.render = std::make_shared<const RenderWorld>(*h);
  w.collision = std::make_shared<const CollisionWorld>(CollisionWorld::from_house(*h, agent));
  w.house = std::move(h);
  return w;
}

double episode_speed(bool success, int steps_taken, int max_steps) {
  if (!success) return 0.0;
  return 1.0 - static_cast<double>(steps_taken) / max_steps;
}

Metrics aggregate(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error("cannot aggregate an empty episode list");
  std::size_t successes = 0;
  double speed = 0.0;
  for (const EpisodeResult& r : results) {
    if (r.success) ++successes;
    speed += r.speed;
  }
  const double n = static_cast<double>(results.size());
  return {100.0 * static_cast<double>(successes) / n, 100.0 * speed / n, results.size()};
}

std::string to_json_line(const EpisodeRecord& r) {
  const nlohmann::ordered_json j = {
      {"scene", r.scene}, {"seed", r.seed},   {"goal", r.goal},
      {"success", r.success}, {"steps", r.steps}, {"speed", r.speed},
  };
  return j.dump();
}

EpisodeRecord parse_episode_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    EpisodeRecord r;
    r.scene = j.at("scene").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.goal = j.at("goal").get<std::string>();
    r.success = j.at("success").get<bool>();
    r.steps = j.at("steps").get<int>();
    r.speed = j.at("speed").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad episode record: ") + e.what());
  }
}

std::vector<EpisodeRecord> read_episode_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<EpisodeRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_episode_record(line));
  }
  return out;
}

Simulation::Simulation(World world, AgentConfig agent, std::vector<SensorSpec> sensors, EpisodeConfig episode)
    : world_(std::move(world)), agent_(agent), sensors_(std::move(sensors)), episode_(std::move(episode)) {
  agent_.validate();
  episode_.validate();
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    sensors_[i].validate();
    for (std::size_t k = 0; k < i; ++k) {
      if (sensors_[k].name == sensors_[i].name) throw ConfigError("duplicate sensor name '" + sensors_[i].name + "'");
    }
  }
}

double Simulation::success_threshold() const { return navsim::success_threshold(episode_.goal, episode_.success_distance); }

Observation Simulation::reset(std::optional<std::uint64_t> seed) {
  seed_ = seed.value_or(episode_.seed);
  StartGoalOptions options;
  options.agent_radius = agent_.radius;
  options.success_distance = episode_.success_distance;
  options.min_path_distance = episode_.min_start_goal_distance;
  StartGoal sg = sample_start_goal(*world_.house, *world_.grid, episode_.goal, seed_, options);

  state_ = AgentState{};
  state_.position = sg.position;
  state_.yaw = wrap_angle(sg.yaw);
  goal_ = std::move(sg.goal);
  field_ = std::move(sg.field);
  motion_ = {};
  contact_ = contact_reading(state_, agent_, *world_.collision);
  steps_ = 0;
  started_ = true;
  done_ = false;
  success_ = false;
  return observe();
}

StepResult Simulation::step(ControlCommand cmd) {
  if (!started_) throw EpisodeError("step before reset");
  if (done_) throw EpisodeError("step after the episode finished");

  const double d_prev = distance_to_goal();
  const AgentState prev = state_;
  const StepOutcome outcome = navsim::step(state_, cmd, agent_, *world_.collision);
  state_ = outcome.state;
  contact_ = outcome.contact;
  motion_ = motion_between(prev, state_, motion_.velocity[0], agent_.dt);
  ++steps_;

  const double d_now = distance_to_goal();
  StepResult r;
  r.progress = d_prev - d_now;
  r.reward = r.progress - 1.0 / episode_.max_steps;
  if (d_now <= success_threshold()) {
    success_ = true;
    done_ = true;
  } else if (steps_ >= episode_.max_steps) {
    done_ = true;
  }
  r.done = done_;
  r.success = success_;
  r.step = steps_;
  r.observation = observe();
  return r;
}

void Simulation::place_agent(const AgentState& state) {
  if (!active()) throw EpisodeError("place_agent needs an active episode");
  state_ = state;
  motion_ = {};
  contact_ = contact_reading(state_, agent_, *world_.collision);
}

EpisodeResult Simulation::result() const {
  return {success_, steps_, episode_speed(success_, steps_, episode_.max_steps)};
}

std::vector<int> Simulation::goal_onehot() const {
  if (const auto* room = std::get_if<RoomGoal>(&episode_.goal)) {
    std::vector<int> v(kRoomClassCount, 0);
    v[static_cast<std::size_t>(room->room)] = 1;
    return v;
  }
  if (const auto* obj = std::get_if<ObjectGoal>(&episode_.goal)) {
    std::vector<int> v(kCategoryCount, 0);
    v[static_cast<std::size_t>(obj->category)] = 1;
    return v;
  }
  return {};
}

Observation Simulation::observe() const { return observe_state(state_, motion_, contact_); }

Observation Simulation::observe_at(const AgentState& state) const {
  return observe_state(state, motion_, contact_reading(state, agent_, *world_.collision));
}

Observation Simulation::observe_state(const AgentState& state, const MotionSample& motion,
                                      const ContactReading& contact) const {
  Observation obs;
  obs.reserve(sensors_.size());

  // Cameras with identical geometry share one trace.
  struct Traced {
    const SensorSpec* spec;
    HitBuffer hits;
  };
  std::vector<Traced> traced;
  traced.reserve(sensors_.size());
  auto same_camera = [](const SensorSpec& a, const SensorSpec& b) {
    return a.offset == b.offset && a.yaw_offset == b.yaw_offset && a.pitch_offset == b.pitch_offset &&
           a.width == b.width && a.height == b.height && a.fov == b.fov && a.near == b.near && a.far == b.far;
  };

  const std::uint64_t step_seed = mix_seed(seed_, static_cast<std::uint64_t>(steps_));
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    const SensorSpec& spec = sensors_[i];
    ObservationEntry entry{spec.name, spec.kind, {}};
    if (is_camera(spec.kind)) {
      const HitBuffer* hits = nullptr;
      for (const Traced& t : traced) {
        if (same_camera(*t.spec, spec)) hits = &t.hits;
      }
      if (hits == nullptr) {
        traced.push_back({&spec, trace(*world_.render, camera_pose(state, agent_, spec), spec)});
        hits = &traced.back().hits;
      }
      entry.reading = encode(*hits, spec, mix_seed(step_seed, i));
    } else if (spec.kind == SensorKind::contact) {
      entry.reading = contact;
    } else {
      const Vec2 goal_point = goal_.closest_point(state.position);
      entry.reading = measure(state, goal_point, field_.sample(state.position), motion, steps_, episode_.max_steps);
    }
    obs.push_back(std::move(entry));
  }
  return obs;
}

}  // namespace navsim
