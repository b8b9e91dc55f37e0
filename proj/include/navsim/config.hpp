#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "navsim/task.hpp"

namespace navsim {

using Json = nlohmann::ordered_json;

// Where a session's house comes from: a scene file (relative to the server's
// scene directory) or the procedural generator.
struct SceneSource {
  std::optional<std::string> path;
  std::uint64_t seed = 0;
  int rooms = 1;
  bool furnished = false;
};

struct SessionConfig {
  SceneSource scene;
  VariationSpec variation;
  AgentConfig agent;
  std::vector<SensorSpec> sensors = default_sensors();
  EpisodeConfig episode;
};

// Strict parsers: unknown fields, wrong types and invalid values throw ConfigError.
// `default_seed` is used when the episode block does not give a seed.
SessionConfig parse_session_config(const Json& j, std::uint64_t default_seed = 0);
AgentConfig parse_agent(const Json& j);
SensorSpec parse_sensor(const Json& j, std::size_t index = 0);
GoalSpec parse_goal(const Json& j);
ControlPreset parse_preset_json(const Json& j);
std::uint64_t seed_value(const Json& v, const std::string& where);

Json to_json(const SessionConfig& c);
Json to_json(const AgentConfig& a);
Json to_json(const SensorSpec& s);
Json to_json(const GoalSpec& g);

}  // namespace navsim
