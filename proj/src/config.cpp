#include "navsim/config.hpp"

#include <cmath>
#include <set>

namespace navsim {

namespace {

// Key-checked view over a JSON object for strict config parsing.
class Fields {
 public:
  Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + " must be an object");
  }
  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  T get(const char* key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + " must be a number");
    return v.get<double>();
  }

  const Json& at(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where_ + " is missing '" + key + "'");
    return j_.at(key);
  }

  // Rejects keys that were never asked for.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(where_ + " has unknown field '" + key + "'");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

std::uint64_t seed_value(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

AgentConfig parse_agent(const Json& j) {
  Fields f(j, "agent");
  AgentConfig a;
  a.radius = f.number("radius", a.radius);
  a.height = f.number("height", a.height);
  a.eye_height = f.number("eye_height", a.eye_height);
  a.mass = f.number("mass", a.mass);
  a.linear_accel = f.number("linear_accel", a.linear_accel);
  a.angular_accel = f.number("angular_accel", a.angular_accel);
  a.max_linear_speed = f.number("max_linear_speed", a.max_linear_speed);
  a.max_angular_speed = f.number("max_angular_speed", a.max_angular_speed);
  a.friction = f.number("friction", a.friction);
  a.dt = f.number("dt", a.dt);
  a.discrete_step = f.number("discrete_step", a.discrete_step);
  a.discrete_turn = f.number("discrete_turn", a.discrete_turn);
  a.pitch_step = f.number("pitch_step", a.pitch_step);
  a.contact_height = f.number("contact_height", a.contact_height);
  if (f.has("preset")) a.preset = parse_preset_json(j.at("preset"));
  f.finish();
  a.validate();
  return a;
}

Json to_json(const AgentConfig& a) {
  return Json{
      {"radius", a.radius},
      {"height", a.height},
      {"eye_height", a.eye_height},
      {"mass", a.mass},
      {"linear_accel", a.linear_accel},
      {"angular_accel", a.angular_accel},
      {"max_linear_speed", a.max_linear_speed},
      {"max_angular_speed", a.max_angular_speed},
      {"friction", a.friction},
      {"preset", to_string(a.preset)},
      {"dt", a.dt},
      {"discrete_step", a.discrete_step},
      {"discrete_turn", a.discrete_turn},
      {"pitch_step", a.pitch_step},
      {"contact_height", a.contact_height},
  };
}

SensorSpec parse_sensor(const Json& j, std::size_t index) {
  Fields f(j, "sensors[" + std::to_string(index) + "]");
  SensorSpec s;
  s.name = f.get<std::string>("name", "");
  const auto kind = parse_sensor_kind(f.get<std::string>("kind", ""));
  if (!kind) throw ConfigError("sensor '" + s.name + "' has an unknown kind");
  s.kind = *kind;
  if (f.has("offset")) {
    const auto v = f.get<std::vector<double>>("offset", {});
    if (v.size() != 3) throw ConfigError("sensor '" + s.name + "' offset needs 3 numbers");
    s.offset = {v[0], v[1], v[2]};
  }
  s.yaw_offset = f.number("yaw_offset", s.yaw_offset);
  s.pitch_offset = f.number("pitch_offset", s.pitch_offset);
  if (f.has("resolution")) {
    const auto v = f.get<std::vector<int>>("resolution", {});
    if (v.size() != 2) throw ConfigError("sensor '" + s.name + "' resolution needs [width, height]");
    s.width = v[0];
    s.height = v[1];
  }
  s.fov = f.number("fov", s.fov);
  if (f.has("depth_range")) {
    const auto v = f.get<std::vector<double>>("depth_range", {});
    if (v.size() != 2) throw ConfigError("sensor '" + s.name + "' depth_range needs [near, far]");
    s.near = v[0];
    s.far = v[1];
  }
  if (f.has("encoding")) {
    const auto e = parse_encoding(f.get<std::string>("encoding", ""));
    if (!e) throw ConfigError("sensor '" + s.name + "' has an unknown encoding");
    s.encoding = *e;
  }
  s.noise_stddev = f.number("noise_stddev", s.noise_stddev);
  f.finish();
  s.validate();
  return s;
}

Json to_json(const SensorSpec& s) {
  return Json{
      {"name", s.name},
      {"kind", to_string(s.kind)},
      {"offset", {s.offset.x, s.offset.y, s.offset.z}},
      {"yaw_offset", s.yaw_offset},
      {"pitch_offset", s.pitch_offset},
      {"resolution", {s.width, s.height}},
      {"fov", s.fov},
      {"depth_range", {s.near, s.far}},
      {"encoding", to_string(s.encoding)},
      {"noise_stddev", s.noise_stddev},
  };
}

ControlPreset parse_preset_json(const Json& j) {
  if (!j.is_string()) throw ConfigError("agent.preset must be a string");
  const auto p = parse_preset(j.get<std::string>());
  if (!p) throw ConfigError("unknown agent preset '" + j.get<std::string>() + "'");
  return *p;
}

GoalSpec parse_goal(const Json& j) {
  Fields f(j, "goal");
  const auto type = f.get<std::string>("type", "point");
  GoalSpec goal;
  if (type == "point") {
    PointGoal g;
    if (f.has("point")) {
      const auto v = f.get<std::vector<double>>("point", {});
      if (v.size() != 2) throw ConfigError("goal.point needs [x, z]");
      g.point = Vec2{v[0], v[1]};
    }
    g.success_radius = f.number("success_radius", g.success_radius);
    if (!(g.success_radius > 0.0)) throw ConfigError("goal.success_radius must be positive");
    goal = g;
  } else if (type == "object") {
    ObjectGoal g;
    const auto cat = parse_category(f.get<std::string>("category", ""));
    if (!cat) throw ConfigError("goal.category is not in the category vocabulary");
    g.category = *cat;
    const auto sel = parse_instance_select(f.get<std::string>("select", "any"));
    if (!sel) throw ConfigError("goal.select must be any, random or closest");
    g.select = *sel;
    goal = g;
  } else if (type == "room") {
    RoomGoal g;
    const auto room = parse_room_class(f.get<std::string>("room", ""));
    if (!room) throw ConfigError("goal.room is not a room class");
    g.room = *room;
    goal = g;
  } else {
    throw ConfigError("goal.type must be point, object or room");
  }
  f.finish();
  return goal;
}

Json to_json(const GoalSpec& g) {
  if (const auto* p = std::get_if<PointGoal>(&g)) {
    Json j{{"type", "point"}};
    if (p->point) j["point"] = {p->point->x, p->point->z};
    j["success_radius"] = p->success_radius;
    return j;
  }
  if (const auto* o = std::get_if<ObjectGoal>(&g)) {
    return Json{{"type", "object"}, {"category", to_string(o->category)}, {"select", to_string(o->select)}};
  }
  return Json{{"type", "room"}, {"room", to_string(std::get<RoomGoal>(g).room)}};
}

SessionConfig parse_session_config(const Json& j, std::uint64_t default_seed) {
  Fields top(j, "config");
  SessionConfig c;

  if (top.has("scene")) {
    Fields s(j.at("scene"), "scene");
    if (s.has("path")) c.scene.path = s.get<std::string>("path", "");
    if (s.has("generate")) {
      if (c.scene.path) throw ConfigError("scene takes either 'path' or 'generate'");
      Fields g(j.at("scene").at("generate"), "scene.generate");
      if (g.has("seed")) c.scene.seed = seed_value(j.at("scene").at("generate").at("seed"), "scene.generate.seed");
      c.scene.rooms = g.get<int>("rooms", 1);
      c.scene.furnished = g.get<bool>("furnished", false);
      g.finish();
      if (c.scene.rooms < 1 || c.scene.rooms > 64) throw ConfigError("scene.generate.rooms must lie in [1, 64]");
    }
    s.finish();
  }

  if (top.has("variation")) {
    Fields v(j.at("variation"), "variation");
    if (v.has("retexture_seed")) c.variation.retexture_seed = seed_value(j.at("variation").at("retexture_seed"), "variation.retexture_seed");
    for (const auto& name : v.get<std::vector<std::string>>("remove_categories", {})) {
      if (!parse_category(name)) throw ConfigError("unknown category '" + name + "' in remove_categories");
      c.variation.remove_categories.insert(name);
    }
    v.finish();
  }

  if (top.has("agent")) c.agent = parse_agent(j.at("agent"));

  if (top.has("sensors")) {
    const Json& list = j.at("sensors");
    if (!list.is_array() || list.empty()) throw ConfigError("sensors must be a non-empty array");
    c.sensors.clear();
    for (std::size_t i = 0; i < list.size(); ++i) c.sensors.push_back(parse_sensor(list[i], i));
    std::set<std::string> names;
    for (const auto& s : c.sensors) {
      if (!names.insert(s.name).second) throw ConfigError("duplicate sensor name '" + s.name + "'");
    }
  }

  c.episode.seed = default_seed;
  if (top.has("episode")) {
    const Json& ej = j.at("episode");
    Fields e(ej, "episode");
    if (e.has("seed")) c.episode.seed = seed_value(ej.at("seed"), "episode.seed");
    if (e.has("goal")) c.episode.goal = parse_goal(ej.at("goal"));
    c.episode.house_id = e.get<std::string>("house_id", "");
    c.episode.max_steps = e.get<int>("max_steps", c.episode.max_steps);
    c.episode.trials_per_scene = e.get<int>("trials_per_scene", c.episode.trials_per_scene);
    c.episode.success_distance = e.number("success_distance", c.episode.success_distance);
    c.episode.min_start_goal_distance = e.number("min_start_goal_distance", c.episode.min_start_goal_distance);
    c.episode.grid_resolution = e.number("grid_resolution", c.episode.grid_resolution);
    e.finish();
  }
  c.episode.validate();
  top.finish();
  return c;
}

Json to_json(const SessionConfig& c) {
  Json scene;
  if (c.scene.path) {
    scene["path"] = *c.scene.path;
  } else {
    scene["generate"] = {{"seed", c.scene.seed}, {"rooms", c.scene.rooms}, {"furnished", c.scene.furnished}};
  }
  Json variation = Json::object();
  if (c.variation.retexture_seed) variation["retexture_seed"] = *c.variation.retexture_seed;
  variation["remove_categories"] = c.variation.remove_categories;
  Json sensors = Json::array();
  for (const auto& s : c.sensors) sensors.push_back(to_json(s));
  Json episode{
      {"seed", c.episode.seed},
      {"goal", to_json(c.episode.goal)},
      {"house_id", c.episode.house_id},
      {"max_steps", c.episode.max_steps},
      {"trials_per_scene", c.episode.trials_per_scene},
      {"success_distance", c.episode.success_distance},
      {"min_start_goal_distance", c.episode.min_start_goal_distance},
      {"grid_resolution", c.episode.grid_resolution},
  };
  return Json{{"scene", scene},
              {"variation", variation},
              {"agent", to_json(c.agent)},
              {"sensors", sensors},
              {"episode", episode}};
}

}  // namespace navsim
