#include <algorithm>
#include <cmath>
#include <cstring>

#include "navsim/sensors.hpp"

namespace navsim {

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {"color",    "depth",    "normal",      "semantic",
                                                        "instance", "contact", "measurements"};

}  // namespace

std::string_view to_string(SensorKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<SensorKind> parse_sensor_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<SensorKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Encoding e) { return e == Encoding::byte ? "byte" : "float"; }

std::optional<Encoding> parse_encoding(std::string_view name) {
  if (name == "byte") return Encoding::byte;
  if (name == "float") return Encoding::float32;
  return std::nullopt;
}

void SensorSpec::validate() const {
  auto fail = [&](const std::string& what) { throw ConfigError("sensor '" + name + "': " + what); };
  if (name.empty()) fail("name must not be empty");
  if (!is_camera(kind)) return;
  if (width < 1 || height < 1) fail("resolution must be at least 1x1");
  if (!(fov > 0.0 && fov < kPi)) fail("fov must lie in (0, pi)");
  if (!(near >= 0.0 && near < far) || !std::isfinite(far)) fail("depth range needs 0 <= near < far");
  if (!(noise_stddev >= 0.0) || !std::isfinite(noise_stddev)) fail("noise_stddev must be non-negative");
  if (width > 4096 || height > 4096) fail("resolution above 4096 is not supported");
}

std::vector<SensorSpec> default_sensors() {
  SensorSpec color;
  color.name = "color";
  color.kind = SensorKind::color;
  SensorSpec depth;
  depth.name = "depth";
  depth.kind = SensorKind::depth;
  SensorSpec contact;
  contact.name = "contact";
  contact.kind = SensorKind::contact;
  SensorSpec meas;
  meas.name = "measurements";
  meas.kind = SensorKind::measurements;
  return {color, depth, contact, meas};
}

float CameraFrame::float_at(int x, int y, int c) const {
  float f = 0.0f;
  const std::size_t idx = (static_cast<std::size_t>(y) * width + x) * channels + c;
  std::memcpy(&f, buffer.data() + idx * sizeof(float), sizeof(float));
  return f;
}

MotionSample motion_between(const AgentState& prev, const AgentState& now, double prev_forward_speed, double dt) {
  MotionSample m;
  const Vec2 moved = now.position - prev.position;
  m.velocity[0] = dot(moved, heading(prev.yaw)) / dt;
  m.velocity[1] = wrap_angle(now.yaw - prev.yaw) / dt;
  m.acceleration = (m.velocity[0] - prev_forward_speed) / dt;
  return m;
}

Measurements measure(const AgentState& agent, Vec2 goal_point, double shortest_path, const MotionSample& motion,
                     int step, int max_steps) {
  Measurements m;
  m.velocity = motion.velocity;
  m.acceleration = motion.acceleration;
  const Vec2 to_goal = goal_point - agent.position;
  m.dist_euclid = length(to_goal);
  m.dist_shortest_path = shortest_path;
  if (m.dist_euclid > 0.0) {
    const Vec2 u = to_goal / m.dist_euclid;
    m.direction = {dot(u, -left_of(agent.yaw)), dot(u, heading(agent.yaw))};
  }
  m.time_norm = max_steps > 0 ? std::clamp(static_cast<double>(step) / max_steps, 0.0, 1.0) : 0.0;
  return m;
}

}  // namespace navsim
