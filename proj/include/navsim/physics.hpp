#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "navsim/geometry.hpp"
#include "navsim/scene.hpp"

namespace navsim {

enum class ControlPreset { discrete, continuous };

std::string_view to_string(ControlPreset p);
std::optional<ControlPreset> parse_preset(std::string_view name);

struct AgentConfig {
  double radius = 0.10;
  double height = 1.09;
  double eye_height = 1.09;
  double mass = 1.0;
  double linear_accel = 20.0;
  double angular_accel = 4.0 * kPi;
  double max_linear_speed = 2.0;
  double max_angular_speed = 4.0 * kPi;
  double friction = 4.0;  // velocity decay rate, 1/s
  ControlPreset preset = ControlPreset::discrete;
  double dt = 0.1;

  // Calibrated per-command outcomes of the discrete preset.
  double discrete_step = 0.2;
  double discrete_turn = 0.4;
  double pitch_step = 0.2;
  double contact_height = 0.3;

  // Throws ConfigError when a magnitude is not positive or friction * dt > 1.
  void validate() const;
};

inline constexpr double kMaxPitch = kPi / 3.0;

struct AgentState {
  Vec2 position;
  double yaw = 0.0;
  double pitch = 0.0;
  Vec2 linear_velocity;
  double angular_velocity = 0.0;

  bool operator==(const AgentState&) const = default;
};

enum class CommandKind {
  step_forward,
  step_back,
  turn_left,
  turn_right,
  strafe_left,
  strafe_right,
  look_up,
  look_down,
  idle,
};

std::string_view to_string(CommandKind k);
std::optional<CommandKind> parse_command(std::string_view name);

struct ControlCommand {
  CommandKind kind = CommandKind::idle;
  double scale = 1.0;
};

// A vertical prism the agent cylinder collides with.
struct Collider {
  OrientedRect footprint;
  double y0 = 0.0;
  double y1 = 0.0;
};

class CollisionWorld {
 public:
  CollisionWorld() = default;
  explicit CollisionWorld(std::vector<Collider> colliders);

  // Solid pieces overlapping the agent's vertical extent plus the boundary slabs.
  static CollisionWorld from_house(const House& h, const AgentConfig& cfg);

  std::span<const Collider> colliders() const { return colliders_; }
  // Distance from p to the nearest collider footprint.
  double clearance(Vec2 p) const;

 private:
  std::vector<Collider> colliders_;
};

// Contact sensors in agent frame order: front, right, back, left.
enum ContactSide { kFront = 0, kRight = 1, kBack = 2, kLeft = 3 };

struct ContactReading {
  std::array<bool, 4> fired{};
  // Impulse magnitude (mass * removed normal speed) attributed to each sensor
  // during the last step. Zero for static readings.
  std::array<double, 4> impulse{};

  bool any() const { return fired[0] || fired[1] || fired[2] || fired[3]; }
};

ContactReading contact_reading(const AgentState& state, const AgentConfig& cfg, const CollisionWorld& world);

struct StepOutcome {
  AgentState state;
  ContactReading contact;
};

StepOutcome step(const AgentState& state, ControlCommand cmd, const AgentConfig& cfg, const CollisionWorld& world);

struct SweepResult {
  Vec2 position;
  std::vector<Vec2> normals;  // contact normals hit along the way, pointing away from obstacles
};

// Moves a disc along `delta`, stopping at contacts and sliding along them.
SweepResult sweep_disc(Vec2 start, Vec2 delta, double radius, const CollisionWorld& world);

}  // namespace navsim
