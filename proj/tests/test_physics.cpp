#include <gtest/gtest.h>

#include <cmath>

#include "navsim/physics.hpp"
#include "navsim/rng.hpp"
#include "oracles.hpp"

namespace navsim {
namespace {

Collider wall_box(double x0, double z0, double x1, double z1, double y0 = 0.0, double y1 = 2.8) {
  return {OrientedRect{{(x0 + x1) / 2, (z0 + z1) / 2}, {(x1 - x0) / 2, (z1 - z0) / 2}, 0.0}, y0, y1};
}

const CollisionWorld kOpen{};

TEST(Physics, DiscreteStepForwardIsTwentyCentimetres) {
  AgentConfig cfg;
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    AgentState s;
    s.position = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    s.yaw = rng.uniform(-kPi, kPi);
    const StepOutcome out = step(s, {CommandKind::step_forward}, cfg, kOpen);
    const Vec2 d = out.state.position - s.position;
    EXPECT_NEAR(length(d), 0.2, 1e-9);
    EXPECT_NEAR(dot(normalized(d), heading(s.yaw)), 1.0, 1e-12);
    EXPECT_EQ(out.state.yaw, s.yaw);
    EXPECT_FALSE(out.contact.any());
  }
}

TEST(Physics, DiscreteTurnsAreZeroPointFourRadians) {
  AgentConfig cfg;
  AgentState s;
  const AgentState l = step(s, {CommandKind::turn_left}, cfg, kOpen).state;
  EXPECT_NEAR(l.yaw, 0.4, 1e-9);
  EXPECT_NEAR(l.yaw * 180.0 / kPi, 22.918, 1e-3);
  EXPECT_EQ(l.position, s.position);
  const AgentState r = step(s, {CommandKind::turn_right}, cfg, kOpen).state;
  EXPECT_NEAR(r.yaw, -0.4, 1e-9);
}

TEST(Physics, RepeatedDiscreteCommandsAccumulateExactly) {
  AgentConfig cfg;
  AgentState s;
  s.yaw = 0.3;
  AgentState cur = s;
  for (int n = 1; n <= 25; ++n) {
    cur = step(cur, {CommandKind::step_forward}, cfg, kOpen).state;
    EXPECT_NEAR(length(cur.position - s.position), 0.2 * n, 1e-9);
  }
  double turned = 0.0;
  cur = s;
  for (int n = 0; n < 16; ++n) {
    const AgentState next = step(cur, {CommandKind::turn_left}, cfg, kOpen).state;
    EXPECT_GT(next.yaw, -kPi);
    EXPECT_LE(next.yaw, kPi);
    turned += wrap_angle(next.yaw - cur.yaw);
    cur = next;
  }
  EXPECT_NEAR(turned, 6.4, 1e-9);
}

TEST(Physics, StrafeAndBackMoveInAgentFrame) {
  AgentConfig cfg;
  AgentState s;  // facing +z, left is +x
  EXPECT_NEAR(step(s, {CommandKind::strafe_left}, cfg, kOpen).state.position.x, 0.2, 1e-12);
  EXPECT_NEAR(step(s, {CommandKind::strafe_right}, cfg, kOpen).state.position.x, -0.2, 1e-12);
  EXPECT_NEAR(step(s, {CommandKind::step_back}, cfg, kOpen).state.position.z, -0.2, 1e-12);
  EXPECT_NEAR(step(s, {CommandKind::step_forward, 0.5}, cfg, kOpen).state.position.z, 0.1, 1e-12);
}

TEST(Physics, PitchClamped) {
  AgentConfig cfg;
  AgentState s;
  for (int k = 0; k < 20; ++k) s = step(s, {CommandKind::look_up}, cfg, kOpen).state;
  EXPECT_DOUBLE_EQ(s.pitch, kMaxPitch);
  for (int k = 0; k < 40; ++k) s = step(s, {CommandKind::look_down}, cfg, kOpen).state;
  EXPECT_DOUBLE_EQ(s.pitch, -kMaxPitch);
}

TEST(Physics, StopsInContactWithWallAhead) {
  AgentConfig cfg;
  // Wall face at z = 1.0; agent front surface at 0.95, 0.05 m short of it.
  const CollisionWorld world({wall_box(-3, 1.0, 3, 1.2)});
  AgentState s;
  s.position = {0.0, 0.85};
  const StepOutcome out = step(s, {CommandKind::step_forward}, cfg, world);
  const double gap = oracle::box_distance(-3, 1.0, 3, 1.2, out.state.position.x, out.state.position.z) - cfg.radius;
  EXPECT_NEAR(gap, 0.0, 1e-6);
  EXPECT_GE(gap, -1e-9);
  EXPECT_NEAR(out.state.position.x, 0.0, 1e-12);
  EXPECT_TRUE(out.contact.fired[kFront]);
  EXPECT_FALSE(out.contact.fired[kBack]);
  EXPECT_FALSE(out.contact.fired[kLeft]);
  EXPECT_FALSE(out.contact.fired[kRight]);
  EXPECT_GT(out.contact.impulse[kFront], 0.0);
}

TEST(Physics, SlidesAlongObliqueWall) {
  AgentConfig cfg;
  const CollisionWorld world({wall_box(-3, 1.0, 3, 1.2)});
  AgentState s;
  s.position = {0.0, 0.89};
  s.yaw = kPi / 4.0;  // heading (+x, +z) diagonally into the wall
  const StepOutcome out = step(s, {CommandKind::step_forward}, cfg, world);
  EXPECT_GT(out.state.position.x, 0.05);
  EXPECT_LE(out.state.position.z, 0.9 + 1e-6);
}

TEST(Physics, ContactReadings) {
  AgentConfig cfg;
  AgentState s;
  s.position = {0.0, 0.0};
  EXPECT_FALSE(contact_reading(s, cfg, kOpen).any());
  const CollisionWorld ahead({wall_box(-1, cfg.radius, 1, 0.5)});
  const ContactReading a = contact_reading(s, cfg, ahead);
  EXPECT_EQ(a.fired, (std::array<bool, 4>{true, false, false, false}));
  // Inner corner: wall ahead and wall on the left (+x).
  const CollisionWorld corner({wall_box(-1, cfg.radius, 1, 0.5), wall_box(cfg.radius, -1, 0.5, 1)});
  const ContactReading c = contact_reading(s, cfg, corner);
  EXPECT_EQ(c.fired, (std::array<bool, 4>{true, false, false, true}));
  // Facing +x the same corner reads front and right.
  s.yaw = kPi / 2.0;
  const ContactReading t = contact_reading(s, cfg, corner);
  EXPECT_EQ(t.fired, (std::array<bool, 4>{true, true, false, false}));
}

TEST(Physics, LowObstacleBlocksWithoutContact) {
  AgentConfig cfg;
  const CollisionWorld world({wall_box(-1, 0.3, 1, 0.6, 0.0, 0.2)});
  AgentState s;
  s.position = {0.0, 0.15};
  const StepOutcome out = step(s, {CommandKind::step_forward}, cfg, world);
  EXPECT_NEAR(out.state.position.z, 0.2, 1e-6);
  EXPECT_FALSE(out.contact.fired[kFront]);
}

TEST(Physics, ContinuousIdleDecays) {
  AgentConfig cfg;
  cfg.preset = ControlPreset::continuous;
  AgentState s;
  s.linear_velocity = {0.3, 1.2};
  s.angular_velocity = 2.0;
  double speed = length(s.linear_velocity);
  double energy = 0.5 * cfg.mass * speed * speed;
  for (int k = 0; k < 30; ++k) {
    s = step(s, {CommandKind::idle}, cfg, kOpen).state;
    const double v = length(s.linear_velocity);
    EXPECT_LT(v, speed);
    const double e = 0.5 * cfg.mass * v * v;
    EXPECT_LE(e, energy);
    speed = v;
    energy = e;
  }
  EXPECT_LT(std::abs(s.angular_velocity), 2.0);
}

TEST(Physics, ContinuousAccelerationAndClamps) {
  AgentConfig cfg;
  cfg.preset = ControlPreset::continuous;
  AgentState s;
  const AgentState one = step(s, {CommandKind::step_forward}, cfg, kOpen).state;
  EXPECT_NEAR(one.linear_velocity.z, cfg.linear_accel * cfg.dt, 1e-12);
  EXPECT_NEAR(one.position.z, cfg.linear_accel * cfg.dt * cfg.dt, 1e-12);
  Rng rng(8);
  const CommandKind kinds[] = {CommandKind::step_forward, CommandKind::step_back,   CommandKind::turn_left,
                               CommandKind::turn_right,   CommandKind::strafe_left, CommandKind::strafe_right,
                               CommandKind::idle};
  for (int k = 0; k < 5000; ++k) {
    s = step(s, {kinds[rng.below(7)], rng.uniform(0.0, 3.0)}, cfg, kOpen).state;
    EXPECT_LE(length(s.linear_velocity), cfg.max_linear_speed + 1e-12);
    EXPECT_LE(std::abs(s.angular_velocity), cfg.max_angular_speed + 1e-12);
  }
}

TEST(Physics, ContinuousContactRemovesNormalVelocity) {
  AgentConfig cfg;
  cfg.preset = ControlPreset::continuous;
  const CollisionWorld world({wall_box(-3, 1.0, 3, 1.2)});
  AgentState s;
  s.position = {0.0, 0.85};
  s.linear_velocity = {0.5, 2.0};
  const StepOutcome out = step(s, {CommandKind::idle}, cfg, world);
  EXPECT_LE(out.state.linear_velocity.z, 1e-12);
  EXPECT_GT(out.state.linear_velocity.x, 0.0);
}

TEST(Physics, NonPenetrationAndDeterminism) {
  AgentConfig cfg;
  Rng layout(77);
  std::vector<Collider> boxes;
  struct Aabb {
    double x0, z0, x1, z1;
  };
  std::vector<Aabb> raw;
  for (int k = 0; k < 25; ++k) {
    const double x = layout.uniform(-4, 4), z = layout.uniform(-4, 4);
    const double w = layout.uniform(0.05, 0.8), d = layout.uniform(0.05, 0.8);
    if (std::abs(x) < w + 0.3 && std::abs(z) < d + 0.3) continue;  // keep the start free
    raw.push_back({x - w, z - d, x + w, z + d});
    boxes.push_back(wall_box(x - w, z - d, x + w, z + d));
  }
  raw.push_back({-6, -6, -5, 6});
  raw.push_back({5, -6, 6, 6});
  raw.push_back({-5, -6, 5, -5});
  raw.push_back({-5, 5, 5, 6});
  for (std::size_t k = raw.size() - 4; k < raw.size(); ++k) boxes.push_back(wall_box(raw[k].x0, raw[k].z0, raw[k].x1, raw[k].z1));
  const CollisionWorld world(boxes);
  for (const ControlPreset preset : {ControlPreset::discrete, ControlPreset::continuous}) {
    cfg.preset = preset;
    Rng rng(5);
    AgentState s, replay;
    std::vector<ControlCommand> cmds;
    for (int k = 0; k < 20000; ++k) {
      const ControlCommand cmd{static_cast<CommandKind>(rng.below(9)), rng.uniform(0.0, 2.0)};
      cmds.push_back(cmd);
      s = step(s, cmd, cfg, world).state;
      for (const Aabb& b : raw) {
        ASSERT_GE(oracle::box_distance(b.x0, b.z0, b.x1, b.z1, s.position.x, s.position.z), cfg.radius - 1e-6)
            << "step " << k;
      }
    }
    for (const ControlCommand& cmd : cmds) replay = step(replay, cmd, cfg, world).state;
    EXPECT_EQ(replay, s);
  }
}

TEST(Physics, ConfigValidation) {
  AgentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.radius = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.friction = 20.0;  // friction * dt > 1
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(parse_command("strafe_left"), CommandKind::strafe_left);
  EXPECT_FALSE(parse_command("jump").has_value());
  EXPECT_EQ(parse_preset("continuous"), ControlPreset::continuous);
}

}  // namespace
}  // namespace navsim
