#include "navsim/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "navsim/error.hpp"

namespace navsim {

namespace {

constexpr double kSkin = 1e-9;          // distance kept from surfaces after a stop
constexpr double kTouch = 1e-7;         // distance treated as touching when resolving motion
constexpr double kContactReach = 1e-4;  // distance at which contact sensors fire
constexpr int kSlideIterations = 3;

constexpr std::array<std::string_view, 9> kCommandNames = {
    "step_forward", "step_back", "turn_left", "turn_right", "strafe_left",
    "strafe_right", "look_up",   "look_down", "idle",
};

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Vec2 normal;
};

// Earliest time in [0, 1] at which a disc moving from p by d touches rect.
Hit time_of_impact(const OrientedRect& rect, Vec2 p, Vec2 d, double r) {
  Hit hit;
  const double current = rect.distance(p);
  if (current <= r + kTouch) {
    const Vec2 away = normalized(p - rect.closest_point(p));
    if (dot(d, away) < 0.0) {
      hit.t = 0.0;
      hit.normal = away;
      return hit;
    }
    if (current >= r - kTouch) return hit;
  }

  const Vec2 lp = rect.to_local(p);
  const Vec2 lq = rect.to_local(p + d);
  const Vec2 ld = lq - lp;
  const double hx = rect.half_extents.x;
  const double hz = rect.half_extents.z;
  Vec2 local_normal;

  auto try_face = [&](double pos, double vel, double bound, double other_pos, double other_vel,
                      double other_half, Vec2 n) {
    // Face at coordinate `bound` (already offset by r) approached from outside.
    if (vel == 0.0) return;
    const double t = (bound - pos) / vel;
    if (t < 0.0 || t > 1.0 || t >= hit.t) return;
    const double o = other_pos + other_vel * t;
    if (std::abs(o) > other_half) return;
    hit.t = t;
    local_normal = n;
  };
  if (lp.x >= hx + r && ld.x < 0.0) try_face(lp.x, ld.x, hx + r, lp.z, ld.z, hz, {1.0, 0.0});
  if (lp.x <= -hx - r && ld.x > 0.0) try_face(lp.x, ld.x, -hx - r, lp.z, ld.z, hz, {-1.0, 0.0});
  if (lp.z >= hz + r && ld.z < 0.0) try_face(lp.z, ld.z, hz + r, lp.x, ld.x, hx, {0.0, 1.0});
  if (lp.z <= -hz - r && ld.z > 0.0) try_face(lp.z, ld.z, -hz - r, lp.x, ld.x, hx, {0.0, -1.0});

  const double a = dot(ld, ld);
  if (a > 0.0) {
    for (const Vec2 corner : {Vec2{hx, hz}, Vec2{hx, -hz}, Vec2{-hx, hz}, Vec2{-hx, -hz}}) {
      const Vec2 m = lp - corner;
      const double b = 2.0 * dot(m, ld);
      const double c = dot(m, m) - r * r;
      if (c < 0.0) continue;
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) continue;
      const double t = (-b - std::sqrt(disc)) / (2.0 * a);
      if (t < 0.0 || t > 1.0 || t >= hit.t) continue;
      const Vec2 at = lp + ld * t;
      // Only the rounded corner region; faces are handled above.
      if (std::abs(at.x) <= hx || std::abs(at.z) <= hz) continue;
      hit.t = t;
      local_normal = normalized(at - corner);
    }
  }

  if (std::isfinite(hit.t)) {
    // Rotate the local normal back to the world frame.
    hit.normal = rect.to_world(local_normal) - rect.to_world({0.0, 0.0});
  }
  return hit;
}

double speed_limit(double v, double max) { return std::clamp(v, -max, max); }

Vec2 clamp_length(Vec2 v, double max) {
  const double l = length(v);
  return l > max ? v * (max / l) : v;
}

int sensor_for(Vec2 toward_obstacle, double yaw) {
  const double fwd = dot(toward_obstacle, heading(yaw));
  const double lft = dot(toward_obstacle, left_of(yaw));
  if (std::abs(fwd) >= std::abs(lft)) return fwd >= 0.0 ? kFront : kBack;
  return lft >= 0.0 ? kLeft : kRight;
}

}  // namespace

std::string_view to_string(ControlPreset p) { return p == ControlPreset::discrete ? "discrete" : "continuous"; }

std::optional<ControlPreset> parse_preset(std::string_view name) {
  if (name == "discrete") return ControlPreset::discrete;
  if (name == "continuous") return ControlPreset::continuous;
  return std::nullopt;
}

std::string_view to_string(CommandKind k) { return kCommandNames[static_cast<std::size_t>(k)]; }

std::optional<CommandKind> parse_command(std::string_view name) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == name) return static_cast<CommandKind>(i);
  }
  return std::nullopt;
}

void AgentConfig::validate() const {
  const std::array<std::pair<const char*, double>, 14> values = {{
      {"radius", radius},
      {"height", height},
      {"eye_height", eye_height},
      {"mass", mass},
      {"linear_accel", linear_accel},
      {"angular_accel", angular_accel},
      {"max_linear_speed", max_linear_speed},
      {"max_angular_speed", max_angular_speed},
      {"friction", friction},
      {"dt", dt},
      {"discrete_step", discrete_step},
      {"discrete_turn", discrete_turn},
      {"pitch_step", pitch_step},
      {"contact_height", contact_height},
  }};
  for (const auto& [name, value] : values) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(std::string("agent ") + name + " must be positive");
  }
  if (friction * dt > 1.0) throw ConfigError("agent friction * dt must not exceed 1");
}

CollisionWorld::CollisionWorld(std::vector<Collider> colliders) : colliders_(std::move(colliders)) {}

CollisionWorld CollisionWorld::from_house(const House& h, const AgentConfig& cfg) {
  std::vector<Collider> colliders;
  for (const SolidPiece& piece : solid_pieces(h)) {
    if (piece.box.y1 <= 0.0 || piece.box.y0 >= cfg.height) continue;
    colliders.push_back({piece.box.footprint, piece.box.y0, piece.box.y1});
  }
  for (const OrientedRect& slab : boundary_slabs(h.bounds)) {
    colliders.push_back({slab, -1e9, 1e9});
  }
  return CollisionWorld(std::move(colliders));
}

double CollisionWorld::clearance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Collider& c : colliders_) best = std::min(best, c.footprint.distance(p));
  return best;
}

SweepResult sweep_disc(Vec2 start, Vec2 delta, double radius, const CollisionWorld& world) {
  SweepResult out{start, {}};
  Vec2 remaining = delta;
  for (int iter = 0; iter < kSlideIterations; ++iter) {
    const double len = length(remaining);
    if (len < 1e-12) break;
    const Vec2 pos = out.position;
    const Vec2 end = pos + remaining;
    const Vec2 lo{std::min(pos.x, end.x) - radius - kTouch, std::min(pos.z, end.z) - radius - kTouch};
    const Vec2 hi{std::max(pos.x, end.x) + radius + kTouch, std::max(pos.z, end.z) + radius + kTouch};

    Hit best;
    for (const Collider& c : world.colliders()) {
      const auto [blo, bhi] = c.footprint.aabb();
      if (bhi.x < lo.x || blo.x > hi.x || bhi.z < lo.z || blo.z > hi.z) continue;
      const Hit h = time_of_impact(c.footprint, pos, remaining, radius);
      if (h.t < best.t) best = h;
    }
    if (!std::isfinite(best.t)) {
      out.position = end;
      break;
    }
    const double travel = std::max(0.0, best.t * len - kSkin);
    out.position = pos + remaining * (travel / len);
    out.normals.push_back(best.normal);
    Vec2 rest = remaining * (1.0 - travel / len);
    const double into = dot(rest, best.normal);
    if (into < 0.0) rest -= best.normal * into;
    remaining = rest;
  }
  return out;
}

ContactReading contact_reading(const AgentState& state, const AgentConfig& cfg, const CollisionWorld& world) {
  ContactReading reading;
  const double cos45 = std::cos(kPi / 4.0) - 1e-9;
  const std::array<Vec2, 4> dirs = {heading(state.yaw), -left_of(state.yaw), -heading(state.yaw),
                                    left_of(state.yaw)};
  for (const Collider& c : world.colliders()) {
    if (c.y0 > cfg.contact_height || c.y1 < cfg.contact_height) continue;
    const Vec2 q = c.footprint.closest_point(state.position);
    const double d = length(q - state.position);
    if (d > cfg.radius + kContactReach || d <= 0.0) continue;
    const Vec2 toward = (q - state.position) / d;
    for (std::size_t i = 0; i < 4; ++i) {
      if (dot(toward, dirs[i]) >= cos45) reading.fired[i] = true;
    }
  }
  return reading;
}

StepOutcome step(const AgentState& state, ControlCommand cmd, const AgentConfig& cfg, const CollisionWorld& world) {
  AgentState next = state;
  const double scale = std::max(0.0, cmd.scale);
  Vec2 move_dir;  // unit direction for translation commands, world frame
  double turn = 0.0;
  switch (cmd.kind) {
    case CommandKind::step_forward: move_dir = heading(state.yaw); break;
    case CommandKind::step_back: move_dir = -heading(state.yaw); break;
    case CommandKind::strafe_left: move_dir = left_of(state.yaw); break;
    case CommandKind::strafe_right: move_dir = -left_of(state.yaw); break;
    case CommandKind::turn_left: turn = 1.0; break;
    case CommandKind::turn_right: turn = -1.0; break;
    case CommandKind::look_up: next.pitch = std::min(kMaxPitch, state.pitch + cfg.pitch_step * scale); break;
    case CommandKind::look_down: next.pitch = std::max(-kMaxPitch, state.pitch - cfg.pitch_step * scale); break;
    case CommandKind::idle: break;
  }
  const bool linear_cmd = move_dir.x != 0.0 || move_dir.z != 0.0;
  const bool angular_cmd = turn != 0.0;

  Vec2 delta;
  if (cfg.preset == ControlPreset::discrete) {
    delta = move_dir * (cfg.discrete_step * scale);
    next.yaw = state.yaw + turn * cfg.discrete_turn * scale;
    next.linear_velocity = {};
    next.angular_velocity = 0.0;
  } else {
    Vec2 v = state.linear_velocity;
    double w = state.angular_velocity;
    if (linear_cmd) v += move_dir * (cfg.linear_accel * scale * cfg.dt);
    v = clamp_length(v, cfg.max_linear_speed);
    if (!linear_cmd) v = v * (1.0 - cfg.friction * cfg.dt);
    if (angular_cmd) w += turn * cfg.angular_accel * scale * cfg.dt;
    w = speed_limit(w, cfg.max_angular_speed);
    if (!angular_cmd) w *= 1.0 - cfg.friction * cfg.dt;
    next.linear_velocity = v;
    next.angular_velocity = w;
    next.yaw = state.yaw + w * cfg.dt;
    delta = v * cfg.dt;
  }
  next.yaw = wrap_angle(next.yaw);

  const SweepResult sweep = sweep_disc(state.position, delta, cfg.radius, world);
  next.position = sweep.position;

  ContactReading contact = contact_reading(next, cfg, world);
  const Vec2 intended_velocity = cfg.preset == ControlPreset::discrete ? delta / cfg.dt : next.linear_velocity;
  for (const Vec2& n : sweep.normals) {
    const double into = dot(intended_velocity, n);
    if (into >= 0.0) continue;
    contact.impulse[sensor_for(-n, next.yaw)] += cfg.mass * -into;
  }
  if (cfg.preset == ControlPreset::continuous) {
    Vec2 v = next.linear_velocity;
    for (const Vec2& n : sweep.normals) {
      const double into = dot(v, n);
      if (into < 0.0) v -= n * into;
    }
    next.linear_velocity = v;
  }
  return {next, contact};
}

}  // namespace navsim
