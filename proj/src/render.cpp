#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "navsim/rng.hpp"
#include "navsim/sensors.hpp"

namespace navsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Basis {
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

Basis camera_basis(double yaw, double pitch) {
  const Vec3 f{std::sin(yaw) * std::cos(pitch), std::sin(pitch), std::cos(yaw) * std::cos(pitch)};
  const Vec3 r{-std::cos(yaw), 0.0, std::sin(yaw)};
  return {f, r, cross(r, f)};
}

// Ray against a vertical prism. Returns the entry distance and writes the
// entry normal; kInf on a miss or when the origin is inside.
double intersect_box(const RenderWorld::Box& b, Vec3 o, Vec3 d, Vec3& normal) {
  const double ox = o.x - b.footprint.center.x;
  const double oz = o.z - b.footprint.center.z;
  const double c = b.cos_yaw;
  const double s = b.sin_yaw;
  const std::array<double, 3> lo{ox * c - oz * s, o.y, ox * s + oz * c};
  const std::array<double, 3> ld{d.x * c - d.z * s, d.y, d.x * s + d.z * c};
  const std::array<double, 3> mn{-b.footprint.half_extents.x, b.y0, -b.footprint.half_extents.z};
  const std::array<double, 3> mx{b.footprint.half_extents.x, b.y1, b.footprint.half_extents.z};

  double t_near = -kInf;
  double t_far = kInf;
  int axis = -1;
  double sign = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (ld[k] == 0.0) {
      if (lo[k] < mn[k] || lo[k] > mx[k]) return kInf;
      continue;
    }
    const double inv = 1.0 / ld[k];
    double t0 = (mn[k] - lo[k]) * inv;
    double t1 = (mx[k] - lo[k]) * inv;
    double entry_sign = -1.0;  // entering through the min face
    if (t0 > t1) {
      std::swap(t0, t1);
      entry_sign = 1.0;
    }
    if (t0 > t_near) {
      t_near = t0;
      axis = k;
      sign = entry_sign;
    }
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return kInf;
  }
  if (axis < 0 || t_near < 0.0) return kInf;

  if (axis == 1) {
    normal = {0.0, sign, 0.0};
  } else {
    // Local x maps to left_of(yaw) = (c, -s), local z to heading(yaw) = (s, c).
    normal = axis == 0 ? Vec3{sign * c, 0.0, -sign * s} : Vec3{sign * s, 0.0, sign * c};
  }
  return t_near;
}

}  // namespace

std::uint8_t quantize_depth(double d, double far) {
  const double clamped = std::clamp(d, 0.0, far);
  const double q = std::floor(clamped / far * 255.0);
  return static_cast<std::uint8_t>(std::min(q, 255.0));
}

std::uint8_t instance_byte(int id) {
  if (id <= 0) return 0;
  return static_cast<std::uint8_t>((id - 1) % 255 + 1);
}

RenderWorld::RenderWorld(const House& h) {
  const int walls = static_cast<int>(h.walls.size());
  const int rooms = static_cast<int>(h.rooms.size());
  for (const SolidPiece& piece : solid_pieces(h)) {
    Box b;
    b.footprint = piece.box.footprint;
    b.y0 = piece.box.y0;
    b.y1 = piece.box.y1;
    b.cos_yaw = std::cos(b.footprint.yaw);
    b.sin_yaw = std::sin(b.footprint.yaw);
    b.category = piece.category;
    b.albedo = piece.albedo;
    b.instance = piece.is_wall ? static_cast<int>(piece.source) + 1
                               : walls + 2 * rooms + static_cast<int>(piece.source) + 1;
    boxes_.push_back(b);
  }
  const double floor_albedo = palette_albedo(Category::floor, 0);
  const double ceiling_albedo = palette_albedo(Category::ceiling, 0);
  for (int r = 0; r < rooms; ++r) {
    const Room& room = h.rooms[r];
    Vec2 lo{kInf, kInf};
    Vec2 hi{-kInf, -kInf};
    for (const Vec2& v : room.floor_polygon) {
      lo = {std::min(lo.x, v.x), std::min(lo.z, v.z)};
      hi = {std::max(hi.x, v.x), std::max(hi.z, v.z)};
    }
    slabs_.push_back({room.floor_polygon, {lo, hi}, 0.0, true, walls + r + 1, floor_albedo});
    slabs_.push_back({room.floor_polygon, {lo, hi}, room.ceiling_height, false, walls + rooms + r + 1, ceiling_albedo});
  }
  instance_count_ = walls + 2 * rooms + static_cast<int>(h.objects.size());
  build_cells();
}

void RenderWorld::build_cells() {
  if (boxes_.empty()) return;
  Vec2 lo{kInf, kInf};
  Vec2 hi{-kInf, -kInf};
  for (const Box& b : boxes_) {
    const auto [blo, bhi] = b.footprint.aabb();
    lo = {std::min(lo.x, blo.x), std::min(lo.z, blo.z)};
    hi = {std::max(hi.x, bhi.x), std::max(hi.z, bhi.z)};
  }
  cell_origin_ = lo;
  cells_x_ = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell_size_)));
  cells_z_ = std::max(1, static_cast<int>(std::ceil((hi.z - lo.z) / cell_size_)));

  auto cell_range = [&](const Box& b) {
    const auto [blo, bhi] = b.footprint.aabb();
    auto clamp_x = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, cells_x_ - 1); };
    auto clamp_z = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, cells_z_ - 1); };
    return std::array<int, 4>{clamp_x((blo.x - lo.x) / cell_size_), clamp_x((bhi.x - lo.x) / cell_size_),
                              clamp_z((blo.z - lo.z) / cell_size_), clamp_z((bhi.z - lo.z) / cell_size_)};
  };

  std::vector<std::uint32_t> counts(static_cast<std::size_t>(cells_x_) * cells_z_ + 1, 0);
  for (const Box& b : boxes_) {
    const auto r = cell_range(b);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) ++counts[static_cast<std::size_t>(j) * cells_x_ + i + 1];
  }
  for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
  cell_start_ = counts;
  cell_items_.assign(counts.back(), 0);
  std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
  for (std::uint32_t n = 0; n < boxes_.size(); ++n) {
    const auto r = cell_range(boxes_[n]);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) cell_items_[fill[static_cast<std::size_t>(j) * cells_x_ + i]++] = n;
  }
}

RenderWorld::Hit RenderWorld::cast(Vec3 o, Vec3 d, double t_min, double t_max) const {
  Hit best;
  double best_t = t_max;

  for (const Slab& s : slabs_) {
    if (d.y == 0.0) break;
    const bool facing = s.is_floor ? (d.y < 0.0 && o.y > s.y) : (d.y > 0.0 && o.y < s.y);
    if (!facing) continue;
    const double t = (s.y - o.y) / d.y;
    if (t < t_min || t >= best_t) continue;
    const Vec2 p{o.x + d.x * t, o.z + d.z * t};
    if (p.x < s.aabb[0].x || p.x > s.aabb[1].x || p.z < s.aabb[0].z || p.z > s.aabb[1].z) continue;
    if (!point_in_polygon(s.polygon, p)) continue;
    best_t = t;
    best = {t, {0.0, s.is_floor ? 1.0 : -1.0, 0.0}, s.is_floor ? Category::floor : Category::ceiling, s.instance,
            s.albedo};
  }

  if (cells_x_ == 0) return best;

  // Clip the ray to the acceleration grid in xz.
  const double gx0 = cell_origin_.x;
  const double gz0 = cell_origin_.z;
  const double gx1 = gx0 + cells_x_ * cell_size_;
  const double gz1 = gz0 + cells_z_ * cell_size_;
  double t0 = t_min;
  double t1 = best_t;
  auto clip = [&](double origin, double dir, double lo, double hi) {
    if (dir == 0.0) return origin >= lo && origin <= hi;
    double a = (lo - origin) / dir;
    double b = (hi - origin) / dir;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return t0 <= t1;
  };
  if (!clip(o.x, d.x, gx0, gx1) || !clip(o.z, d.z, gz0, gz1)) return best;

  const double px = o.x + d.x * t0;
  const double pz = o.z + d.z * t0;
  int ix = std::clamp(static_cast<int>(std::floor((px - gx0) / cell_size_)), 0, cells_x_ - 1);
  int iz = std::clamp(static_cast<int>(std::floor((pz - gz0) / cell_size_)), 0, cells_z_ - 1);
  const int step_x = d.x > 0.0 ? 1 : -1;
  const int step_z = d.z > 0.0 ? 1 : -1;
  const double delta_x = d.x != 0.0 ? cell_size_ / std::abs(d.x) : kInf;
  const double delta_z = d.z != 0.0 ? cell_size_ / std::abs(d.z) : kInf;
  double next_x = d.x != 0.0 ? (gx0 + (ix + (d.x > 0.0 ? 1 : 0)) * cell_size_ - o.x) / d.x : kInf;
  double next_z = d.z != 0.0 ? (gz0 + (iz + (d.z > 0.0 ? 1 : 0)) * cell_size_ - o.z) / d.z : kInf;

  Vec3 normal;
  while (true) {
    const std::size_t cell = static_cast<std::size_t>(iz) * cells_x_ + ix;
    for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
      const Box& b = boxes_[cell_items_[k]];
      const double t = intersect_box(b, o, d, normal);
      if (t < t_min || t >= best_t) continue;
      best_t = t;
      best = {t, normal, b.category, b.instance, b.albedo};
    }
    const double cell_exit = std::min(next_x, next_z);
    if (best_t <= cell_exit || cell_exit > t1) break;
    if (next_x < next_z) {
      ix += step_x;
      next_x += delta_x;
      if (ix < 0 || ix >= cells_x_) break;
    } else {
      iz += step_z;
      next_z += delta_z;
      if (iz < 0 || iz >= cells_z_) break;
    }
  }
  return best;
}

CameraPose camera_pose(const AgentState& agent, const AgentConfig& cfg, const SensorSpec& spec) {
  const Vec2 fwd = heading(agent.yaw);
  const Vec2 right = -left_of(agent.yaw);
  const Vec2 p = agent.position + right * spec.offset.x + fwd * spec.offset.z;
  return {{p.x, cfg.eye_height + spec.offset.y, p.z}, agent.yaw + spec.yaw_offset, agent.pitch + spec.pitch_offset};
}

Vec3 pixel_ray(const CameraPose& pose, const SensorSpec& spec, int i, int j) {
  const Basis basis = camera_basis(pose.yaw, pose.pitch);
  const double tan_h = std::tan(spec.fov / 2.0);
  const double tan_v = tan_h * spec.height / spec.width;
  const double sx = 2.0 * (i + 0.5) / spec.width - 1.0;
  const double sy = 1.0 - 2.0 * (j + 0.5) / spec.height;
  return normalized(basis.forward + basis.right * (sx * tan_h) + basis.up * (sy * tan_v));
}

HitBuffer trace(const RenderWorld& world, const CameraPose& pose, const SensorSpec& spec) {
  HitBuffer out;
  out.width = spec.width;
  out.height = spec.height;
  const std::size_t n = static_cast<std::size_t>(spec.width) * spec.height;
  out.hits.resize(n);
  out.rays.resize(n);
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * spec.width + i;
      out.rays[k] = pixel_ray(pose, spec, i, j);
      out.hits[k] = world.cast(pose.position, out.rays[k], spec.near, spec.far);
    }
  }
  return out;
}

CameraFrame encode(const HitBuffer& hb, const SensorSpec& spec, std::uint64_t noise_seed) {
  CameraFrame frame;
  frame.name = spec.name;
  frame.kind = spec.kind;
  frame.width = hb.width;
  frame.height = hb.height;
  frame.channels = spec.channels();
  frame.encoding = spec.encoding;
  const std::size_t samples = frame.sample_count();
  const bool as_float = spec.encoding == Encoding::float32;
  frame.buffer.assign(samples * (as_float ? sizeof(float) : 1), 0);

  const bool noisy = spec.noise_stddev > 0.0 &&
                     (spec.kind == SensorKind::color || spec.kind == SensorKind::depth || spec.kind == SensorKind::normal);
  Rng rng(mix_seed(noise_seed, 0x6e6f697365));
  auto noise = [&]() { return noisy ? spec.noise_stddev * rng.normal() : 0.0; };

  auto put = [&](std::size_t idx, double byte_value, double float_value) {
    if (as_float) {
      const float f = static_cast<float>(float_value);
      std::memcpy(frame.buffer.data() + idx * sizeof(float), &f, sizeof(float));
    } else {
      frame.buffer[idx] = static_cast<std::uint8_t>(byte_value);
    }
  };

  const int channels = frame.channels;
  for (std::size_t k = 0; k < hb.hits.size(); ++k) {
    const RenderWorld::Hit& h = hb.hits[k];
    const bool hit = h.instance != 0;
    switch (spec.kind) {
      case SensorKind::color: {
        if (!hit) break;
        const double shade = std::max(0.0, -dot(h.normal, hb.rays[k]));
        if (as_float) {
          put(k, 0, std::clamp(h.albedo * shade / 255.0 + noise(), 0.0, 1.0));
        } else {
          put(k, std::round(std::clamp(h.albedo * shade + noise(), 0.0, 255.0)), 0);
        }
        break;
      }
      case SensorKind::depth: {
        if (!hit) {
          put(k, 255, spec.far);
          break;
        }
        const double d = std::clamp(h.t + noise(), 0.0, spec.far);
        put(k, quantize_depth(d, spec.far), d);
        break;
      }
      case SensorKind::normal: {
        if (!hit) break;
        const std::array<double, 3> n{h.normal.x, h.normal.y, h.normal.z};
        for (int c = 0; c < channels; ++c) {
          const double v = std::clamp(n[c] + noise(), -1.0, 1.0);
          put(k * channels + c, std::round((v + 1.0) * 127.5), v);
        }
        break;
      }
      case SensorKind::semantic:
        if (hit) put(k, semantic_label(h.category), semantic_label(h.category));
        break;
      case SensorKind::instance:
        if (hit) put(k, instance_byte(h.instance), h.instance);
        break;
      default:
        throw ConfigError("sensor '" + spec.name + "' is not a camera");
    }
  }
  return frame;
}

CameraFrame render(const RenderWorld& world, const CameraPose& pose, const SensorSpec& spec, std::uint64_t noise_seed) {
  return encode(trace(world, pose, spec), spec, noise_seed);
}

}  // namespace navsim
