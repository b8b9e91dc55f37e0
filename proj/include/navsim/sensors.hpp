#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "navsim/geometry.hpp"
#include "navsim/physics.hpp"
#include "navsim/scene.hpp"

namespace navsim {

enum class SensorKind { color, depth, normal, semantic, instance, contact, measurements };
enum class Encoding { byte, float32 };

std::string_view to_string(SensorKind k);
std::optional<SensorKind> parse_sensor_kind(std::string_view name);
std::string_view to_string(Encoding e);
std::optional<Encoding> parse_encoding(std::string_view name);

constexpr bool is_camera(SensorKind k) { return k <= SensorKind::instance; }

struct SensorSpec {
  std::string name;
  SensorKind kind = SensorKind::color;
  Vec3 offset;             // agent frame: x right, y up from eye height, z forward
  double yaw_offset = 0.0;
  double pitch_offset = 0.0;
  int width = 84;
  int height = 84;
  double fov = kPi / 2.0;  // horizontal
  double near = 0.0;
  double far = 10.0;
  Encoding encoding = Encoding::byte;
  double noise_stddev = 0.0;

  // Throws ConfigError on a malformed spec.
  void validate() const;
  int channels() const { return kind == SensorKind::normal ? 3 : 1; }
};

// The default sensor suite: grayscale camera, depth, contact and measurements.
std::vector<SensorSpec> default_sensors();

// Row-major, top-left origin. Float samples are stored as native float32.
struct CameraFrame {
  std::string name;
  SensorKind kind = SensorKind::color;
  int width = 0;
  int height = 0;
  int channels = 1;
  Encoding encoding = Encoding::byte;
  std::vector<std::uint8_t> buffer;

  std::size_t sample_count() const { return static_cast<std::size_t>(width) * height * channels; }
  std::uint8_t byte_at(int x, int y, int c = 0) const { return buffer[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  float float_at(int x, int y, int c = 0) const;
};

struct CameraPose {
  Vec3 position;
  double yaw = 0.0;
  double pitch = 0.0;
};

CameraPose camera_pose(const AgentState& agent, const AgentConfig& cfg, const SensorSpec& spec);

// Static render geometry derived from a house.
//
// Instance ids: walls 1..W, room floors W+1..W+R, ceilings W+R+1..W+2R, then
// objects. Instance 0 means no hit.
class RenderWorld {
 public:
  struct Box {
    OrientedRect footprint;
    double y0 = 0.0;
    double y1 = 0.0;
    double cos_yaw = 1.0;
    double sin_yaw = 0.0;
    Category category = Category::wall;
    int instance = 0;
    double albedo = 128.0;  // gray level
  };
  struct Slab {  // room floor or ceiling, horizontal
    std::vector<Vec2> polygon;
    std::array<Vec2, 2> aabb;
    double y = 0.0;
    bool is_floor = true;
    int instance = 0;
    double albedo = 128.0;
  };

  RenderWorld() = default;
  explicit RenderWorld(const House& h);

  std::span<const Box> boxes() const { return boxes_; }
  std::span<const Slab> slabs() const { return slabs_; }
  int instance_count() const { return instance_count_; }

  struct Hit {
    double t = 0.0;
    Vec3 normal;
    Category category = Category::wall;
    int instance = 0;  // 0 = no hit
    double albedo = 0.0;
  };
  // Nearest hit with t in [t_min, t_max); instance 0 when none.
  Hit cast(Vec3 origin, Vec3 dir, double t_min, double t_max) const;

 private:
  void build_cells();

  std::vector<Box> boxes_;
  std::vector<Slab> slabs_;
  int instance_count_ = 0;
  // Uniform xz grid over box footprints for ray traversal.
  Vec2 cell_origin_;
  double cell_size_ = 0.5;
  int cells_x_ = 0;
  int cells_z_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

// Unit view ray through the center of pixel (i, j).
Vec3 pixel_ray(const CameraPose& pose, const SensorSpec& spec, int i, int j);

// Per-pixel hits for one camera. Sensors with equal camera geometry share one.
struct HitBuffer {
  int width = 0;
  int height = 0;
  std::vector<RenderWorld::Hit> hits;
  std::vector<Vec3> rays;
};

HitBuffer trace(const RenderWorld& world, const CameraPose& pose, const SensorSpec& spec);
CameraFrame encode(const HitBuffer& hits, const SensorSpec& spec, std::uint64_t noise_seed);
CameraFrame render(const RenderWorld& world, const CameraPose& pose, const SensorSpec& spec,
                   std::uint64_t noise_seed = 0);

// Byte depth quantization.
std::uint8_t quantize_depth(double d, double far);
// Instance id wrapped into [1, 255]; 0 stays 0.
std::uint8_t instance_byte(int id);

struct Measurements {
  std::array<double, 2> velocity{};  // forward m/s, angular rad/s
  double acceleration = 0.0;         // forward m/s^2
  double dist_euclid = 0.0;
  double dist_shortest_path = 0.0;   // kUnreachable when unreachable
  std::array<double, 2> direction{};  // unit vector toward the goal, agent frame (x right, z forward)
  double time_norm = 0.0;
};

// Motion terms from two consecutive poses dt apart.
struct MotionSample {
  std::array<double, 2> velocity{};
  double acceleration = 0.0;
};
MotionSample motion_between(const AgentState& prev, const AgentState& now, double prev_forward_speed, double dt);

// Goal-relative terms. `goal_point` is the closest point of the goal region.
Measurements measure(const AgentState& agent, Vec2 goal_point, double shortest_path, const MotionSample& motion,
                     int step, int max_steps);

using SensorReading = std::variant<CameraFrame, ContactReading, Measurements>;

struct ObservationEntry {
  std::string name;
  SensorKind kind = SensorKind::color;
  SensorReading reading;
};

// One entry per configured sensor, in configuration order.
using Observation = std::vector<ObservationEntry>;

}  // namespace navsim
