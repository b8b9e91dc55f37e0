#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navsim/rng.hpp"
#include "navsim/task.hpp"

namespace navsim {

enum class PolicyKind { random, greedy, forward_bump };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy(std::string_view name);

// Scripted agent. Output depends only on the observations seen so far and the seed.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ControlCommand act(const Observation& obs) = 0;
};

// Random: uniform over step_forward, turn_left, turn_right.
// Greedy: turns toward the measured goal direction when the angular error
//   exceeds 0.3 rad, otherwise steps forward; on front contact turns toward the
//   side with the smaller error. Needs a measurements sensor.
// Forward-bump: steps forward until front contact, then turns randomly.
std::unique_ptr<Policy> make_policy(PolicyKind kind, std::uint64_t seed);

inline constexpr double kGreedyTolerance = 0.3;

const Measurements* find_measurements(const Observation& obs);
const ContactReading* find_contact(const Observation& obs);

// A procedural scene set plus the episode template run on it.
struct SuiteSpec {
  std::string name;
  std::string dataset = "procedural";
  std::uint64_t seed = 0;
  int scenes = 50;
  int min_rooms = 1;
  int max_rooms = 1;
  bool furnished = false;
  int episodes_per_scene = 10;
  EpisodeConfig episode;  // goal, timeout and thresholds; the seed is derived per episode

  std::string clutter() const { return furnished ? "furnished" : "empty"; }
  std::string size() const;
  void validate() const;
};

std::vector<std::string> builtin_suite_names();
// Throws ConfigError for unknown names.
SuiteSpec builtin_suite(std::string_view name);
SuiteSpec parse_suite(std::string_view json_text);
// A builtin name or a path to a suite JSON file.
SuiteSpec load_suite(std::string_view name_or_path);

struct SceneSpec {
  std::uint64_t seed = 0;
  int rooms = 1;
};
SceneSpec suite_scene(const SuiteSpec& suite, int index);

struct RunOptions {
  PolicyKind policy = PolicyKind::random;
  std::uint64_t policy_seed = 0;
  int episodes = 0;  // 0 runs scenes * episodes_per_scene
  int jobs = 1;
  AgentConfig agent;
};

struct ReportRow {
  std::string suite;
  std::string dataset;
  std::string clutter;
  std::string size;
  std::string policy;
  double success = 0.0;  // percent
  double speed = 0.0;    // percent
  std::size_t episodes = 0;
  std::size_t errors = 0;  // episodes whose scene or goal could not be set up
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;
  std::vector<EpisodeRecord> records;
  std::uint64_t steps = 0;
  double seconds = 0.0;
  double steps_per_second() const { return seconds > 0.0 ? steps / seconds : 0.0; }
};

// Throws ConfigError when the suite has no episodes.
BenchmarkReport run_suite(const SuiteSpec& suite, const RunOptions& options);

std::string format_table(const BenchmarkReport& report);
std::string report_json(const BenchmarkReport& report, bool include_runtime = true);

struct FpsOptions {
  std::vector<SensorSpec> sensors = default_sensors();
  int steps = 1000;
  std::uint64_t seed = 1;
  int rooms = 2;
  bool furnished = true;
  AgentConfig agent;
};

// In-process steps per second for a random-policy loop. Requires steps >= 1000.
double fps_bench(const FpsOptions& options);

// Sensor list from a JSON array of sensor specs or an object with "sensors".
std::vector<SensorSpec> parse_sensor_list(std::string_view json_text);

}  // namespace navsim
