#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navsim/config.hpp"

namespace navsim {

inline constexpr std::string_view kProtocolVersion = "1";

std::string encode_base64(const std::vector<std::uint8_t>& data);
std::vector<std::uint8_t> decode_base64(std::string_view text);

Json to_json(const ObservationEntry& e);
Json sensor_layout(const std::vector<SensorSpec>& sensors);

// Error codes carried by error messages.
namespace codes {
inline constexpr std::string_view bad_message = "bad_message";
inline constexpr std::string_view bad_state = "bad_state";
inline constexpr std::string_view bad_version = "bad_version";
inline constexpr std::string_view bad_config = "bad_config";
inline constexpr std::string_view unknown_action = "unknown_action";
inline constexpr std::string_view unsatisfiable_goal = "unsatisfiable_goal";
inline constexpr std::string_view internal = "internal";
}  // namespace codes

Json error_message(std::string_view code, std::string_view message);

// Loads houses once and shares them between sessions.
class SceneCache {
 public:
  explicit SceneCache(std::filesystem::path scene_dir = {});

  std::shared_ptr<const House> get(const SceneSource& source);

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const House>> cache_;
};

// One client's protocol state machine:
//   hello -> configure -> (reset -> step*)* -> close
// Out-of-order messages yield bad_state and leave the state unchanged.
class Session {
 public:
  enum class State { connected, greeted, configured, running, closed };

  Session(std::string id, std::shared_ptr<SceneCache> scenes, std::uint64_t default_seed = 0);

  // Handles one text frame and returns exactly one reply.
  std::string handle(std::string_view text);
  Json handle_message(const Json& msg);

  State state() const { return state_; }
  const std::string& id() const { return id_; }
  const Simulation* simulation() const { return sim_.get(); }

 private:
  Json on_hello(const Json& msg);
  Json on_configure(const Json& msg);
  Json on_reset(const Json& msg);
  Json on_step(const Json& msg);
  Json on_close(const Json& msg);
  Json ready(std::string_view state) const;
  Json envelope(const Observation& obs, int step, double reward, bool done, bool success) const;

  std::string id_;
  std::shared_ptr<SceneCache> scenes_;
  std::uint64_t default_seed_ = 0;
  State state_ = State::connected;
  std::unique_ptr<Simulation> sim_;
};

// Reads NAVSIM_SEED; 0 when unset or malformed.
std::uint64_t env_default_seed();

// A recorded session: configuration, reset seed and the action list.
struct Transcript {
  Json config;
  std::uint64_t seed = 0;
  std::vector<std::string> actions;
};

Transcript parse_transcript(const Json& j);
Json to_json(const Transcript& t);

}  // namespace navsim
