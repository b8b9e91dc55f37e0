#include "navsim/protocol.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include <boost/beast/core/detail/base64.hpp>

namespace navsim {

namespace {

namespace b64 = boost::beast::detail::base64;

double wire_distance(double d) { return std::isfinite(d) ? d : -1.0; }

std::optional<ControlCommand> parse_action(const Json& msg, std::string& error) {
  if (!msg.contains("action") || !msg.at("action").is_string()) {
    error = "step needs a string 'action'";
    return std::nullopt;
  }
  const auto kind = parse_command(msg.at("action").get<std::string>());
  if (!kind) {
    error = "unknown action '" + msg.at("action").get<std::string>() + "'";
    return std::nullopt;
  }
  ControlCommand cmd{*kind, 1.0};
  if (msg.contains("scale")) {
    const Json& s = msg.at("scale");
    if (!s.is_number() || !(s.get<double>() >= 0.0) || !std::isfinite(s.get<double>())) {
      error = "scale must be a non-negative number";
      return std::nullopt;
    }
    cmd.scale = s.get<double>();
  }
  return cmd;
}

}  // namespace

std::string encode_base64(const std::vector<std::uint8_t>& data) {
  std::string out(b64::encoded_size(data.size()), '\0');
  out.resize(b64::encode(out.data(), data.data(), data.size()));
  return out;
}

std::vector<std::uint8_t> decode_base64(std::string_view text) {
  std::size_t pad = 0;
  while (pad < 2 && pad < text.size() && text[text.size() - 1 - pad] == '=') ++pad;
  if (text.size() % 4 != 0) throw ParseError("malformed base64 payload");
  std::vector<std::uint8_t> out(b64::decoded_size(text.size()));
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  if (read != text.size() - pad) throw ParseError("malformed base64 payload");
  out.resize(written);
  return out;
}

Json to_json(const ObservationEntry& e) {
  Json j{{"name", e.name}, {"kind", to_string(e.kind)}};
  if (const auto* frame = std::get_if<CameraFrame>(&e.reading)) {
    j["width"] = frame->width;
    j["height"] = frame->height;
    j["channels"] = frame->channels;
    j["encoding"] = to_string(frame->encoding);
    j["data"] = encode_base64(frame->buffer);
  } else if (const auto* contact = std::get_if<ContactReading>(&e.reading)) {
    Json flags = Json::array();
    for (bool f : contact->fired) flags.push_back(f ? 1 : 0);
    j["flags"] = flags;
  } else {
    const auto& m = std::get<Measurements>(e.reading);
    j["velocity"] = {m.velocity[0], m.velocity[1]};
    j["acceleration"] = m.acceleration;
    j["dist_euclid"] = m.dist_euclid;
    j["dist_shortest_path"] = wire_distance(m.dist_shortest_path);
    j["direction"] = {m.direction[0], m.direction[1]};
    j["time_norm"] = m.time_norm;
  }
  return j;
}

Json sensor_layout(const std::vector<SensorSpec>& sensors) {
  Json out = Json::array();
  for (const auto& s : sensors) {
    Json j{{"name", s.name}, {"kind", to_string(s.kind)}};
    if (is_camera(s.kind)) {
      j["width"] = s.width;
      j["height"] = s.height;
      j["channels"] = s.channels();
      j["encoding"] = to_string(s.encoding);
    }
    out.push_back(j);
  }
  return out;
}

Json error_message(std::string_view code, std::string_view message) {
  return Json{{"type", "error"}, {"code", code}, {"message", message}};
}

SceneCache::SceneCache(std::filesystem::path scene_dir) : dir_(std::move(scene_dir)) {}

std::shared_ptr<const House> SceneCache::get(const SceneSource& source) {
  std::string key;
  if (source.path) {
    const std::filesystem::path rel(*source.path);
    if (rel.is_absolute() || rel.lexically_normal().string().starts_with("..")) {
      throw ConfigError("scene path must stay inside the scene directory");
    }
    if (dir_.empty()) throw ConfigError("server has no scene directory");
    key = "file:" + rel.lexically_normal().string();
  } else {
    key = "gen:" + std::to_string(source.seed) + ":" + std::to_string(source.rooms) + ":" +
          (source.furnished ? "f" : "e");
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto house = std::make_shared<const House>(source.path ? load_house(dir_ / *source.path)
                                                         : generate_house(source.seed, source.rooms, source.furnished));
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(house)).first->second;
}

Session::Session(std::string id, std::shared_ptr<SceneCache> scenes, std::uint64_t default_seed)
    : id_(std::move(id)), scenes_(std::move(scenes)), default_seed_(default_seed) {}

std::string Session::handle(std::string_view text) {
  Json msg;
  try {
    msg = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return error_message(codes::bad_message, std::string("malformed JSON: ") + e.what()).dump();
  }
  return handle_message(msg).dump();
}

Json Session::handle_message(const Json& msg) {
  if (!msg.is_object() || !msg.contains("type") || !msg.at("type").is_string()) {
    return error_message(codes::bad_message, "message must be an object with a string 'type'");
  }
  const std::string type = msg.at("type").get<std::string>();
  try {
    if (type == "hello") return on_hello(msg);
    if (type == "configure") return on_configure(msg);
    if (type == "reset") return on_reset(msg);
    if (type == "step") return on_step(msg);
    if (type == "close") return on_close(msg);
    return error_message(codes::bad_message, "unknown message type '" + type + "'");
  } catch (const std::exception& e) {
    return error_message(codes::internal, e.what());
  }
}

Json Session::ready(std::string_view state) const {
  return Json{{"type", "ready"}, {"session", id_}, {"version", kProtocolVersion}, {"state", state}};
}

Json Session::on_hello(const Json& msg) {
  if (state_ != State::connected) return error_message(codes::bad_state, "hello was already received");
  if (!msg.contains("version") || !msg.at("version").is_string()) {
    return error_message(codes::bad_message, "hello needs a string 'version'");
  }
  const auto version = msg.at("version").get<std::string>();
  if (version != kProtocolVersion) {
    return error_message(codes::bad_version,
                         "protocol version '" + version + "' is not supported, expected '" + std::string(kProtocolVersion) + "'");
  }
  state_ = State::greeted;
  return ready("hello");
}

Json Session::on_configure(const Json& msg) {
  if (state_ != State::greeted) return error_message(codes::bad_state, "configure is only valid right after hello");
  if (!msg.contains("config")) return error_message(codes::bad_message, "configure needs a 'config' object");
  try {
    SessionConfig cfg = parse_session_config(msg.at("config"), default_seed_);
    House house = apply_variation(*scenes_->get(cfg.scene), cfg.variation);
    if (cfg.episode.house_id.empty()) cfg.episode.house_id = house.id;
    World world = World::build(std::move(house), cfg.agent, cfg.episode.grid_resolution);
    sim_ = std::make_unique<Simulation>(std::move(world), cfg.agent, cfg.sensors, cfg.episode);
  } catch (const Error& e) {
    return error_message(codes::bad_config, e.what());
  }
  state_ = State::configured;
  Json r = ready("configured");
  r["sensors"] = sensor_layout(sim_->sensors());
  return r;
}

Json Session::envelope(const Observation& obs, int step, double reward, bool done, bool success) const {
  Json entries = Json::array();
  for (const auto& e : obs) entries.push_back(to_json(e));
  Json goal{{"type", std::visit([](const auto& g) -> std::string {
                       using T = std::decay_t<decltype(g)>;
                       if constexpr (std::is_same_v<T, PointGoal>) return "point";
                       else if constexpr (std::is_same_v<T, ObjectGoal>) return "object";
                       else return "room";
                     },
                     sim_->episode_config().goal)},
            {"onehot", sim_->goal_onehot()}};
  return Json{{"type", "observation"}, {"session", id_},         {"step", step},
              {"reward", reward},      {"done", done},           {"success", success},
              {"observation", entries}, {"goal", goal}};
}

Json Session::on_reset(const Json& msg) {
  if (state_ != State::configured && state_ != State::running) {
    return error_message(codes::bad_state, "reset needs a configured session");
  }
  std::optional<std::uint64_t> seed;
  if (msg.contains("seed")) {
    try {
      seed = seed_value(msg.at("seed"), "seed");
    } catch (const ConfigError& e) {
      return error_message(codes::bad_message, e.what());
    }
  }
  Observation obs;
  try {
    obs = sim_->reset(seed);
  } catch (const GoalError& e) {
    return error_message(codes::unsatisfiable_goal, e.what());
  }
  state_ = State::running;
  return envelope(obs, 0, 0.0, false, false);
}

Json Session::on_step(const Json& msg) {
  if (state_ != State::running) return error_message(codes::bad_state, "step needs a reset episode");
  if (sim_->done()) return error_message(codes::bad_state, "episode is done, send reset");
  std::string error;
  const auto cmd = parse_action(msg, error);
  if (!cmd) {
    const bool unknown = msg.contains("action") && msg.at("action").is_string();
    return error_message(unknown && error.starts_with("unknown") ? codes::unknown_action : codes::bad_message, error);
  }
  int repeat = 1;
  if (msg.contains("repeat")) {
    const Json& r = msg.at("repeat");
    if (!r.is_number_integer() || r.get<std::int64_t>() < 1 || r.get<std::int64_t>() > 10000) {
      return error_message(codes::bad_message, "repeat must be an integer in [1, 10000]");
    }
    repeat = r.get<int>();
  }
  double reward = 0.0;
  StepResult last;
  for (int k = 0; k < repeat && !sim_->done(); ++k) {
    last = sim_->step(*cmd);
    reward += last.reward;
  }
  return envelope(last.observation, last.step, reward, last.done, last.success);
}

Json Session::on_close(const Json&) {
  if (state_ == State::closed) return error_message(codes::bad_state, "session is closed");
  state_ = State::closed;
  sim_.reset();
  return ready("closed");
}

std::uint64_t env_default_seed() {
  const char* v = std::getenv("NAVSIM_SEED");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v, &end, 10);
  return (end != nullptr && *end == '\0') ? s : 0;
}

Transcript parse_transcript(const Json& j) {
  Transcript t;
  try {
    t.config = j.at("config");
    t.seed = j.at("seed").get<std::uint64_t>();
    t.actions = j.at("actions").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad transcript: ") + e.what());
  }
  return t;
}

Json to_json(const Transcript& t) { return Json{{"config", t.config}, {"seed", t.seed}, {"actions", t.actions}}; }

}  // namespace navsim
