#include "navsim/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "navsim/config.hpp"

namespace navsim {

namespace {

constexpr std::array<std::string_view, 3> kPolicyNames = {"random", "greedy", "forward_bump"};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  ControlCommand act(const Observation&) override {
    static constexpr std::array<CommandKind, 3> kChoices = {CommandKind::step_forward, CommandKind::turn_left,
                                                            CommandKind::turn_right};
    return {kChoices[rng_.below(kChoices.size())], 1.0};
  }

 private:
  Rng rng_;
};

class GreedyPolicy final : public Policy {
 public:
  ControlCommand act(const Observation& obs) override {
    const Measurements* m = find_measurements(obs);
    if (m == nullptr) throw ConfigError("greedy policy needs a measurements sensor");
    // Positive error: goal on the agent's right.
    const double error = std::atan2(m->direction[0], m->direction[1]);
    const CommandKind toward = error > 0.0 ? CommandKind::turn_right : CommandKind::turn_left;
    const ContactReading* c = find_contact(obs);
    if (c != nullptr && c->fired[kFront]) return {toward, 1.0};
    if (std::abs(error) > kGreedyTolerance) return {toward, 1.0};
    return {CommandKind::step_forward, 1.0};
  }
};

class ForwardBumpPolicy final : public Policy {
 public:
  explicit ForwardBumpPolicy(std::uint64_t seed) : rng_(seed) {}
  ControlCommand act(const Observation& obs) override {
    const ContactReading* c = find_contact(obs);
    if (c == nullptr) throw ConfigError("forward_bump policy needs a contact sensor");
    if (!c->fired[kFront]) return {CommandKind::step_forward, 1.0};
    return {rng_.bernoulli(0.5) ? CommandKind::turn_left : CommandKind::turn_right, 1.0};
  }

 private:
  Rng rng_;
};

std::vector<SensorSpec> policy_sensors() {
  SensorSpec contact;
  contact.name = "contact";
  contact.kind = SensorKind::contact;
  SensorSpec meas;
  meas.name = "measurements";
  meas.kind = SensorKind::measurements;
  return {contact, meas};
}

SuiteSpec make_suite(std::string name, std::uint64_t seed, int min_rooms, int max_rooms, bool furnished) {
  SuiteSpec s;
  s.name = std::move(name);
  s.seed = seed;
  s.min_rooms = min_rooms;
  s.max_rooms = max_rooms;
  s.furnished = furnished;
  s.episode.goal = PointGoal{};
  s.episode.min_start_goal_distance = 2.0;
  return s;
}

}  // namespace

std::string_view to_string(PolicyKind k) { return kPolicyNames[static_cast<std::size_t>(k)]; }

std::optional<PolicyKind> parse_policy(std::string_view name) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == name) return static_cast<PolicyKind>(i);
  }
  return std::nullopt;
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, std::uint64_t seed) {
  switch (kind) {
    case PolicyKind::random: return std::make_unique<RandomPolicy>(seed);
    case PolicyKind::greedy: return std::make_unique<GreedyPolicy>();
    case PolicyKind::forward_bump: return std::make_unique<ForwardBumpPolicy>(seed);
  }
  throw ConfigError("unknown policy");
}

const Measurements* find_measurements(const Observation& obs) {
  for (const auto& e : obs) {
    if (const auto* m = std::get_if<Measurements>(&e.reading)) return m;
  }
  return nullptr;
}

const ContactReading* find_contact(const Observation& obs) {
  for (const auto& e : obs) {
    if (const auto* c = std::get_if<ContactReading>(&e.reading)) return c;
  }
  return nullptr;
}

std::string SuiteSpec::size() const {
  if (min_rooms == max_rooms) return std::to_string(min_rooms) + (min_rooms == 1 ? " room" : " rooms");
  return std::to_string(min_rooms) + "-" + std::to_string(max_rooms) + " rooms";
}

void SuiteSpec::validate() const {
  if (name.empty()) throw ConfigError("suite needs a name");
  if (scenes < 1) throw ConfigError("suite '" + name + "' needs at least one scene");
  if (episodes_per_scene < 1) throw ConfigError("suite '" + name + "' needs at least one episode per scene");
  if (min_rooms < 1 || max_rooms < min_rooms) throw ConfigError("suite '" + name + "' has a bad room range");
  episode.validate();
}

std::vector<std::string> builtin_suite_names() {
  return {"empty-small", "furnished-small", "empty-medium", "furnished-medium", "empty-room", "furnished-room",
          "empty-house", "furnished-house"};
}

SuiteSpec builtin_suite(std::string_view name) {
  // Empty and furnished variants of a size share house seeds, so they differ
  // only in furniture.
  if (name == "empty-small") return make_suite("empty-small", 1001, 2, 2, false);
  if (name == "furnished-small") return make_suite("furnished-small", 1001, 2, 2, true);
  if (name == "empty-medium") return make_suite("empty-medium", 2001, 3, 5, false);
  if (name == "furnished-medium") return make_suite("furnished-medium", 2001, 3, 5, true);
  if (name == "empty-room") return make_suite("empty-room", 3001, 1, 1, false);
  if (name == "furnished-room") return make_suite("furnished-room", 3001, 1, 1, true);
  if (name == "empty-house" || name == "furnished-house") {
    SuiteSpec s = make_suite(std::string(name), 4001, 3, 5, name == "furnished-house");
    s.episode.goal = ObjectGoal{Category::door, InstanceSelect::closest};
    s.episode.min_start_goal_distance = 0.0;
    return s;
  }
  throw ConfigError("unknown suite '" + std::string(name) + "'");
}

SuiteSpec parse_suite(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("suite file is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("suite must be a JSON object");
  static const std::set<std::string> kKeys = {"name",      "dataset",  "seed",   "scenes", "rooms",
                                              "furnished", "episodes_per_scene", "episode"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("suite has unknown field '" + key + "'");
  }
  SuiteSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    s.dataset = j.value("dataset", s.dataset);
    if (j.contains("seed")) s.seed = seed_value(j.at("seed"), "suite.seed");
    s.scenes = j.value("scenes", s.scenes);
    if (j.contains("rooms")) {
      const auto r = j.at("rooms").get<std::vector<int>>();
      if (r.size() != 2) throw ConfigError("suite.rooms needs [min, max]");
      s.min_rooms = r[0];
      s.max_rooms = r[1];
    }
    s.furnished = j.value("furnished", s.furnished);
    s.episodes_per_scene = j.value("episodes_per_scene", s.episodes_per_scene);
    if (j.contains("episode")) {
      const Json& e = j.at("episode");
      static const std::set<std::string> kEpisodeKeys = {"goal", "max_steps", "success_distance",
                                                         "min_start_goal_distance", "grid_resolution"};
      for (const auto& [key, value] : e.items()) {
        if (!kEpisodeKeys.contains(key)) throw ConfigError("suite.episode has unknown field '" + key + "'");
      }
      if (e.contains("goal")) s.episode.goal = parse_goal(e.at("goal"));
      s.episode.max_steps = e.value("max_steps", s.episode.max_steps);
      s.episode.success_distance = e.value("success_distance", s.episode.success_distance);
      s.episode.min_start_goal_distance = e.value("min_start_goal_distance", s.episode.min_start_goal_distance);
      s.episode.grid_resolution = e.value("grid_resolution", s.episode.grid_resolution);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad suite: ") + e.what());
  }
  s.validate();
  return s;
}

SuiteSpec load_suite(std::string_view name_or_path) {
  const auto names = builtin_suite_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_suite(name_or_path);
  std::ifstream in{std::string(name_or_path)};
  if (!in) throw ConfigError("'" + std::string(name_or_path) + "' is neither a builtin suite nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

SceneSpec suite_scene(const SuiteSpec& suite, int index) {
  const std::uint64_t seed = mix_seed(suite.seed, static_cast<std::uint64_t>(index));
  Rng rng(mix_seed(seed, 0x726f6f6d73ULL));
  const int rooms = suite.min_rooms + static_cast<int>(rng.below(static_cast<std::uint64_t>(suite.max_rooms - suite.min_rooms) + 1));
  return {seed, rooms};
}

BenchmarkReport run_suite(const SuiteSpec& suite, const RunOptions& options) {
  suite.validate();
  const int total = options.episodes > 0 ? options.episodes : suite.scenes * suite.episodes_per_scene;
  if (total <= 0) throw ConfigError("suite '" + suite.name + "' has no episodes to run");

  // Episode e runs on scene (e / episodes_per_scene) mod scenes.
  std::vector<std::vector<int>> by_scene(suite.scenes);
  for (int e = 0; e < total; ++e) by_scene[(e / suite.episodes_per_scene) % suite.scenes].push_back(e);

  struct Outcome {
    std::optional<EpisodeRecord> record;
    std::uint64_t steps = 0;
  };
  std::vector<Outcome> outcomes(total);
  std::atomic<int> next_scene{0};

  auto worker = [&]() {
    for (int s = next_scene++; s < suite.scenes; s = next_scene++) {
      if (by_scene[s].empty()) continue;
      const SceneSpec scene = suite_scene(suite, s);
      std::unique_ptr<Simulation> sim;
      try {
        EpisodeConfig ep = suite.episode;
        World world = World::build(generate_house(scene.seed, scene.rooms, suite.furnished), options.agent,
                                   ep.grid_resolution);
        ep.house_id = world.house->id;
        sim = std::make_unique<Simulation>(std::move(world), options.agent, policy_sensors(), ep);
      } catch (const GenerationError&) {
        continue;  // every episode of this scene stays an error
      }
      for (const int e : by_scene[s]) {
        const std::uint64_t seed = trial_seed(scene.seed, e);
        Observation obs;
        try {
          obs = sim->reset(seed);
        } catch (const GoalError&) {
          continue;
        }
        auto policy = make_policy(options.policy, mix_seed(options.policy_seed, static_cast<std::uint64_t>(e)));
        while (!sim->done()) obs = sim->step(policy->act(obs)).observation;
        const EpisodeResult r = sim->result();
        outcomes[e].record = EpisodeRecord{sim->episode_config().house_id, seed, describe(suite.episode.goal),
                                           r.success, r.steps_taken, r.speed};
        outcomes[e].steps = static_cast<std::uint64_t>(r.steps_taken);
      }
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  const int jobs = std::clamp(options.jobs, 1, 256);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < jobs; ++k) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  const auto t1 = std::chrono::steady_clock::now();

  BenchmarkReport report;
  std::vector<EpisodeResult> results;
  std::size_t errors = 0;
  for (const Outcome& o : outcomes) {
    if (!o.record) {
      ++errors;
      continue;
    }
    report.records.push_back(*o.record);
    results.push_back(o.record->result());
    report.steps += o.steps;
  }
  ReportRow row{suite.name, suite.dataset, suite.clutter(), suite.size(), std::string(to_string(options.policy))};
  if (!results.empty()) {
    const Metrics m = aggregate(results);
    row.success = m.success_rate;
    row.speed = m.mean_speed;
  }
  row.episodes = results.size();
  row.errors = errors;
  report.rows.push_back(row);
  report.seconds = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

std::string format_table(const BenchmarkReport& report) {
  const std::vector<std::string> headers = {"suite", "dataset", "clutter", "size", "policy",
                                            "episodes", "errors", "success %", "speed %"};
  std::vector<std::vector<std::string>> cells;
  auto fixed = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << v;
    return os.str();
  };
  for (const auto& r : report.rows) {
    cells.push_back({r.suite, r.dataset, r.clutter, r.size, r.policy, std::to_string(r.episodes),
                     std::to_string(r.errors), fixed(r.success), fixed(r.speed)});
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      // Numeric columns right-aligned.
      if (c >= 5) os << std::setw(static_cast<int>(width[c])) << std::right << row[c];
      else os << std::setw(static_cast<int>(width[c])) << std::left << row[c];
      os << (c + 1 < row.size() ? "  " : "\n");
    }
  };
  line(headers);
  std::size_t total = 0;
  for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c + 1 < width.size() ? 2 : 0);
  os << std::string(total, '-') << "\n";
  for (const auto& row : cells) line(row);
  os << "steps: " << report.steps << "  seconds: " << fixed(report.seconds)
     << "  steps/s: " << fixed(report.steps_per_second()) << "\n";
  return os.str();
}

std::string report_json(const BenchmarkReport& report, bool include_runtime) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"suite", r.suite},
                        {"dataset", r.dataset},
                        {"clutter", r.clutter},
                        {"size", r.size},
                        {"policy", r.policy},
                        {"episodes", r.episodes},
                        {"errors", r.errors},
                        {"success", r.success},
                        {"speed", r.speed}});
  }
  Json j{{"rows", rows}};
  if (include_runtime) {
    j["runtime"] = {{"steps", report.steps}, {"seconds", report.seconds}, {"steps_per_second", report.steps_per_second()}};
  }
  return j.dump(2);
}

double fps_bench(const FpsOptions& options) {
  if (options.steps < 1000) throw ConfigError("fps benchmark needs at least 1000 steps");
  World world = World::build(generate_house(options.seed, options.rooms, options.furnished), options.agent);
  EpisodeConfig ep;
  ep.house_id = world.house->id;
  ep.seed = options.seed;
  Simulation sim(std::move(world), options.agent, options.sensors, ep);
  auto policy = make_policy(PolicyKind::random, options.seed);

  std::uint64_t episode = 0;
  Observation obs = sim.reset(trial_seed(options.seed, static_cast<int>(episode)));
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < options.steps; ++k) {
    if (sim.done()) obs = sim.reset(trial_seed(options.seed, static_cast<int>(++episode)));
    obs = sim.step(policy->act(obs)).observation;
  }
  const auto t1 = std::chrono::steady_clock::now();
  return options.steps / std::chrono::duration<double>(t1 - t0).count();
}

std::vector<SensorSpec> parse_sensor_list(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("sensor config is not JSON: ") + e.what());
  }
  if (j.is_object()) {
    if (!j.contains("sensors")) throw ConfigError("sensor config object needs a 'sensors' array");
    j = j.at("sensors");
  }
  if (!j.is_array() || j.empty()) throw ConfigError("sensor config must be a non-empty array");
  std::vector<SensorSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_sensor(j[i], i));
  return out;
}

}  // namespace navsim
