#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "navsim/protocol.hpp"
#include "navsim/rng.hpp"
#include "navsim/server.hpp"

namespace navsim {
namespace {

const std::filesystem::path kFixtures = NAVSIM_FIXTURE_DIR;

Json room_config() {
  return Json::parse(R"({
    "scene": {"path": "one_room.house.json"},
    "episode": {"goal": {"type": "point", "point": [2.0, 3.0], "success_radius": 0.5}, "seed": 4}
  })");
}

class SessionTest : public ::testing::Test {
 protected:
  std::shared_ptr<SceneCache> scenes_ = std::make_shared<SceneCache>(kFixtures);

  Json send(Session& s, const Json& msg) { return Json::parse(s.handle(msg.dump())); }
  Json hello(Session& s) { return send(s, {{"type", "hello"}, {"version", "1"}}); }
  Json configure(Session& s, const Json& cfg = room_config()) { return send(s, {{"type", "configure"}, {"config", cfg}}); }
  Json reset(Session& s, std::optional<std::uint64_t> seed = std::nullopt) {
    Json m{{"type", "reset"}};
    if (seed) m["seed"] = *seed;
    return send(s, m);
  }
  Json step(Session& s, const std::string& action, int repeat = 1) {
    Json m{{"type", "step"}, {"action", action}};
    if (repeat != 1) m["repeat"] = repeat;
    return send(s, m);
  }
  Session running(std::uint64_t seed = 7) {
    Session s("t", scenes_);
    hello(s);
    configure(s);
    reset(s, seed);
    return s;
  }
};

const Json& entry(const Json& obs, std::string_view kind) {
  for (const Json& e : obs.at("observation")) {
    if (e.at("kind") == kind) return e;
  }
  throw std::runtime_error("missing entry");
}

TEST(Base64, RoundTrip) {
  Rng rng(1);
  for (int n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> data(n);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.below(256));
    EXPECT_EQ(decode_base64(encode_base64(data)), data);
  }
  EXPECT_EQ(encode_base64({'M', 'a', 'n'}), "TWFu");
  EXPECT_EQ(encode_base64({'M'}), "TQ==");
}

TEST_F(SessionTest, HandshakeAndLayout) {
  Session s("1", scenes_);
  const Json h = hello(s);
  EXPECT_EQ(h.at("type"), "ready");
  EXPECT_EQ(h.at("state"), "hello");
  EXPECT_EQ(h.at("session"), "1");
  EXPECT_EQ(h.at("version"), "1");
  const Json c = configure(s);
  EXPECT_EQ(c.at("state"), "configured");
  ASSERT_EQ(c.at("sensors").size(), 4u);
  EXPECT_EQ(c.at("sensors")[0].at("kind"), "color");
  EXPECT_EQ(c.at("sensors")[0].at("width"), 84);
  const Json r = reset(s, 7);
  EXPECT_EQ(r.at("type"), "observation");
  EXPECT_EQ(r.at("step"), 0);
  EXPECT_EQ(r.at("observation").size(), 4u);
  EXPECT_EQ(r.at("goal").at("type"), "point");
  EXPECT_EQ(send(s, {{"type", "close"}}).at("state"), "closed");
  EXPECT_EQ(s.state(), Session::State::closed);
}

TEST_F(SessionTest, PayloadMatchesSimulation) {
  Session s = running();
  const Json r = step(s, "turn_left");
  const Observation obs = s.simulation()->observe();
  const auto& color = std::get<CameraFrame>(obs[0].reading);
  EXPECT_EQ(decode_base64(entry(r, "color").at("data").get<std::string>()), color.buffer);
  const auto& m = std::get<Measurements>(obs[3].reading);
  EXPECT_EQ(entry(r, "measurements").at("dist_euclid").get<double>(), m.dist_euclid);
  EXPECT_EQ(entry(r, "contact").at("flags").size(), 4u);
}

TEST_F(SessionTest, TurnLeftShowsInMeasurements) {
  Session s = running();
  const Json before = entry(reset(s, 7), "measurements");
  const Json after = entry(step(s, "turn_left"), "measurements");
  EXPECT_NEAR(after.at("velocity")[1].get<double>(), 0.4 / 0.1, 1e-9);
  const double b = std::atan2(before.at("direction")[0].get<double>(), before.at("direction")[1].get<double>());
  const double a = std::atan2(after.at("direction")[0].get<double>(), after.at("direction")[1].get<double>());
  EXPECT_NEAR(std::remainder(a - b - 0.4, 2 * kPi), 0.0, 1e-9);
}

TEST_F(SessionTest, ResetWithSameSeedIsByteIdentical) {
  Session s = running();
  const std::string a = s.handle(R"({"type":"reset","seed":7})");
  step(s, "step_forward");
  const std::string b = s.handle(R"({"type":"reset","seed":7})");
  EXPECT_EQ(a, b);
  Session other = running(7);
  EXPECT_EQ(Json::parse(other.handle(R"({"type":"reset","seed":7})")).dump(), Json::parse(a).dump());
}

TEST_F(SessionTest, RepeatFiveStepsAdvancesOneMetre) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60 && checked < 3; ++seed) {
    Session s = running(seed);
    const Simulation& sim = *s.simulation();
    const AgentState start = sim.state();
    // Needs a clear metre ahead and no success on the way.
    bool clear = true;
    for (double d = 0.0; d <= 1.0 + 1e-9; d += 0.05) {
      const Vec2 p = start.position + heading(start.yaw) * d;
      clear = clear && sim.world().collision->clearance(p) > 0.1 + 1e-6 && sim.goal().distance(p) > 0.5;
    }
    if (!clear) continue;
    const Json r = step(s, "step_forward", 5);
    EXPECT_EQ(r.at("step"), 5);
    EXPECT_NEAR(length(sim.state().position - start.position), 1.0, 1e-9);
    EXPECT_NEAR(r.at("reward").get<double>(),
                sim.goal().distance(start.position) - sim.distance_to_goal() - 5.0 / 500.0, 1e-9);
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST_F(SessionTest, ErrorCodes) {
  Session s("e", scenes_);
  EXPECT_EQ(Json::parse(s.handle("{not json")).at("code"), "bad_message");
  EXPECT_EQ(Json::parse(s.handle("[1,2]")).at("code"), "bad_message");
  EXPECT_EQ(step(s, "step_forward").at("code"), "bad_state");
  EXPECT_EQ(s.state(), Session::State::connected);
  EXPECT_EQ(send(s, {{"type", "hello"}, {"version", "2"}}).at("code"), "bad_version");
  EXPECT_EQ(hello(s).at("type"), "ready");  // the session survived
  EXPECT_EQ(hello(s).at("code"), "bad_state");
  EXPECT_EQ(send(s, {{"type", "teleport"}}).at("code"), "bad_message");
  Json bad = room_config();
  bad["episode"]["colour"] = 1;
  EXPECT_EQ(configure(s, bad).at("code"), "bad_config");
  EXPECT_EQ(s.state(), Session::State::greeted);
  Json missing = room_config();
  missing["scene"]["path"] = "nope.house.json";
  EXPECT_EQ(configure(s, missing).at("code"), "bad_config");
  Json escape = room_config();
  escape["scene"]["path"] = "../fixtures/one_room.house.json";
  EXPECT_EQ(configure(s, escape).at("code"), "bad_config");
  Json kitchen = room_config();
  kitchen["episode"]["goal"] = Json{{"type", "room"}, {"room", "kitchen"}};
  EXPECT_EQ(configure(s, kitchen).at("type"), "ready");
  EXPECT_EQ(reset(s).at("code"), "unsatisfiable_goal");
  EXPECT_EQ(s.state(), Session::State::configured);
}

TEST_F(SessionTest, StepErrors) {
  Session s = running();
  EXPECT_EQ(step(s, "fly").at("code"), "unknown_action");
  EXPECT_EQ(send(s, {{"type", "step"}}).at("code"), "bad_message");
  EXPECT_EQ(send(s, {{"type", "step"}, {"action", "idle"}, {"repeat", 0}}).at("code"), "bad_message");
  EXPECT_EQ(send(s, {{"type", "step"}, {"action", "idle"}, {"repeat", 10001}}).at("code"), "bad_message");
  EXPECT_EQ(send(s, {{"type", "step"}, {"action", "idle"}, {"scale", -1}}).at("code"), "bad_message");
  EXPECT_EQ(send(s, {{"type", "reset"}, {"seed", "x"}}).at("code"), "bad_message");
  EXPECT_EQ(s.simulation()->steps(), 0);
  const Json last = step(s, "idle", 10000);
  EXPECT_TRUE(last.at("done").get<bool>());
  EXPECT_EQ(last.at("step"), 500);
  EXPECT_EQ(step(s, "idle").at("code"), "bad_state");
  EXPECT_EQ(reset(s, 1).at("type"), "observation");
}

// Random message sequences checked against an independent transition table.
TEST_F(SessionTest, StateMachineProperty) {
  enum M { kHello, kConfigure, kReset, kStep, kClose };
  Rng rng(31);
  for (int run = 0; run < 40; ++run) {
    Session s("p", scenes_);
    int model = 0;  // 0 connected, 1 greeted, 2 configured, 3 running, 4 closed
    for (int k = 0; k < 25; ++k) {
      const M m = static_cast<M>(rng.below(5));
      Json reply;
      int next = model;
      bool ok = false;
      switch (m) {
        case kHello: reply = hello(s); ok = model == 0; next = ok ? 1 : model; break;
        case kConfigure: reply = configure(s); ok = model == 1; next = ok ? 2 : model; break;
        case kReset: reply = reset(s, k); ok = model == 2 || model == 3; next = ok ? 3 : model; break;
        case kStep: reply = step(s, "turn_left"); ok = model == 3; break;
        case kClose: reply = send(s, {{"type", "close"}}); ok = model != 4; next = 4; break;
      }
      if (ok) {
        EXPECT_NE(reply.at("type"), "error") << reply.dump();
      } else {
        EXPECT_EQ(reply.at("code"), "bad_state") << reply.dump();
      }
      model = next;
      EXPECT_EQ(static_cast<int>(s.state()), model);
    }
  }
}

TEST_F(SessionTest, ConcurrentSessionsAgree) {
  auto run = [&](std::vector<std::string>& out) {
    Session s(out.empty() ? "a" : "b", scenes_);
    Transcript t;
    t.config = room_config();
    t.seed = 9;
    for (int k = 0; k < 40; ++k) t.actions.push_back(k % 3 == 0 ? "turn_right" : "step_forward");
    out = replay_transcript(s, t);
  };
  std::vector<std::string> a, b{"x"};
  std::thread ta([&] { run(a); });
  std::thread tb([&] { run(b); });
  ta.join();
  tb.join();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    Json ja = Json::parse(a[k]), jb = Json::parse(b[k]);
    ja.erase("session");
    jb.erase("session");
    EXPECT_EQ(ja.dump(), jb.dump());
  }
}

TEST_F(SessionTest, TranscriptReplayIsStable) {
  Transcript t;
  t.config = room_config();
  t.config["scene"] = Json{{"generate", {{"seed", 5}, {"rooms", 2}, {"furnished", true}}}};
  t.config["episode"] = Json{{"max_steps", 50}};
  t.seed = 12;
  const char* actions[] = {"step_forward", "turn_left", "look_up", "strafe_right", "step_back", "look_down"};
  for (int k = 0; k < 30; ++k) t.actions.push_back(actions[k % 6]);
  const Transcript back = parse_transcript(Json::parse(to_json(t).dump()));
  EXPECT_EQ(back.actions, t.actions);
  EXPECT_EQ(back.seed, t.seed);
  Session s1("1", scenes_), s2("1", std::make_shared<SceneCache>(kFixtures));
  const auto p1 = replay_transcript(s1, t);
  const auto p2 = replay_transcript(s2, back);
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(payload_digest(p1), payload_digest(p2));
  EXPECT_EQ(p1.size(), t.actions.size() + 4);
  EXPECT_THROW(parse_transcript(Json{{"seed", 1}}), ParseError);
}

TEST(Config, RoundTripAndStrictness) {
  const Json j = Json::parse(R"({
    "scene": {"generate": {"seed": 3, "rooms": 2, "furnished": true}},
    "variation": {"retexture_seed": 4, "remove_categories": ["chair"]},
    "agent": {"radius": 0.2, "preset": "continuous"},
    "sensors": [{"name": "d", "kind": "depth", "resolution": [32, 16], "depth_range": [0.1, 5.0], "encoding": "float"}],
    "episode": {"goal": {"type": "object", "category": "door", "select": "closest"}, "max_steps": 100, "grid_resolution": 0.1}
  })");
  const SessionConfig c = parse_session_config(j);
  EXPECT_EQ(c.scene.seed, 3u);
  EXPECT_EQ(c.scene.rooms, 2);
  EXPECT_TRUE(c.scene.furnished);
  EXPECT_EQ(c.agent.radius, 0.2);
  EXPECT_EQ(c.agent.preset, ControlPreset::continuous);
  ASSERT_EQ(c.sensors.size(), 1u);
  EXPECT_EQ(c.sensors[0].width, 32);
  EXPECT_EQ(c.sensors[0].far, 5.0);
  EXPECT_EQ(c.sensors[0].encoding, Encoding::float32);
  EXPECT_EQ(std::get<ObjectGoal>(c.episode.goal).select, InstanceSelect::closest);
  const SessionConfig again = parse_session_config(to_json(c));
  EXPECT_EQ(to_json(again).dump(), to_json(c).dump());
  EXPECT_THROW(parse_session_config(Json::parse(R"({"agent": {"radius": -1}})")), ConfigError);
  EXPECT_THROW(parse_session_config(Json::parse(R"({"sensors": [{"name": "x", "kind": "smell"}]})")), ConfigError);
  EXPECT_THROW(parse_session_config(Json::parse(R"({"sensors": [{"name": "x", "kind": "depth", "fov": 9}]})")),
               ConfigError);
  EXPECT_THROW(parse_session_config(Json::parse(R"({"extra": 1})")), ConfigError);
  EXPECT_EQ(parse_session_config(Json::object(), 77).episode.seed, 77u);
}

TEST(Config, SeedFromEnvironment) {
  ::setenv("NAVSIM_SEED", "1234", 1);
  EXPECT_EQ(env_default_seed(), 1234u);
  ::setenv("NAVSIM_SEED", "12x", 1);
  EXPECT_EQ(env_default_seed(), 0u);
  ::unsetenv("NAVSIM_SEED");
  EXPECT_EQ(env_default_seed(), 0u);
}

}  // namespace
}  // namespace navsim
