// Replays a recorded session transcript and prints a digest of the replies.
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "navsim/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"replay a navsim session transcript"};
  std::string transcript_path;
  std::string connect;
  std::string scene_dir;
  std::string out;
  app.add_option("transcript", transcript_path, "transcript JSON {config, seed, actions}")->required();
  app.add_option("--connect", connect, "host:port of a running server; in-process when omitted");
  app.add_option("--scene-dir", scene_dir, "scene directory for in-process replay");
  app.add_option("--out", out, "write every reply payload, one per line");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(transcript_path);
    if (!in) throw navsim::Error("cannot open " + transcript_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const navsim::Transcript t = navsim::parse_transcript(navsim::Json::parse(ss.str()));

    std::vector<std::string> payloads;
    if (!connect.empty()) {
      const auto [host, port] = navsim::parse_bind_address(connect);
      navsim::Client client(host, port);
      payloads = navsim::replay_transcript(client, t);
    } else {
      navsim::Session session("1", std::make_shared<navsim::SceneCache>(scene_dir), navsim::env_default_seed());
      payloads = navsim::replay_transcript(session, t);
    }
    if (!out.empty()) {
      std::ofstream o(out);
      for (const auto& p : payloads) o << p << "\n";
    }
    std::cout << "payloads " << payloads.size() << " digest " << std::hex << std::setw(16) << std::setfill('0')
              << navsim::payload_digest(payloads) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "navsim-replay: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
