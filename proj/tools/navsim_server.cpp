// Session server: one simulator per WebSocket connection.
#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "navsim/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"navsim session server"};
  std::string bind = "127.0.0.1:8765";
  std::string scene_dir;
  std::string log_level = "info";
  app.add_option("--bind", bind, "host:port to listen on (port 0 picks a free port)");
  app.add_option("--scene-dir", scene_dir, "directory that scene paths in configure messages resolve against");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  CLI11_PARSE(app, argc, argv);

  spdlog::set_default_logger(spdlog::stderr_color_mt("navsim"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    const auto [host, port] = navsim::parse_bind_address(bind);
    navsim::ServerOptions options;
    options.host = host;
    options.port = port;
    options.scene_dir = scene_dir;
    options.default_seed = navsim::env_default_seed();
    navsim::Server server(options);
    server.start();
    std::cout << "listening on " << host << ":" << server.port() << std::endl;

    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, shutting down", sig);
    server.stop();
  } catch (const navsim::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
