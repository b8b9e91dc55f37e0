#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "navsim/protocol.hpp"

namespace navsim {

struct ServerOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  std::filesystem::path scene_dir;
  std::uint64_t default_seed = 0;
};

// WebSocket session server. Each connection owns one Session and runs on its
// own thread; sessions share only the read-only scene cache.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting in the background. Throws Error when the
  // address cannot be bound.
  void start();
  // Stops accepting, closes live connections and joins all threads.
  void stop();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();

  unsigned short port() const;
  const std::string& host() const { return options_.host; }

 private:
  struct Impl;
  ServerOptions options_;
  std::unique_ptr<Impl> impl_;
};

// Blocking WebSocket client speaking the wire protocol.
class Client {
 public:
  Client(const std::string& host, unsigned short port);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  // Sends one text frame and returns the reply text.
  std::string request(const std::string& text);
  Json request(const Json& msg);

  void disconnect();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Plays a transcript (hello, configure, reset, steps, close) and returns every
// reply payload in order.
std::vector<std::string> replay_transcript(Client& client, const Transcript& t);
// Same, against an in-process session.
std::vector<std::string> replay_transcript(Session& session, const Transcript& t);

// FNV-1a over the payloads, each followed by a newline. Stable across runs.
std::uint64_t payload_digest(const std::vector<std::string>& payloads);

// Splits "host:port". Throws ConfigError when malformed.
std::pair<std::string, unsigned short> parse_bind_address(std::string_view address);

}  // namespace navsim
