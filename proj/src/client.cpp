#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "navsim/server.hpp"

namespace navsim {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct Client::Impl {
  net::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};
  beast::flat_buffer buffer;
};

Client::Client(const std::string& host, unsigned short port) : impl_(std::make_unique<Impl>()) {
  try {
    tcp::resolver resolver(impl_->ioc);
    net::connect(impl_->ws.next_layer(), resolver.resolve(host, std::to_string(port)));
    impl_->ws.next_layer().set_option(tcp::no_delay(true));
    impl_->ws.handshake(host + ":" + std::to_string(port), "/");
    impl_->ws.text(true);
  } catch (const beast::system_error& e) {
    throw Error("cannot connect to " + host + ":" + std::to_string(port) + ": " + e.code().message());
  }
}

Client::~Client() { disconnect(); }

std::string Client::request(const std::string& text) {
  try {
    impl_->ws.write(net::buffer(text));
    impl_->buffer.consume(impl_->buffer.size());
    impl_->ws.read(impl_->buffer);
    return beast::buffers_to_string(impl_->buffer.data());
  } catch (const beast::system_error& e) {
    throw Error("connection failed: " + e.code().message());
  }
}

Json Client::request(const Json& msg) { return Json::parse(request(msg.dump())); }

void Client::disconnect() {
  if (!impl_ || !impl_->ws.is_open()) return;
  beast::error_code ec;
  impl_->ws.close(websocket::close_code::normal, ec);
}

namespace {

template <typename Send>
std::vector<std::string> replay(Send&& send, const Transcript& t) {
  std::vector<std::string> out;
  out.push_back(send(Json{{"type", "hello"}, {"version", kProtocolVersion}}.dump()));
  out.push_back(send(Json{{"type", "configure"}, {"config", t.config}}.dump()));
  out.push_back(send(Json{{"type", "reset"}, {"seed", t.seed}}.dump()));
  for (const auto& a : t.actions) out.push_back(send(Json{{"type", "step"}, {"action", a}}.dump()));
  out.push_back(send(Json{{"type", "close"}}.dump()));
  return out;
}

}  // namespace

std::vector<std::string> replay_transcript(Client& client, const Transcript& t) {
  return replay([&](const std::string& text) { return client.request(text); }, t);
}

std::vector<std::string> replay_transcript(Session& session, const Transcript& t) {
  return replay([&](const std::string& text) { return session.handle(std::string_view(text)); }, t);
}

std::uint64_t payload_digest(const std::vector<std::string>& payloads) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& p : payloads) {
    for (const char c : p) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

}  // namespace navsim
