#include "navsim/server.hpp"

#include <sys/socket.h>

#include <condition_variable>
#include <list>
#include <mutex>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

namespace navsim {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

struct Connection {
  int fd = -1;
  std::thread thread;
  std::atomic<bool> finished{false};
};

void serve_connection(tcp::socket socket, std::string session_id, std::shared_ptr<SceneCache> scenes,
                      std::uint64_t default_seed) {
  beast::error_code nodelay_ec;
  socket.set_option(tcp::no_delay(true), nodelay_ec);
  websocket::stream<tcp::socket> ws(std::move(socket));
  Session session(session_id, std::move(scenes), default_seed);
  try {
    ws.accept();
    spdlog::info("session {} opened", session_id);
    beast::flat_buffer buffer;
    while (true) {
      ws.read(buffer);
      std::string reply;
      if (!ws.got_text()) {
        reply = error_message(codes::bad_message, "binary frames are not accepted").dump();
      } else {
        const std::string text = beast::buffers_to_string(buffer.data());
        spdlog::debug("session {} <- {}", session_id, text.substr(0, 200));
        reply = session.handle(text);
      }
      buffer.consume(buffer.size());
      ws.text(true);
      ws.write(net::buffer(reply));
      if (session.state() == Session::State::closed) {
        ws.close(websocket::close_code::normal);
        break;
      }
    }
  } catch (const beast::system_error& e) {
    if (e.code() != websocket::error::closed) spdlog::debug("session {} transport: {}", session_id, e.code().message());
  } catch (const std::exception& e) {
    spdlog::error("session {} failed: {}", session_id, e.what());
  }
  spdlog::info("session {} ended", session_id);
}

}  // namespace

struct Server::Impl {
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::thread io_thread;
  std::shared_ptr<SceneCache> scenes;
  std::uint64_t next_session = 1;

  std::mutex mutex;
  std::condition_variable stopped_cv;
  bool stopped = false;
  std::list<std::shared_ptr<Connection>> connections;

  std::uint64_t default_seed = 0;

  void accept_next() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec != net::error::operation_aborted) spdlog::warn("accept failed: {}", ec.message());
        if (!acceptor.is_open()) return;
        accept_next();
        return;
      }
      launch(std::move(socket));
      accept_next();
    });
  }

  void launch(tcp::socket socket) {
    std::lock_guard lock(mutex);
    connections.remove_if([](const std::shared_ptr<Connection>& c) {
      if (!c->finished) return false;
      c->thread.join();
      return true;
    });
    if (stopped) return;
    auto conn = std::make_shared<Connection>();
    conn->fd = socket.native_handle();
    const std::string id = std::to_string(next_session++);
    conn->thread = std::thread([conn, id, s = std::move(socket), scenes = scenes, seed = default_seed]() mutable {
      serve_connection(std::move(s), id, scenes, seed);
      conn->finished = true;
    });
    connections.push_back(std::move(conn));
  }
};

Server::Server(ServerOptions options) : options_(std::move(options)), impl_(std::make_unique<Impl>()) {
  impl_->scenes = std::make_shared<SceneCache>(options_.scene_dir);
  impl_->default_seed = options_.default_seed;
}

Server::~Server() { stop(); }

void Server::start() {
  beast::error_code ec;
  const auto address = net::ip::make_address(options_.host, ec);
  if (ec) throw Error("bad bind host '" + options_.host + "': " + ec.message());
  const tcp::endpoint endpoint(address, options_.port);
  auto& acc = impl_->acceptor;
  acc.open(endpoint.protocol(), ec);
  if (!ec) acc.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acc.bind(endpoint, ec);
  if (!ec) acc.listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port) + ": " + ec.message());
  impl_->accept_next();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::stop() {
  if (!impl_) return;
  {
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopped) return;
    impl_->stopped = true;
  }
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->ioc.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();

  std::list<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(impl_->mutex);
    conns.swap(impl_->connections);
  }
  for (auto& c : conns) {
    if (!c->finished) ::shutdown(c->fd, SHUT_RDWR);
    if (c->thread.joinable()) c->thread.join();
  }
  impl_->stopped_cv.notify_all();
}

void Server::wait() {
  std::unique_lock lock(impl_->mutex);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

std::pair<std::string, unsigned short> parse_bind_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw ConfigError("bind address must look like host:port");
  const std::string host(address.substr(0, colon));
  const std::string port(address.substr(colon + 1));
  char* end = nullptr;
  const unsigned long p = std::strtoul(port.c_str(), &end, 10);
  if (port.empty() || *end != '\0' || p > 65535) throw ConfigError("bad port in bind address '" + std::string(address) + "'");
  return {host, static_cast<unsigned short>(p)};
}

}  // namespace navsim
