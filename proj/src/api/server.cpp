// Copyright 2026 The vdbridge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vdb/api/server.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "vdb/api/messages.hpp"
#include "vdb/log.hpp"

namespace vdb::api {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

using Payload = std::shared_ptr<const std::string>;

constexpr std::string_view kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\">"
    "<title>vdbridge</title></head><body>\n"
    "<h1>vdbridge</h1>\n<p>The visual debugging API is served over WebSocket "
    "on this port. Start the bridge with <code>--ui-dir</code> to serve a "
    "viewer from this address.</p>\n</body></html>\n";

}  // namespace

class WsConnection;

struct Server::Impl {
  Impl(ServerOptions o, MessageHandler h)
      : options(std::move(o)), on_message(std::move(h)) {}

  ServerOptions options;
  MessageHandler on_message;

  asio::io_context io;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  tcp::acceptor acceptor{io};
  std::thread thread;
  std::atomic<std::uint16_t> bound_port{0};
  std::atomic<std::size_t> connected{0};
  std::atomic<bool> running{false};

  // Touched on the I/O thread only.
  std::map<ClientId, std::shared_ptr<WsConnection>> clients;
  ClientId next_id = 1;
  std::uint64_t seq = 0;
  Payload hello = std::make_shared<const std::string>(make_hello({}).dump());
  Payload retained;
  bool stopping = false;

  Payload stamp(json message) {
    message["seq"] = ++seq;
    return std::make_shared<const std::string>(message.dump());
  }

  void do_accept();
  void join(const std::shared_ptr<WsConnection>& conn);
  void leave(ClientId id);
  void fan_out(const Payload& payload);
  http::response<http::string_body> handle_http(
      const http::request<http::string_body>& req) const;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, Server::Impl& server, ClientId id)
      : ws_(std::move(socket)), server_(server), id_(id) {}

  ClientId id() const { return id_; }

  void run(http::request<http::string_body> req) {
    ws_.set_option(
        websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        log().debug("websocket handshake failed: {}", ec.message());
        return;
      }
      self->server_.join(self);
      self->do_read();
    });
  }

  void enqueue(const Payload& payload) {
    if (closing_) return;
    if (queue_.size() >= server_.options.queue_limit) {
      log().warn("client {} fell {} messages behind; disconnecting", id_,
                 queue_.size());
      force_close();
      return;
    }
    queue_.push_back(payload);
    if (!writing_) do_write();
  }

  void close_when_drained() {
    drain_then_close_ = true;
    if (!writing_) do_close();
  }

 private:
  void do_write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(asio::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->on_write(ec);
                    });
  }

  void on_write(beast::error_code ec) {
    writing_ = false;
    if (closing_) {
      queue_.clear();
      return;
    }
    if (ec) {
      log().debug("write to client {} failed: {}", id_, ec.message());
      force_close();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      do_write();
    } else if (drain_then_close_) {
      do_close();
    }
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec,
                                                        std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      if (ec != websocket::error::closed) {
        log().debug("read from client {} ended: {}", id_, ec.message());
      }
      server_.leave(id_);
      return;
    }
    auto text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    auto doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
      enqueue(server_.stamp(make_error(ErrorCode::BadRequest, "frame is not JSON")));
    } else if (server_.on_message && !server_.stopping) {
      server_.on_message(id_, std::move(doc));
    }
    do_read();
  }

  void do_close() {
    if (closing_) return;
    closing_ = true;
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {
                      self->server_.leave(self->id_);
                    });
  }

  void force_close() {
    closing_ = true;
    // The frame in flight must outlive its async_write.
    queue_.erase(writing_ ? std::next(queue_.begin()) : queue_.begin(), queue_.end());
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both,
                                                   ignored);
    beast::get_lowest_layer(ws_).socket().close(ignored);
    server_.leave(id_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl& server_;
  ClientId id_;
  beast::flat_buffer buffer_;
  std::deque<Payload> queue_;
  bool writing_ = false;
  bool closing_ = false;
  bool drain_then_close_ = false;
};

namespace {

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Server::Impl& server)
      : stream_(std::move(socket)), server_(server) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec == http::error::end_of_stream) return shutdown();
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (server_.stopping) return shutdown();
      stream_.expires_never();
      auto conn = std::make_shared<WsConnection>(stream_.release_socket(), server_,
                                                 server_.next_id++);
      conn->run(std::move(req_));
      return;
    }
    res_ = std::make_shared<http::response<http::string_body>>(
        server_.handle_http(req_));
    http::async_write(stream_, *res_,
                      [self = shared_from_this()](beast::error_code wec, std::size_t) {
                        if (wec || self->res_->need_eof()) return self->shutdown();
                        self->do_read();
                      });
  }

  void shutdown() {
    beast::error_code ignored;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
  }

  beast::tcp_stream stream_;
  Server::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<http::response<http::string_body>> res_;
};

}  // namespace

void Server::Impl::do_accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != asio::error::operation_aborted) {
        log().warn("accept failed: {}", ec.message());
      }
      if (!acceptor.is_open()) return;
    } else {
      std::make_shared<HttpSession>(std::move(socket), *this)->run();
    }
    if (!stopping) do_accept();
  });
}

void Server::Impl::join(const std::shared_ptr<WsConnection>& conn) {
  if (stopping) {
    conn->close_when_drained();
    return;
  }
  clients.emplace(conn->id(), conn);
  connected = clients.size();
  log().info("client {} connected ({} total)", conn->id(), clients.size());
  conn->enqueue(hello);
  if (retained) conn->enqueue(retained);
}

void Server::Impl::leave(ClientId id) {
  if (clients.erase(id) > 0) {
    connected = clients.size();
    log().info("client {} disconnected ({} left)", id, clients.size());
  }
}

void Server::Impl::fan_out(const Payload& payload) {
  // enqueue() may drop a client from the map, so iterate over a copy.
  auto targets = clients;
  for (auto& [id, conn] : targets) conn->enqueue(payload);
}

http::response<http::string_body> Server::Impl::handle_http(
    const http::request<http::string_body>& req) const {
  auto respond = [&](http::status status, std::string_view type, std::string body) {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::server, "vdbridge");
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(req.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    if (req.method() == http::verb::head) res.body().clear();
    return res;
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return respond(http::status::method_not_allowed, "text/plain", "GET only\n");
  }
  std::string_view target(req.target().data(), req.target().size());
  if (options.ui_dir) {
    if (auto file = resolve_static(*options.ui_dir, target)) {
      std::ifstream in(*file, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      return respond(http::status::ok, mime_type(*file), body.str());
    }
  }
  auto path = target.substr(0, target.find('?'));
  if (path == "/" || path == "/index.html") {
    return respond(http::status::ok, "text/html; charset=utf-8",
                   std::string(kPlaceholderPage));
  }
  return respond(http::status::not_found, "text/plain", "not found\n");
}

Server::Server(ServerOptions options, MessageHandler on_message)
    : impl_(std::make_unique<Impl>(std::move(options), std::move(on_message))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& d = *impl_;
  beast::error_code ec;
  auto address = asio::ip::make_address(d.options.bind_address, ec);
  if (ec) throw BindError("invalid bind address '" + d.options.bind_address + "'");
  tcp::endpoint endpoint(address, d.options.port);
  auto check = [&](const char* what) {
    if (ec) {
      throw BindError(std::string(what) + " " + d.options.bind_address + ":" +
                      std::to_string(d.options.port) + ": " + ec.message());
    }
  };
  d.acceptor.open(endpoint.protocol(), ec);
  check("cannot open");
  d.acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  d.acceptor.bind(endpoint, ec);
  check("cannot bind");
  d.acceptor.listen(asio::socket_base::max_listen_connections, ec);
  check("cannot listen on");
  d.bound_port = d.acceptor.local_endpoint().port();
  d.work.emplace(d.io.get_executor());
  d.do_accept();
  d.running = true;
  d.thread = std::thread([&d] { d.io.run(); });
}

std::uint16_t Server::port() const { return impl_->bound_port; }

std::size_t Server::client_count() const { return impl_->connected; }

void Server::set_hello(nlohmann::json hello, bool rebroadcast) {
  asio::post(impl_->io, [d = impl_.get(), hello = std::move(hello), rebroadcast] {
    d->hello = std::make_shared<const std::string>(hello.dump());
    if (rebroadcast) d->fan_out(d->hello);
  });
}

void Server::broadcast(nlohmann::json message) {
  asio::post(impl_->io, [d = impl_.get(), message = std::move(message)] {
    d->fan_out(d->stamp(message));
  });
}

void Server::broadcast_snapshot(nlohmann::json message) {
  asio::post(impl_->io, [d = impl_.get(), message = std::move(message)] {
    d->retained = d->stamp(message);
    d->fan_out(d->retained);
  });
}

void Server::send_to(ClientId client, nlohmann::json message) {
  asio::post(impl_->io, [d = impl_.get(), client, message = std::move(message)] {
    auto it = d->clients.find(client);
    if (it != d->clients.end()) it->second->enqueue(d->stamp(message));
  });
}

void Server::stop() {
  auto& d = *impl_;
  if (!d.running.exchange(false)) return;
  asio::post(d.io, [&d] {
    d.stopping = true;
    beast::error_code ignored;
    d.acceptor.close(ignored);
    auto targets = d.clients;
    for (auto& [id, conn] : targets) conn->close_when_drained();
  });
  const auto deadline = std::chrono::steady_clock::now() + d.options.drain_timeout;
  while (d.connected > 0 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  d.work.reset();
  d.io.stop();
  if (d.thread.joinable()) d.thread.join();
  d.clients.clear();
}

std::string_view mime_type(const std::filesystem::path& file) {
  static const std::map<std::string, std::string_view> types = {
      {".html", "text/html; charset=utf-8"},
      {".htm", "text/html; charset=utf-8"},
      {".js", "text/javascript; charset=utf-8"},
      {".mjs", "text/javascript; charset=utf-8"},
      {".css", "text/css; charset=utf-8"},
      {".json", "application/json"},
      {".svg", "image/svg+xml"},
      {".png", "image/png"},
      {".ico", "image/x-icon"},
      {".map", "application/json"},
      {".txt", "text/plain; charset=utf-8"},
  };
  auto it = types.find(file.extension().string());
  return it == types.end() ? "application/octet-stream" : it->second;
}

std::optional<std::filesystem::path> resolve_static(
    const std::filesystem::path& root, std::string_view target) {
  auto path = target.substr(0, target.find_first_of("?#"));
  if (path.empty() || path.front() != '/') return std::nullopt;
  std::filesystem::path relative;
  std::size_t pos = 1;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    auto segment = path.substr(pos, next - pos);
    if (segment == ".." || segment.find_first_of(std::string_view("\\\0", 2)) !=
                                std::string_view::npos) {
      return std::nullopt;
    }
    if (!segment.empty() && segment != ".") relative /= std::string(segment);
    pos = next + 1;
  }
  auto full = root / relative;
  std::error_code ec;
  if (std::filesystem::is_directory(full, ec)) full /= "index.html";
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

}  // namespace vdb::api
