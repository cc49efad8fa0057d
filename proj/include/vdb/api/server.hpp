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

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace vdb::api {

using ClientId = std::uint64_t;

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8071;  // 0 = ephemeral
  std::optional<std::filesystem::path> ui_dir;
  std::size_t queue_limit = 64;  // per client; overflow disconnects it
  std::chrono::milliseconds drain_timeout{2000};
};

// WebSocket push channel plus static HTTP on one port.
//
// All sends are posted to a single I/O thread, which stamps a server-wide
// "seq" on every outbound message other than hello. A client that connects
// receives the current hello and then the retained snapshot, if any, with
// its original seq. Inbound text frames are parsed as JSON and passed to
// the handler on the I/O thread; the handler must not block.
class Server {
 public:
  using MessageHandler = std::function<void(ClientId, nlohmann::json)>;

  Server(ServerOptions options, MessageHandler on_message);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the I/O thread. Throws BindError.
  void start();

  std::uint16_t port() const;

  void set_hello(nlohmann::json hello, bool rebroadcast);
  void broadcast(nlohmann::json message);
  // Broadcasts and keeps the message for clients that join later.
  void broadcast_snapshot(nlohmann::json message);
  void send_to(ClientId client, nlohmann::json message);

  std::size_t client_count() const;

  // Flushes pending queues, closes every connection and joins the I/O
  // thread (bounded by drain_timeout). Idempotent.
  void stop();

  struct Impl;  // defined in server.cpp

 private:
  std::unique_ptr<Impl> impl_;
};

// Content type for a static file, by extension.
std::string_view mime_type(const std::filesystem::path& file);

// Maps a request target onto an existing file under `root`; nullopt for
// traversal attempts and missing files.
std::optional<std::filesystem::path> resolve_static(
    const std::filesystem::path& root, std::string_view target);

}  // namespace vdb::api
