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

#include "vdb/bridge/orchestrator.hpp"

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <memory>
#include <mutex>
#include <variant>

#include "vdb/api/messages.hpp"
#include "vdb/api/server.hpp"
#include "vdb/diff/diff.hpp"
#include "vdb/graph/builder.hpp"
#include "vdb/history/history_store.hpp"
#include "vdb/log.hpp"

namespace vdb::bridge {

namespace {

using nlohmann::json;
using namespace std::chrono_literals;

struct SessionNotice {};
struct ClientCommand {
  api::ClientId client;
  json doc;
};
using Input = std::variant<SessionNotice, ClientCommand>;

// Everything the debug pipeline reacts to, in arrival order.
class InputQueue {
 public:
  void push(Input input) {
    {
      std::lock_guard lock(mutex_);
      items_.push_back(std::move(input));
    }
    cv_.notify_one();
  }

  std::optional<Input> pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, timeout, [&] { return !items_.empty(); })) {
      return std::nullopt;
    }
    auto out = std::move(items_.front());
    items_.pop_front();
    return out;
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Input> items_;
};

class Orchestrator {
 public:
  Orchestrator(const BridgeConfig& config, const RunHooks& hooks)
      : config_(config), hooks_(hooks), history_(config.history) {
    view_.depth = config.depth;
    view_.history = config.history;
  }

  int run() {
    api::ServerOptions server_options;
    server_options.bind_address = config_.bind_address;
    server_options.port = config_.port;
    server_options.ui_dir = config_.ui_dir;
    server_ = std::make_unique<api::Server>(
        server_options, [this](api::ClientId client, json doc) {
          inputs_.push(ClientCommand{client, std::move(doc)});
        });
    server_->set_hello(api::make_hello(view_), false);
    try {
      server_->start();
    } catch (const api::BindError& e) {
      log().error("{}", e.what());
      return kExitBind;
    }
    std::printf("vdbridge listening on ws://%s:%u/\n", config_.bind_address.c_str(),
                static_cast<unsigned>(server_->port()));
    std::fflush(stdout);
    if (hooks_.on_listening) hooks_.on_listening(server_->port());

    dap::SessionOptions options;
    options.handshake_timeout = config_.handshake_timeout;
    options.request_timeout = config_.request_timeout;
    options.include_expensive = config_.include_expensive;
    options.on_event = [this] { inputs_.push(SessionNotice{}); };
    try {
      session_ = dap::Session::start(config_.adapter, config_.launch,
                                     config_.breakpoints, std::move(options));
    } catch (const dap::SessionError& e) {
      log().error("adapter failed to start: {}", e.what());
      return finish(kExitAdapter, api::make_error(api::ErrorCode::AdapterError,
                                                  e.what()));
    }

    while (!exit_code_) {
      if (hooks_.shutdown && hooks_.shutdown->load()) {
        log().info("shutdown requested");
        return finish(kExitOk, api::make_error(api::ErrorCode::Terminated,
                                               "bridge shutting down"));
      }
      if (session_->has_pending_event()) {
        handle_stop();
        continue;
      }
      auto input = inputs_.pop(200ms);
      if (!input) continue;
      if (auto* command = std::get_if<ClientCommand>(&*input)) {
        handle_command(*command);
      }
    }
    return *exit_code_;
  }

 private:
  int finish(int code, json notice) {
    server_->broadcast(std::move(notice));
    if (session_) session_->disconnect();
    server_->stop();
    exit_code_ = code;
    return code;
  }

  graph::BuildOptions build_options() const {
    graph::BuildOptions options;
    options.depth_limit = view_.depth;
    options.identity = config_.identity;
    options.null_literals = config_.null_literals;
    return options;
  }

  void report_adapter_error(const std::string& detail) {
    log().warn("{}", detail);
    server_->broadcast(api::make_error(api::ErrorCode::AdapterError, detail));
  }

  void handle_stop() {
    std::optional<dap::StopInfo> stop;
    try {
      stop = session_->await_stop(0ms);
    } catch (const dap::SessionError& e) {
      if (e.code() == dap::SessionErrc::Timeout) return;
      log().error("adapter connection lost: {}", e.what());
      finish(kExitAdapter, api::make_error(api::ErrorCode::AdapterError, e.what()));
      return;
    }
    if (!stop) {
      log().info("debuggee terminated");
      terminated_ = true;
      finish(kExitOk, api::make_error(api::ErrorCode::Terminated,
                                      "debuggee terminated"));
      return;
    }

    graph::ObjectGraph built;
    built.identity = config_.identity;
    if (stop->location) built.location = *stop->location;
    try {
      auto frame = session_->fetch_frame(*stop, config_.frame);
      built = graph::build_graph(frame.location, frame.scopes, *session_,
                                 build_options());
    } catch (const graph::PartialGraphError& e) {
      built = e.partial();
      report_adapter_error(std::string("incomplete graph: ") + e.what());
    } catch (const dap::SessionError& e) {
      if (e.code() != dap::SessionErrc::EmptyFrame) {
        report_adapter_error(std::string("frame unavailable: ") + e.what());
      }
    }

    auto graph = std::make_shared<const graph::ObjectGraph>(std::move(built));
    previous_stop_ = current_.graph;
    diff::ChangeSet changes;
    if (previous_stop_) changes = diff::diff(*previous_stop_, *graph);

    auto step_seq = history_.push(graph, changes, graph->location);
    current_ = history::HistoryEntry{0, graph, std::move(changes), graph->location,
                                     step_seq};
    server_->broadcast_snapshot(api::make_snapshot(current_, history_.length()));
  }

  void handle_command(const ClientCommand& command) {
    try {
      auto request = api::parse_request(command.doc);
      std::visit([&](const auto& r) { handle(command.client, r); }, request);
    } catch (const api::RequestError& e) {
      server_->send_to(command.client, api::make_error(e.code(), e.what()));
    }
  }

  void require_stopped() const {
    if (terminated_) {
      throw api::RequestError(api::ErrorCode::Terminated, "debuggee has terminated");
    }
    if (session_->state() != dap::SessionState::Stopped || !current_.graph) {
      throw api::RequestError(api::ErrorCode::NotStopped, "debuggee is running");
    }
  }

  void handle(api::ClientId, const api::LoadChildren& request) {
    require_stopped();
    const auto* node = current_.graph->find(request.node);
    if (!node) {
      throw api::RequestError(api::ErrorCode::UnknownNode,
                              "no node " + request.node.str());
    }
    if (node->expanded) {
      throw api::RequestError(api::ErrorCode::AlreadyExpanded,
                              request.node.str() + " is already expanded");
    }
    std::vector<dap::RawVariable> children;
    if (node->transient_ref > 0) {
      try {
        children = session_->fetch_children(node->transient_ref);
      } catch (const dap::SessionError& e) {
        throw api::RequestError(api::ErrorCode::AdapterError, e.what());
      }
    }
    auto merged = std::make_shared<const graph::ObjectGraph>(graph::merge_children(
        *current_.graph, request.node, children, build_options()));

    // Broadcast what the expansion revealed; the stored entry keeps its
    // change set relative to the previous stop.
    auto revealed = diff::diff(*current_.graph, *merged);
    diff::ChangeSet since_stop;
    if (previous_stop_) since_stop = diff::diff(*previous_stop_, *merged);
    history_.amend_current(merged, since_stop);

    history::HistoryEntry shown{0, merged, std::move(revealed), current_.location,
                                current_.step_seq};
    server_->broadcast_snapshot(api::make_snapshot(shown, history_.length()));
    current_.graph = merged;
    current_.changes = std::move(since_stop);
  }

  void handle(api::ClientId client, const api::GetHistory& request) {
    if (request.index == 0) {
      if (!current_.graph) {
        throw api::RequestError(api::ErrorCode::Range, "no snapshot yet");
      }
      server_->send_to(client, api::make_history(current_, history_.length()));
      return;
    }
    try {
      server_->send_to(client, api::make_history(history_.get(request.index),
                                                 history_.length()));
    } catch (const history::HistoryRangeError& e) {
      throw api::RequestError(api::ErrorCode::Range, e.what());
    }
  }

  void handle(api::ClientId, const api::Step& request) {
    require_stopped();
    try {
      session_->step(request.kind);
    } catch (const dap::SessionError& e) {
      throw api::RequestError(api::ErrorCode::AdapterError, e.what());
    }
  }

  void handle(api::ClientId, const api::SetConfig& request) {
    if (request.depth) view_.depth = *request.depth;
    if (request.history) {
      view_.history = *request.history;
      history_.set_capacity(*request.history);
    }
    server_->set_hello(api::make_hello(view_), true);
  }

  const BridgeConfig& config_;
  const RunHooks& hooks_;
  api::ViewConfig view_;
  history::HistoryStore history_;
  InputQueue inputs_;
  std::unique_ptr<api::Server> server_;
  std::unique_ptr<dap::Session> session_;
  history::HistoryEntry current_;
  std::shared_ptr<const graph::ObjectGraph> previous_stop_;
  bool terminated_ = false;
  std::optional<int> exit_code_;
};

}  // namespace

int run(const BridgeConfig& config, const RunHooks& hooks) {
  Orchestrator orchestrator(config, hooks);
  return orchestrator.run();
}

}  // namespace vdb::bridge
