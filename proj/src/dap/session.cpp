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

#include "vdb/dap/session.hpp"

#include <array>
#include <map>

#include "vdb/log.hpp"

namespace vdb::dap {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::int64_t int_or(const json& doc, const char* key, std::int64_t fallback) {
  auto it = doc.find(key);
  return it != doc.end() && it->is_number_integer() ? it->get<std::int64_t>()
                                                     : fallback;
}

std::optional<std::string> string_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

SourceLocation location_of(const json& frame) {
  SourceLocation loc;
  if (auto src = frame.find("source"); src != frame.end() && src->is_object()) {
    loc.file = string_field(*src, "path")
                   .value_or(string_field(*src, "name").value_or(""));
  }
  if (loc.file.empty()) loc.file = "<unknown>";
  loc.line = std::max<std::int64_t>(1, int_or(frame, "line", 1));
  loc.method = string_field(frame, "name");
  return loc;
}

}  // namespace

std::string_view to_string(SessionErrc code) {
  switch (code) {
    case SessionErrc::Spawn:
      return "spawn";
    case SessionErrc::Handshake:
      return "handshake";
    case SessionErrc::Timeout:
      return "timeout";
    case SessionErrc::Rejected:
      return "rejected";
    case SessionErrc::Precondition:
      return "precondition";
    case SessionErrc::StaleReference:
      return "stale-reference";
    case SessionErrc::EmptyFrame:
      return "empty-frame";
    case SessionErrc::Closed:
      return "closed";
  }
  return "unknown";
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::Initializing:
      return "initializing";
    case SessionState::Configuring:
      return "configuring";
    case SessionState::Running:
      return "running";
    case SessionState::Stopped:
      return "stopped";
    case SessionState::Terminated:
      return "terminated";
  }
  return "unknown";
}

std::string_view to_command(StepKind kind) {
  switch (kind) {
    case StepKind::Next:
      return "next";
    case StepKind::StepIn:
      return "stepIn";
    case StepKind::StepOut:
      return "stepOut";
    case StepKind::Continue:
      return "continue";
  }
  return "next";
}

std::optional<StepKind> parse_step_kind(std::string_view name) {
  if (name == "next") return StepKind::Next;
  if (name == "stepIn") return StepKind::StepIn;
  if (name == "stepOut") return StepKind::StepOut;
  if (name == "continue") return StepKind::Continue;
  return std::nullopt;
}

AdapterSpec AdapterSpec::command_line(std::vector<std::string> argv) {
  AdapterSpec out;
  out.transport = Transport::ChildProcessStdio;
  out.command = std::move(argv);
  return out;
}

AdapterSpec AdapterSpec::tcp(std::string host, std::uint16_t port) {
  AdapterSpec out;
  out.transport = Transport::TcpSocket;
  out.host = std::move(host);
  out.port = port;
  return out;
}

Session::Session(std::unique_ptr<Transport> transport, SessionOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  reader_ = std::thread([this] { reader_loop(); });
}

Session::~Session() {
  disconnect();
  if (reader_.joinable()) reader_.join();
}

std::unique_ptr<Session> Session::start(
    const AdapterSpec& adapter, const LaunchRequest& launch,
    const std::vector<SourceBreakpoint>& breakpoints, SessionOptions options) {
  std::unique_ptr<Transport> transport;
  try {
    transport = adapter.transport == AdapterSpec::Transport::TcpSocket
                    ? connect_tcp(adapter.host, adapter.port)
                    : spawn_adapter(adapter.command);
  } catch (const TransportError& e) {
    throw SessionError(SessionErrc::Spawn, e.what());
  }
  std::unique_ptr<Session> session(
      new Session(std::move(transport), std::move(options)));
  session->handshake(launch, breakpoints);
  return session;
}

void Session::handshake(const LaunchRequest& launch,
                        const std::vector<SourceBreakpoint>& breakpoints) {
  const auto deadline = Clock::now() + options_.handshake_timeout;
  try {
    json init = {{"clientID", "vdbridge"},
                 {"clientName", "vdbridge"},
                 {"adapterID", options_.adapter_id},
                 {"linesStartAt1", true},
                 {"columnsStartAt1", true},
                 {"pathFormat", "path"},
                 {"supportsVariableType", true},
                 {"supportsMemoryReferences", true}};
    auto init_call = send_request("initialize", std::move(init));
    auto response = await_response(init_call, deadline);
    if (!response.success) {
      throw SessionError(SessionErrc::Handshake,
                         "adapter rejected initialize: " +
                             response.message.value_or("no reason given"));
    }
    if (response.body.is_object()) capabilities_ = response.body;
    set_state(SessionState::Configuring);

    const char* mode =
        launch.mode == LaunchRequest::Mode::Attach ? "attach" : "launch";
    auto launch_call = send_request(mode, launch.arguments);
    auto launch_ready = [&] {
      return launch_call.future.wait_for(std::chrono::seconds(0)) ==
             std::future_status::ready;
    };

    // Adapters may hold the launch response until configurationDone, so wait
    // for `initialized` or an early launch failure, whichever comes first.
    {
      std::unique_lock lock(mutex_);
      bool ready = cv_.wait_until(lock, deadline, [&] {
        return initialized_event_ || connection_lost_ || launch_ready();
      });
      if (!ready) {
        throw SessionError(SessionErrc::Timeout,
                           "no initialized event from adapter");
      }
    }
    if (launch_ready()) {
      auto r = await_response(launch_call, deadline);
      if (!r.success) {
        throw SessionError(SessionErrc::Rejected,
                           std::string("adapter rejected ") + mode + ": " +
                               r.message.value_or("no reason given"));
      }
      std::unique_lock lock(mutex_);
      if (!cv_.wait_until(lock, deadline, [&] {
            return initialized_event_ || connection_lost_;
          })) {
        throw SessionError(SessionErrc::Timeout,
                           "no initialized event from adapter");
      }
    }

    std::map<std::string, std::vector<std::int64_t>> by_file;
    for (const auto& bp : breakpoints) by_file[bp.file].push_back(bp.line);
    for (const auto& [file, lines] : by_file) {
      json bps = json::array();
      for (auto line : lines) bps.push_back({{"line", line}});
      auto pending = send_request("setBreakpoints",
                                  {{"source", {{"path", file}}},
                                   {"breakpoints", bps},
                                   {"lines", lines}});
      auto r = await_response(pending, deadline);
      if (!r.success) {
        log().warn("adapter rejected breakpoints in {}: {}", file,
                   r.message.value_or(""));
      }
    }

    if (capabilities_.value("supportsConfigurationDoneRequest", false)) {
      auto pending = send_request("configurationDone", nullptr);
      auto r = await_response(pending, deadline);
      if (!r.success) {
        throw SessionError(SessionErrc::Handshake,
                           "adapter rejected configurationDone: " +
                               r.message.value_or(""));
      }
    }

    auto r = launch_call.future.valid() ? await_response(launch_call, deadline)
                                        : ProtocolMessage{};
    if (!r.success) {
      throw SessionError(SessionErrc::Rejected,
                         std::string("adapter rejected ") + mode + ": " +
                             r.message.value_or("no reason given"));
    }
  } catch (const SessionError& e) {
    if (e.code() == SessionErrc::Closed) {
      throw SessionError(SessionErrc::Handshake,
                         std::string("adapter went away during handshake: ") +
                             e.what());
    }
    throw;
  }
  set_state(SessionState::Running);
}

void Session::reader_loop() {
  StreamDecoder decoder;
  std::array<char, 64 * 1024> buffer{};
  for (;;) {
    std::size_t n = 0;
    try {
      n = transport_->read_some(buffer);
    } catch (const TransportError& e) {
      fail_all(SessionErrc::Closed, e.what());
      return;
    }
    if (n == 0) {
      fail_all(SessionErrc::Closed, "adapter closed the connection");
      return;
    }
    std::vector<DecodedItem> items;
    try {
      items = decoder.feed(std::string_view(buffer.data(), n));
    } catch (const FramingError& e) {
      log().error("DAP framing error from {}: {}", transport_->describe(),
                  e.what());
      fail_all(SessionErrc::Closed, std::string("framing error: ") + e.what());
      return;
    }
    for (auto& item : items) {
      if (auto* bad = std::get_if<MalformedMessage>(&item)) {
        log().warn("dropping malformed DAP message ({}): {}", bad->reason,
                   bad->raw_body.substr(0, 200));
        continue;
      }
      handle_incoming(std::get<ProtocolMessage>(std::move(item)));
    }
  }
}

void Session::handle_incoming(ProtocolMessage msg) {
  bool wake = false;
  {
    std::lock_guard lock(mutex_);
    if (options_.record_transcript) {
      transcript_.push_back({TranscriptEntry::Direction::Received, msg});
    }
    switch (msg.kind) {
      case MessageKind::Response: {
        auto it = pending_.find(msg.request_seq);
        if (it == pending_.end()) {
          ++orphans_;
          log().warn("response to unknown request {} ({})", msg.request_seq,
                     msg.command);
          break;
        }
        it->second.set_value(std::move(msg));
        pending_.erase(it);
        break;
      }
      case MessageKind::Event:
        if (msg.command == "initialized") {
          initialized_event_ = true;
        } else if (msg.command == "stopped" || msg.command == "terminated" ||
                   msg.command == "exited") {
          events_.push_back(std::move(msg));
          wake = true;
        }
        break;
      case MessageKind::Request:
        // Reverse requests (runInTerminal, startDebugging) are unsupported.
        log().warn("ignoring reverse request '{}' from adapter", msg.command);
        break;
    }
  }
  cv_.notify_all();
  if (wake) notify_event();
}

void Session::fail_all(SessionErrc code, const std::string& why) {
  {
    std::lock_guard lock(mutex_);
    connection_lost_ = true;
    connection_error_ = why;
    for (auto& [seq, promise] : pending_) {
      promise.set_exception(std::make_exception_ptr(SessionError(code, why)));
    }
    pending_.clear();
  }
  cv_.notify_all();
  notify_event();
}

void Session::notify_event() {
  if (options_.on_event) options_.on_event();
}

Session::PendingCall Session::send_request(const std::string& command,
                                           json arguments) {
  std::lock_guard write_lock(write_mutex_);
  ProtocolMessage msg;
  std::future<ProtocolMessage> fut;
  {
    std::lock_guard lock(mutex_);
    if (connection_lost_) {
      throw SessionError(SessionErrc::Closed, connection_error_);
    }
    msg = ProtocolMessage::request(next_seq_++, command, std::move(arguments));
    fut = pending_[msg.seq].get_future();
    if (options_.record_transcript) {
      transcript_.push_back({TranscriptEntry::Direction::Sent, msg});
    }
  }
  try {
    transport_->write_all(encode_message(msg));
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    pending_.erase(msg.seq);
    throw SessionError(SessionErrc::Closed,
                       "cannot send '" + command + "': " + e.what());
  }
  return PendingCall{msg.seq, command, std::move(fut)};
}

ProtocolMessage Session::await_response(PendingCall& pending,
                                        Clock::time_point deadline) {
  if (pending.future.wait_until(deadline) != std::future_status::ready) {
    std::lock_guard lock(mutex_);
    pending_.erase(pending.seq);
    throw SessionError(SessionErrc::Timeout,
                       "no response to '" + pending.command + "' (seq " +
                           std::to_string(pending.seq) + ")");
  }
  return pending.future.get();
}

ProtocolMessage Session::call(const std::string& command, json arguments) {
  auto pending = send_request(command, std::move(arguments));
  auto r = await_response(pending, Clock::now() + options_.request_timeout);
  if (!r.success) {
    throw SessionError(SessionErrc::Rejected,
                       "adapter rejected '" + command +
                           "': " + r.message.value_or("no reason given"));
  }
  return r;
}

void Session::set_state(SessionState next) {
  std::lock_guard lock(mutex_);
  state_ = next;
}

SessionState Session::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

void Session::require_state(SessionState expected,
                            const char* operation) const {
  std::lock_guard lock(mutex_);
  if (state_ == expected) return;
  if (state_ == SessionState::Terminated) {
    throw SessionError(SessionErrc::Closed,
                       std::string(operation) + ": session has terminated");
  }
  throw SessionError(SessionErrc::Precondition,
                     std::string(operation) + " requires state " +
                         std::string(to_string(expected)) + ", session is " +
                         std::string(to_string(state_)));
}

bool Session::has_pending_event() const {
  std::lock_guard lock(mutex_);
  return !events_.empty() || (connection_lost_ &&
                              state_ != SessionState::Terminated);
}

std::optional<StopInfo> Session::await_stop(
    std::optional<std::chrono::milliseconds> timeout) {
  std::unique_lock lock(mutex_);
  if (state_ == SessionState::Terminated) return std::nullopt;
  if (state_ == SessionState::Stopped) {
    if (events_.empty() && !connection_lost_) {
      throw SessionError(SessionErrc::Precondition,
                         "await_stop while stopped with no pending event");
    }
  } else if (state_ != SessionState::Running) {
    throw SessionError(SessionErrc::Precondition,
                       "await_stop requires a running session");
  }

  const bool bounded = timeout.has_value();
  const auto deadline = Clock::now() + timeout.value_or(std::chrono::milliseconds(0));
  ProtocolMessage stopped;
  for (;;) {
    auto ready = [&] { return !events_.empty() || connection_lost_; };
    if (bounded) {
      if (!cv_.wait_until(lock, deadline, ready)) {
        throw SessionError(SessionErrc::Timeout, "no stop within timeout");
      }
    } else {
      cv_.wait(lock, ready);
    }
    if (events_.empty()) {
      state_ = SessionState::Terminated;
      if (exited_) return std::nullopt;
      throw SessionError(SessionErrc::Closed, connection_error_);
    }
    auto ev = std::move(events_.front());
    events_.pop_front();
    if (ev.command == "terminated") {
      state_ = SessionState::Terminated;
      return std::nullopt;
    }
    if (ev.command == "exited") {
      exited_ = true;
      continue;
    }
    stopped = std::move(ev);
    break;
  }

  StopInfo info;
  const json body = stopped.body.is_object() ? stopped.body : json::object();
  info.reason = string_field(body, "reason").value_or("unknown");
  info.thread_id = int_or(body, "threadId", tracked_thread_);
  state_ = SessionState::Stopped;
  ++generation_;
  lock.unlock();

  if (info.thread_id == 0) {
    auto threads = call("threads", nullptr);
    const auto& list = threads.body.value("threads", json::array());
    if (!list.empty()) info.thread_id = int_or(list.front(), "id", 0);
  }
  if (tracked_thread_ != 0 && info.thread_id != tracked_thread_) {
    log().info("focus moves from thread {} to thread {}", tracked_thread_,
               info.thread_id);
  }
  tracked_thread_ = info.thread_id;

  auto trace = call("stackTrace", {{"threadId", info.thread_id},
                                   {"startFrame", 0},
                                   {"levels", 1}});
  const auto frames = trace.body.value("stackFrames", json::array());
  if (!frames.empty()) info.location = location_of(frames.front());
  return info;
}

void Session::step(StepKind kind) {
  require_state(SessionState::Stopped, "step");
  call(std::string(to_command(kind)), {{"threadId", tracked_thread_}});
  std::lock_guard lock(mutex_);
  if (state_ == SessionState::Stopped) state_ = SessionState::Running;
  // Every reference handed out during the previous stop is now dead.
  ++generation_;
}

FrameView Session::fetch_frame(const StopInfo& stop, std::int64_t index) {
  require_state(SessionState::Stopped, "fetch_frame");
  auto trace = call("stackTrace", {{"threadId", stop.thread_id},
                                   {"startFrame", index},
                                   {"levels", 1}});
  const auto frames = trace.body.value("stackFrames", json::array());
  if (frames.empty()) {
    throw SessionError(SessionErrc::EmptyFrame,
                       "no stack frame " + std::to_string(index) +
                           " for thread " + std::to_string(stop.thread_id));
  }
  FrameView view;
  view.frame_id = int_or(frames.front(), "id", 0);
  view.location = location_of(frames.front());

  auto scopes = call("scopes", {{"frameId", view.frame_id}});
  for (const auto& s : scopes.body.value("scopes", json::array())) {
    ScopeRef scope;
    scope.name = string_field(s, "name").value_or("");
    scope.variables_reference = int_or(s, "variablesReference", 0);
    scope.expensive = s.value("expensive", false);
    if (scope.expensive && !options_.include_expensive) continue;
    register_reference(scope.variables_reference);
    view.scopes.push_back(std::move(scope));
  }
  return view;
}

std::vector<RawVariable> Session::fetch_children(
    std::int64_t variables_reference) {
  if (variables_reference <= 0) {
    throw SessionError(SessionErrc::Precondition,
                       "variables reference 0 denotes a leaf");
  }
  require_state(SessionState::Stopped, "fetch_children");
  {
    std::lock_guard lock(mutex_);
    auto it = reference_generation_.find(variables_reference);
    if (it == reference_generation_.end()) {
      throw SessionError(SessionErrc::Precondition,
                         "variables reference " +
                             std::to_string(variables_reference) +
                             " was never issued by the adapter");
    }
    if (it->second != generation_) {
      throw SessionError(SessionErrc::StaleReference,
                         "variables reference " +
                             std::to_string(variables_reference) +
                             " predates the last resume");
    }
  }
  auto r = call("variables", {{"variablesReference", variables_reference}});
  std::vector<RawVariable> out;
  for (const auto& v : r.body.value("variables", json::array())) {
    RawVariable var;
    var.name = string_field(v, "name").value_or("");
    var.value = string_field(v, "value").value_or("");
    var.type_name = string_field(v, "type");
    var.variables_reference = int_or(v, "variablesReference", 0);
    var.memory_reference = string_field(v, "memoryReference");
    register_reference(var.variables_reference);
    out.push_back(std::move(var));
  }
  return out;
}

void Session::register_reference(std::int64_t ref) {
  if (ref <= 0) return;
  std::lock_guard lock(mutex_);
  reference_generation_[ref] = generation_;
}

void Session::disconnect() {
  if (disconnected_) return;
  disconnected_ = true;
  bool alive;
  {
    std::lock_guard lock(mutex_);
    alive = !connection_lost_;
  }
  if (alive) {
    try {
      auto pending =
          send_request("disconnect", {{"terminateDebuggee", true}});
      await_response(pending, Clock::now() + options_.request_timeout);
    } catch (const std::exception& e) {
      log().debug("disconnect: {}", e.what());
    }
  }
  {
    std::lock_guard write_lock(write_mutex_);
    transport_->shutdown();
  }
  if (reader_.joinable()) reader_.join();
  set_state(SessionState::Terminated);
}

std::vector<TranscriptEntry> Session::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

std::size_t Session::orphan_responses() const {
  std::lock_guard lock(mutex_);
  return orphans_;
}

}  // namespace vdb::dap
