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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "vdb/dap/codec.hpp"
#include "vdb/dap/transport.hpp"
#include "vdb/dap/variables.hpp"
#include "vdb/source_location.hpp"

namespace vdb::dap {

enum class SessionErrc {
  Spawn,           // adapter process or socket could not be opened
  Handshake,       // initialize/launch sequence failed or adapter vanished
  Timeout,         // no response within the configured budget
  Rejected,        // adapter answered success=false
  Precondition,    // operation not valid in the current state; nothing sent
  StaleReference,  // variables reference issued before the last resume
  EmptyFrame,      // adapter reported no stack frames
  Closed,          // connection to the adapter is gone
};

std::string_view to_string(SessionErrc code);

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  SessionErrc code() const { return code_; }

 private:
  SessionErrc code_;
};

struct AdapterSpec {
  enum class Transport { ChildProcessStdio, TcpSocket };

  Transport transport = Transport::ChildProcessStdio;
  std::vector<std::string> command;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  static AdapterSpec command_line(std::vector<std::string> argv);
  static AdapterSpec tcp(std::string host, std::uint16_t port);
};

struct LaunchRequest {
  enum class Mode { Launch, Attach };
  Mode mode = Mode::Launch;
  nlohmann::json arguments = nlohmann::json::object();
};

struct SourceBreakpoint {
  std::string file;
  std::int64_t line = 1;

  friend bool operator==(const SourceBreakpoint&,
                         const SourceBreakpoint&) = default;
};

struct SessionOptions {
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{5'000};
  bool include_expensive = false;
  std::string adapter_id = "vdbridge";
  bool record_transcript = false;
  // Called from the reader thread whenever a stopped/terminated event (or
  // loss of the connection) becomes available to await_stop().
  std::function<void()> on_event;
};

enum class SessionState { Initializing, Configuring, Running, Stopped, Terminated };

std::string_view to_string(SessionState state);

enum class StepKind { Next, StepIn, StepOut, Continue };

std::string_view to_command(StepKind kind);
std::optional<StepKind> parse_step_kind(std::string_view api_name);

struct StopInfo {
  std::string reason;
  std::int64_t thread_id = 0;
  std::optional<SourceLocation> location;  // absent when the stack is empty
};

struct FrameView {
  std::int64_t frame_id = 0;
  SourceLocation location;
  std::vector<ScopeRef> scopes;
};

struct TranscriptEntry {
  enum class Direction { Sent, Received };
  Direction direction;
  ProtocolMessage message;
};

// DAP client. One logical owner drives it; a private reader thread owns the
// decode stream, completes pending requests and queues events.
class Session : public VariableSource {
 public:
  // Runs initialize, launch/attach, setBreakpoints and configurationDone.
  // On return the session is Running.
  static std::unique_ptr<Session> start(
      const AdapterSpec& adapter, const LaunchRequest& launch,
      const std::vector<SourceBreakpoint>& breakpoints,
      SessionOptions options = {});

  ~Session() override;

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Blocks until the debuggee stops. Returns nullopt once the session has
  // ended (terminated event, or exit followed by disconnect). Valid while
  // Running, or while Stopped once another event is queued or the adapter
  // connection has dropped.
  std::optional<StopInfo> await_stop(
      std::optional<std::chrono::milliseconds> timeout = {});

  // True when await_stop() would return without blocking.
  bool has_pending_event() const;

  void step(StepKind kind);

  // Stack frame `index` (0 = top) of the stop, and its scopes.
  FrameView fetch_frame(const StopInfo& stop, std::int64_t index = 0);
  FrameView fetch_top_frame(const StopInfo& stop) {
    return fetch_frame(stop, 0);
  }

  std::vector<RawVariable> fetch_children(
      std::int64_t variables_reference) override;

  void disconnect();

  SessionState state() const;
  const nlohmann::json& capabilities() const { return capabilities_; }
  std::int64_t tracked_thread() const { return tracked_thread_; }
  std::vector<TranscriptEntry> transcript() const;
  std::size_t orphan_responses() const;

 private:
  Session(std::unique_ptr<Transport> transport, SessionOptions options);

  void handshake(const LaunchRequest& launch,
                 const std::vector<SourceBreakpoint>& breakpoints);
  void reader_loop();
  void handle_incoming(ProtocolMessage msg);
  void fail_all(SessionErrc code, const std::string& why);

  struct PendingCall {
    std::int64_t seq;
    std::string command;
    std::future<ProtocolMessage> future;
  };

  PendingCall send_request(const std::string& command,
                           nlohmann::json arguments);
  ProtocolMessage await_response(PendingCall& pending,
                                 std::chrono::steady_clock::time_point deadline);
  ProtocolMessage call(const std::string& command, nlohmann::json arguments);

  void set_state(SessionState next);
  void require_state(SessionState expected, const char* operation) const;
  void register_reference(std::int64_t ref);
  void notify_event();

  std::unique_ptr<Transport> transport_;
  SessionOptions options_;
  std::thread reader_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  SessionState state_ = SessionState::Initializing;
  std::int64_t next_seq_ = 1;
  std::map<std::int64_t, std::promise<ProtocolMessage>> pending_;
  std::deque<ProtocolMessage> events_;
  bool initialized_event_ = false;
  bool exited_ = false;
  bool connection_lost_ = false;
  std::string connection_error_;
  std::size_t orphans_ = 0;
  std::vector<TranscriptEntry> transcript_;

  std::mutex write_mutex_;

  nlohmann::json capabilities_ = nlohmann::json::object();
  std::int64_t tracked_thread_ = 0;
  std::uint64_t generation_ = 0;
  std::unordered_map<std::int64_t, std::uint64_t> reference_generation_;
  bool disconnected_ = false;
};

}  // namespace vdb::dap
