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

#include "vdb/mock/adapter.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <thread>
#include <utility>

#include <boost/asio/ip/tcp.hpp>

#include "vdb/dap/codec.hpp"
#include "vdb/log.hpp"

namespace vdb::mock {

namespace {

using dap::ProtocolMessage;
using nlohmann::json;

class Adapter {
 public:
  Adapter(const Scenario& scenario, dap::Transport& transport)
      : scenario_(scenario), transport_(transport) {}

  int run() {
    dap::StreamDecoder decoder;
    std::array<char, 4096> buf{};
    while (!done_) {
      std::size_t n = 0;
      try {
        n = transport_.read_some(buf);
      } catch (const dap::TransportError& e) {
        log().warn("mock adapter: read failed: {}", e.what());
        return 1;
      }
      if (n == 0) return 0;
      std::vector<dap::DecodedItem> items;
      try {
        items = decoder.feed({buf.data(), n});
      } catch (const dap::FramingError& e) {
        log().error("mock adapter: framing error: {}", e.what());
        return 1;
      }
      for (auto& item : items) {
        if (auto* bad = std::get_if<dap::MalformedMessage>(&item)) {
          log().warn("mock adapter: dropping malformed message: {}", bad->reason);
          continue;
        }
        auto& msg = std::get<ProtocolMessage>(item);
        if (msg.kind != dap::MessageKind::Request) continue;
        handle(msg);
        if (done_) break;
      }
    }
    return 0;
  }

 private:
  enum class Phase { Init, Configuring, Stopped, Terminated };

  struct Target {
    std::size_t stop = 0;
    bool is_scope = false;
    std::size_t frame = 0;
    std::size_t scope = 0;
    std::string object;
  };

  void send(const ProtocolMessage& msg) {
    transport_.write_all(dap::encode_message(msg));
  }

  void reply(const ProtocolMessage& req, json body = nullptr) {
    send(ProtocolMessage::response(seq_++, req, true, std::move(body)));
  }

  void reject(const ProtocolMessage& req, std::string message) {
    send(ProtocolMessage::response(seq_++, req, false, nullptr,
                                   std::move(message)));
  }

  void emit(std::string name, json body = nullptr) {
    send(ProtocolMessage::event(seq_++, std::move(name), std::move(body)));
  }

  void handle(const ProtocolMessage& req) {
    const auto& cmd = req.command;
    const json& args = req.arguments.is_object() ? req.arguments : empty_;
    if (cmd == "initialize") {
      reply(req, scenario_.capabilities);
      emit("initialized");
      phase_ = Phase::Configuring;
    } else if (cmd == "launch" || cmd == "attach") {
      if (scenario_.fail_launch) {
        reject(req, *scenario_.fail_launch);
      } else {
        reply(req);
      }
    } else if (cmd == "setBreakpoints") {
      json bps = json::array();
      for (const auto& bp : args.value("breakpoints", json::array())) {
        bps.push_back({{"verified", true}, {"line", bp.value("line", 0)}});
      }
      reply(req, {{"breakpoints", bps}});
    } else if (cmd == "setExceptionBreakpoints" || cmd == "pause") {
      reply(req);
    } else if (cmd == "configurationDone") {
      reply(req);
      if (phase_ == Phase::Configuring) enter_stop(0);
    } else if (cmd == "threads") {
      json threads = json::array();
      for (const auto& t : scenario_.threads) {
        threads.push_back({{"id", t.id}, {"name", t.name}});
      }
      reply(req, {{"threads", threads}});
    } else if (cmd == "stackTrace") {
      stack_trace(req, args);
    } else if (cmd == "scopes") {
      scopes(req, args);
    } else if (cmd == "variables") {
      variables(req, args);
    } else if (cmd == "next" || cmd == "stepIn" || cmd == "stepOut" ||
               cmd == "continue") {
      if (phase_ != Phase::Stopped) return reject(req, "not stopped");
      reply(req, cmd == "continue" ? json{{"allThreadsContinued", true}}
                                   : json(nullptr));
      enter_stop(current_ + 1);
    } else if (cmd == "disconnect") {
      reply(req);
      done_ = true;
    } else {
      reject(req, "unsupported request '" + cmd + "'");
    }
  }

  void enter_stop(std::size_t index) {
    current_ = index;
    if (index >= scenario_.stops.size()) {
      phase_ = Phase::Terminated;
      emit("exited", {{"exitCode", 0}});
      emit("terminated");
      return;
    }
    phase_ = Phase::Stopped;
    const auto& stop = scenario_.stops[index];
    if (stop.delay.count() > 0) std::this_thread::sleep_for(stop.delay);
    emit("stopped", {{"reason", stop.reason},
                     {"threadId", stop.thread_id},
                     {"allThreadsStopped", true}});
  }

  const ScriptedStop* current_stop() const {
    if (phase_ != Phase::Stopped) return nullptr;
    return &scenario_.stops[current_];
  }

  void stack_trace(const ProtocolMessage& req, const json& args) {
    const auto* stop = current_stop();
    if (!stop) return reject(req, "not stopped");
    json frames = json::array();
    const auto start = args.value("startFrame", std::size_t{0});
    auto levels = args.value("levels", std::size_t{0});
    const std::size_t total =
        args.value("threadId", stop->thread_id) == stop->thread_id
            ? stop->frames.size()
            : 0;
    if (levels == 0) levels = total;
    for (std::size_t i = start; i < total && i < start + levels; ++i) {
      const auto& f = stop->frames[i];
      const auto id = next_ref_++;
      frame_ids_[id] = {current_, i};
      frames.push_back(
          {{"id", id},
           {"name", f.name},
           {"source",
            {{"name", std::filesystem::path(f.location.file).filename().string()},
             {"path", f.location.file}}},
           {"line", f.location.line},
           {"column", 1}});
    }
    reply(req, {{"stackFrames", frames}, {"totalFrames", total}});
  }

  bool stale(std::size_t stop) const {
    if (stop == current_ && phase_ == Phase::Stopped) return false;
    return scenario_.invalidate_on_resume;
  }

  void scopes(const ProtocolMessage& req, const json& args) {
    auto it = frame_ids_.find(args.value("frameId", std::int64_t{0}));
    if (it == frame_ids_.end()) return reject(req, "unknown frame id");
    const auto [stop_index, frame_index] = it->second;
    if (stale(stop_index)) return reject(req, "stale frame id");
    const auto& frame = scenario_.stops[stop_index].frames[frame_index];
    json out = json::array();
    for (std::size_t s = 0; s < frame.scopes.size(); ++s) {
      Target t{stop_index, true, frame_index, s, {}};
      out.push_back({{"name", frame.scopes[s].name},
                     {"variablesReference",
                      ref_for("s:" + std::to_string(frame_index) + ":" +
                                  std::to_string(s),
                              t)},
                     {"expensive", frame.scopes[s].expensive}});
    }
    reply(req, {{"scopes", out}});
  }

  void variables(const ProtocolMessage& req, const json& args) {
    auto it = targets_.find(args.value("variablesReference", std::int64_t{0}));
    if (it == targets_.end()) return reject(req, "unknown variablesReference");
    const Target& t = it->second;
    if (stale(t.stop)) return reject(req, "stale variablesReference");
    const auto& stop = scenario_.stops[t.stop];
    const auto& vars =
        t.is_scope ? stop.frames[t.frame].scopes[t.scope].variables
                   : stop.objects.at(t.object).fields;
    json out = json::array();
    for (const auto& v : vars) out.push_back(render(t.stop, stop, v));
    reply(req, {{"variables", out}});
  }

  json render(std::size_t stop_index, const ScriptedStop& stop,
              const ScriptedVariable& v) {
    json out = {{"name", v.name}};
    if (!v.ref) {
      out["value"] = *v.value;
      if (v.type) out["type"] = *v.type;
      out["variablesReference"] = 0;
      return out;
    }
    const auto& obj = stop.objects.at(*v.ref);
    out["value"] = v.value.value_or(obj.value.value_or(obj.type + "@" + *v.ref));
    out["type"] = v.type.value_or(obj.type);
    out["variablesReference"] =
        ref_for("o:" + *v.ref, Target{stop_index, false, 0, 0, *v.ref});
    if (obj.memory_reference) out["memoryReference"] = *obj.memory_reference;
    return out;
  }

  std::int64_t ref_for(const std::string& key, const Target& t) {
    auto [it, fresh] = refs_.try_emplace({t.stop, key}, 0);
    if (fresh) {
      it->second = next_ref_++;
      targets_.emplace(it->second, t);
    }
    return it->second;
  }

  const Scenario& scenario_;
  dap::Transport& transport_;
  const json empty_ = json::object();
  std::int64_t seq_ = 1;
  std::int64_t next_ref_ = 1000;
  Phase phase_ = Phase::Init;
  std::size_t current_ = 0;
  bool done_ = false;
  std::map<std::pair<std::size_t, std::string>, std::int64_t> refs_;
  std::map<std::int64_t, Target> targets_;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> frame_ids_;
};

}  // namespace

int serve(const Scenario& scenario, dap::Transport& transport) {
  Adapter adapter(scenario, transport);
  int rc = adapter.run();
  transport.shutdown();
  return rc;
}

int serve_tcp(const Scenario& scenario, std::uint16_t port,
              const std::function<void(std::uint16_t)>& on_listening) {
  namespace asio = boost::asio;
  using asio::ip::tcp;
  asio::io_context io;
  tcp::acceptor acceptor(io, {asio::ip::make_address("127.0.0.1"), port});
  if (on_listening) on_listening(acceptor.local_endpoint().port());
  tcp::socket socket(io);
  acceptor.accept(socket);
  socket.set_option(tcp::no_delay(true));
  const int fd = socket.release();
  dap::FdTransport transport(fd, fd, true, "mock-tcp");
  return serve(scenario, transport);
}

}  // namespace vdb::mock
