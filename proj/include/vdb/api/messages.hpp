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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "vdb/dap/session.hpp"
#include "vdb/graph/model.hpp"
#include "vdb/history/history_store.hpp"

namespace vdb::api {

inline constexpr int kProtocolVersion = 1;

enum class ErrorCode {
  UnknownNode,
  Range,
  NotStopped,
  Terminated,
  AlreadyExpanded,
  BadRequest,
  AdapterError,
};

std::string_view to_string(ErrorCode code);

struct ViewConfig {
  std::size_t depth = 2;
  std::size_t history = 10;
};

// Outbound documents. The server stamps "seq" on everything except hello.
nlohmann::json make_hello(const ViewConfig& config);
nlohmann::json make_snapshot(const history::HistoryEntry& entry,
                             std::size_t history_length);
nlohmann::json make_history(const history::HistoryEntry& entry,
                            std::size_t history_length);
nlohmann::json make_error(ErrorCode code, std::string detail);

struct LoadChildren {
  graph::StableId node;
};
struct GetHistory {
  std::size_t index = 0;
};
struct Step {
  dap::StepKind kind = dap::StepKind::Next;
};
struct SetConfig {
  std::optional<std::size_t> depth;
  std::optional<std::size_t> history;
};

using ClientRequest = std::variant<LoadChildren, GetHistory, Step, SetConfig>;

class RequestError : public std::runtime_error {
 public:
  RequestError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws RequestError(BadRequest) for unknown types or malformed fields,
// RequestError(UnknownNode) for a node id that is not a valid id string.
ClientRequest parse_request(const nlohmann::json& doc);

}  // namespace vdb::api
