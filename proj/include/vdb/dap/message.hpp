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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vdb::dap {

enum class MessageKind { Request, Response, Event };

std::string_view to_string(MessageKind kind);

// One DAP envelope. `command` holds the request/response command or the
// event name. Fields that do not apply to `kind` are left at their defaults
// and are neither written nor read by the codec.
struct ProtocolMessage {
  std::int64_t seq = 0;
  MessageKind kind = MessageKind::Request;
  std::string command;
  std::int64_t request_seq = 0;        // responses only
  bool success = true;                 // responses only
  std::optional<std::string> message;  // responses only, error text
  nlohmann::json body;                 // responses and events; null = absent
  nlohmann::json arguments;            // requests only; null = absent

  static ProtocolMessage request(std::int64_t seq, std::string command,
                                 nlohmann::json arguments = nullptr);
  static ProtocolMessage response(std::int64_t seq, const ProtocolMessage& to,
                                  bool success, nlohmann::json body = nullptr,
                                  std::optional<std::string> message = {});
  static ProtocolMessage event(std::int64_t seq, std::string name,
                               nlohmann::json body = nullptr);

  friend bool operator==(const ProtocolMessage&,
                         const ProtocolMessage&) = default;
};

nlohmann::json to_json(const ProtocolMessage& msg);

// Throws EnvelopeError when the document is not a well-formed envelope.
ProtocolMessage from_json(const nlohmann::json& doc);

}  // namespace vdb::dap
