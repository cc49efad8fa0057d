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

#include "vdb/api/messages.hpp"

#include "vdb/diff/diff.hpp"
#include "vdb/graph/document.hpp"

namespace vdb::api {

namespace {

using nlohmann::json;

std::size_t non_negative(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw RequestError(ErrorCode::BadRequest,
                       std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNode:
      return "unknown-node";
    case ErrorCode::Range:
      return "range";
    case ErrorCode::NotStopped:
      return "not-stopped";
    case ErrorCode::Terminated:
      return "terminated";
    case ErrorCode::AlreadyExpanded:
      return "already-expanded";
    case ErrorCode::BadRequest:
      return "bad-request";
    case ErrorCode::AdapterError:
      return "adapter-error";
  }
  return "unknown";
}

nlohmann::json make_hello(const ViewConfig& config) {
  return {{"type", "hello"},
          {"version", kProtocolVersion},
          {"config", {{"depth", config.depth}, {"history", config.history}}}};
}

nlohmann::json make_snapshot(const history::HistoryEntry& entry,
                             std::size_t history_length) {
  return {{"type", "snapshot"},
          {"stepSeq", entry.step_seq},
          {"location", graph::serialize_location(entry.location)},
          {"graph", graph::serialize_graph(*entry.graph)},
          {"changes", diff::serialize_changes(entry.changes)},
          {"historyLength", history_length}};
}

nlohmann::json make_history(const history::HistoryEntry& entry,
                            std::size_t history_length) {
  auto doc = make_snapshot(entry, history_length);
  doc["type"] = "history";
  doc["historical"] = true;
  doc["index"] = entry.index;
  return doc;
}

nlohmann::json make_error(ErrorCode code, std::string detail) {
  return {{"type", "error"}, {"code", to_string(code)}, {"detail", std::move(detail)}};
}

ClientRequest parse_request(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    throw RequestError(ErrorCode::BadRequest, "message needs a string 'type'");
  }
  const auto& type = doc["type"].get_ref<const std::string&>();
  try {
    if (type == "loadChildren") {
      const auto& id = doc.at("nodeId");
      if (!id.is_string()) {
        throw RequestError(ErrorCode::BadRequest, "'nodeId' must be a string");
      }
      auto parsed = graph::StableId::parse(id.get<std::string>());
      if (!parsed) {
        throw RequestError(ErrorCode::UnknownNode,
                           "no node " + id.get<std::string>());
      }
      return LoadChildren{*parsed};
    }
    if (type == "getHistory") return GetHistory{non_negative(doc, "index")};
    if (type == "step") {
      const auto& kind = doc.at("kind");
      auto parsed = kind.is_string() ? dap::parse_step_kind(kind.get<std::string>())
                                     : std::nullopt;
      if (!parsed) {
        throw RequestError(ErrorCode::BadRequest,
                           "'kind' must be next, stepIn, stepOut or continue");
      }
      return Step{*parsed};
    }
    if (type == "setConfig") {
      SetConfig out;
      if (doc.contains("depth")) out.depth = non_negative(doc, "depth");
      if (doc.contains("history")) out.history = non_negative(doc, "history");
      return out;
    }
  } catch (const json::out_of_range& e) {
    throw RequestError(ErrorCode::BadRequest, e.what());
  }
  throw RequestError(ErrorCode::BadRequest, "unknown message type '" + type + "'");
}

}  // namespace vdb::api
