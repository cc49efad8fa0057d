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

#include "vdb/dap/codec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace vdb::dap {

namespace {

using nlohmann::json;

constexpr std::string_view kHeaderEnd = "\r\n\r\n";

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

std::size_t parse_content_length(std::string_view header) {
  std::optional<std::size_t> length;
  while (!header.empty()) {
    auto eol = header.find("\r\n");
    auto line = header.substr(0, eol);
    header = eol == std::string_view::npos ? std::string_view{}
                                           : header.substr(eol + 2);
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw FramingError("header line without ':': " + std::string(line));
    }
    if (!iequals(trim(line.substr(0, colon)), kContentLength)) {
      continue;  // unknown headers are ignored
    }
    auto value = trim(line.substr(colon + 1));
    std::size_t parsed = 0;
    auto [end, ec] =
        std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (value.empty() || ec != std::errc{} ||
        end != value.data() + value.size()) {
      throw FramingError("invalid Content-Length value: " +
                         std::string(value));
    }
    if (length && *length != parsed) {
      throw FramingError("conflicting Content-Length headers");
    }
    length = parsed;
  }
  if (!length) {
    throw FramingError("frame header has no Content-Length");
  }
  return *length;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw EnvelopeError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::int64_t require_seq(const json& doc, const char* key) {
  const auto& v = require(doc, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw EnvelopeError(std::string("field '") + key +
                        "' must be a positive integer");
  }
  return v.get<std::int64_t>();
}

std::string require_name(const json& doc, const char* key) {
  const auto& v = require(doc, key);
  if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
    throw EnvelopeError(std::string("field '") + key +
                        "' must be a non-empty string");
  }
  return v.get<std::string>();
}

json optional_value(const json& doc, const char* key) {
  auto it = doc.find(key);
  return it == doc.end() ? json(nullptr) : *it;
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Request:
      return "request";
    case MessageKind::Response:
      return "response";
    case MessageKind::Event:
      return "event";
  }
  return "unknown";
}

ProtocolMessage ProtocolMessage::request(std::int64_t seq, std::string command,
                                         nlohmann::json arguments) {
  ProtocolMessage m;
  m.seq = seq;
  m.kind = MessageKind::Request;
  m.command = std::move(command);
  m.arguments = std::move(arguments);
  return m;
}

ProtocolMessage ProtocolMessage::response(std::int64_t seq,
                                          const ProtocolMessage& to,
                                          bool success, nlohmann::json body,
                                          std::optional<std::string> message) {
  ProtocolMessage m;
  m.seq = seq;
  m.kind = MessageKind::Response;
  m.command = to.command;
  m.request_seq = to.seq;
  m.success = success;
  m.body = std::move(body);
  m.message = std::move(message);
  return m;
}

ProtocolMessage ProtocolMessage::event(std::int64_t seq, std::string name,
                                       nlohmann::json body) {
  ProtocolMessage m;
  m.seq = seq;
  m.kind = MessageKind::Event;
  m.command = std::move(name);
  m.body = std::move(body);
  return m;
}

nlohmann::json to_json(const ProtocolMessage& msg) {
  json doc = {{"seq", msg.seq}, {"type", to_string(msg.kind)}};
  switch (msg.kind) {
    case MessageKind::Request:
      doc["command"] = msg.command;
      if (!msg.arguments.is_null()) doc["arguments"] = msg.arguments;
      break;
    case MessageKind::Response:
      doc["command"] = msg.command;
      doc["request_seq"] = msg.request_seq;
      doc["success"] = msg.success;
      if (msg.message) doc["message"] = *msg.message;
      if (!msg.body.is_null()) doc["body"] = msg.body;
      break;
    case MessageKind::Event:
      doc["event"] = msg.command;
      if (!msg.body.is_null()) doc["body"] = msg.body;
      break;
  }
  return doc;
}

ProtocolMessage from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw EnvelopeError("message is not a JSON object");
  }
  ProtocolMessage m;
  m.seq = require_seq(doc, "seq");
  const auto& type = require(doc, "type");
  if (!type.is_string()) {
    throw EnvelopeError("field 'type' must be a string");
  }
  const auto& t = type.get_ref<const std::string&>();
  if (t == "request") {
    m.kind = MessageKind::Request;
    m.command = require_name(doc, "command");
    m.arguments = optional_value(doc, "arguments");
  } else if (t == "response") {
    m.kind = MessageKind::Response;
    m.command = require_name(doc, "command");
    m.request_seq = require_seq(doc, "request_seq");
    const auto& success = require(doc, "success");
    if (!success.is_boolean()) {
      throw EnvelopeError("field 'success' must be a boolean");
    }
    m.success = success.get<bool>();
    if (auto it = doc.find("message"); it != doc.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw EnvelopeError("field 'message' must be a string");
      }
      m.message = it->get<std::string>();
    }
    m.body = optional_value(doc, "body");
  } else if (t == "event") {
    m.kind = MessageKind::Event;
    m.command = require_name(doc, "event");
    m.body = optional_value(doc, "body");
  } else {
    throw EnvelopeError("unknown message type '" + t + "'");
  }
  return m;
}

std::string frame_body(std::string_view body) {
  std::string out;
  out.reserve(body.size() + 32);
  out.append(kContentLength);
  out.append(": ");
  out.append(std::to_string(body.size()));
  out.append(kHeaderEnd);
  out.append(body);
  return out;
}

std::string encode_message(const ProtocolMessage& msg) {
  std::string body;
  try {
    body = to_json(msg).dump();
  } catch (const json::exception& e) {
    throw EncodeError(e.what());
  }
  return frame_body(body);
}

std::vector<DecodedItem> StreamDecoder::feed(std::string_view bytes) {
  if (poisoned_) {
    throw FramingError("stream already failed: " + poison_reason_);
  }
  buffer_.append(bytes);
  std::vector<DecodedItem> out;
  std::size_t offset = 0;
  try {
    for (;;) {
      std::string_view pending(buffer_);
      pending.remove_prefix(offset);
      auto header_end = pending.find(kHeaderEnd);
      if (header_end == std::string_view::npos) {
        if (pending.size() > kMaxHeaderBytes) {
          throw FramingError("frame header exceeds " +
                             std::to_string(kMaxHeaderBytes) + " bytes");
        }
        break;
      }
      auto length = parse_content_length(pending.substr(0, header_end));
      auto body_start = header_end + kHeaderEnd.size();
      if (pending.size() - body_start < length) {
        break;
      }
      auto body = pending.substr(body_start, length);
      offset += body_start + length;

      json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
      if (doc.is_discarded()) {
        out.emplace_back(MalformedMessage{std::string(body), "invalid JSON"});
        continue;
      }
      try {
        out.emplace_back(from_json(doc));
      } catch (const EnvelopeError& e) {
        out.emplace_back(MalformedMessage{std::string(body), e.what()});
      }
    }
  } catch (const FramingError& e) {
    poisoned_ = true;
    poison_reason_ = e.what();
    throw;
  }
  buffer_.erase(0, offset);
  return out;
}

DecodeResult decode_stream(std::string_view buffer) {
  StreamDecoder decoder;
  DecodeResult result;
  result.items = decoder.feed(buffer);
  result.remainder = std::string(decoder.remainder());
  return result;
}

}  // namespace vdb::dap
