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
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vdb/dap/message.hpp"

namespace vdb::dap {

// The header section of a frame is unusable. The stream cannot be
// resynchronized after this, so the decoder that raised it stays poisoned.
class FramingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A message could not be serialized (for example a body holding invalid
// UTF-8 strings).
class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A JSON document is not a valid DAP envelope.
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A complete frame whose body failed to parse. Recoverable: decoding
// continues with the next frame.
struct MalformedMessage {
  std::string raw_body;
  std::string reason;

  friend bool operator==(const MalformedMessage&,
                         const MalformedMessage&) = default;
};

using DecodedItem = std::variant<ProtocolMessage, MalformedMessage>;

inline constexpr std::string_view kContentLength = "Content-Length";
inline constexpr std::size_t kMaxHeaderBytes = 8 * 1024;

// Frames `msg` as `Content-Length: N\r\n\r\n<N bytes of UTF-8 JSON>`.
std::string encode_message(const ProtocolMessage& msg);

// Frames an already-serialized body.
std::string frame_body(std::string_view body);

// Incremental frame decoder. Single owner; feed bytes in any chunking and
// collect the complete frames in arrival order.
class StreamDecoder {
 public:
  // Throws FramingError on a bad header; every later call throws as well.
  std::vector<DecodedItem> feed(std::string_view bytes);

  std::string_view remainder() const { return buffer_; }
  bool poisoned() const { return poisoned_; }

 private:
  std::string buffer_;
  bool poisoned_ = false;
  std::string poison_reason_;
};

struct DecodeResult {
  std::vector<DecodedItem> items;
  std::string remainder;
};

// One-shot decode of a buffer that may end mid-frame.
DecodeResult decode_stream(std::string_view buffer);

}  // namespace vdb::dap
