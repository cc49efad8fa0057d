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
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vdb::dap {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bidirectional byte pipe to a debug adapter. One thread may block in
// read_some() while another writes; shutdown() unblocks the reader.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws TransportError when the peer is gone.
  virtual void write_all(std::string_view bytes) = 0;

  // Returns 0 at end of stream.
  virtual std::size_t read_some(std::span<char> buffer) = 0;

  virtual void shutdown() = 0;

  virtual std::string describe() const = 0;
};

// Owns a pair of file descriptors (they may be the same descriptor, as for
// a socket). Descriptors are closed on destruction when `owned` is set.
class FdTransport : public Transport {
 public:
  FdTransport(int read_fd, int write_fd, bool owned, std::string name);
  ~FdTransport() override;

  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void write_all(std::string_view bytes) override;
  std::size_t read_some(std::span<char> buffer) override;
  void shutdown() override;
  std::string describe() const override { return name_; }

 protected:
  void close_write();

  int read_fd_;
  int write_fd_;
  bool owned_;
  std::string name_;
};

// Spawns `argv` with its stdin/stdout connected to pipes. Throws
// TransportError when the program cannot be started.
std::unique_ptr<Transport> spawn_adapter(const std::vector<std::string>& argv);

// Connects to host:port. Throws TransportError when nothing is listening.
std::unique_ptr<Transport> connect_tcp(const std::string& host,
                                       std::uint16_t port);

// Splits a command line on whitespace, honouring single and double quotes
// and backslash escapes.
std::vector<std::string> split_command_line(std::string_view command);

}  // namespace vdb::dap
