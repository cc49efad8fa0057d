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

#include "vdb/dap/transport.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>

extern char** environ;

namespace vdb::dap {

namespace {

std::string errno_text(int err) { return std::strerror(err); }

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

class ChildProcessTransport : public FdTransport {
 public:
  ChildProcessTransport(pid_t pid, int read_fd, int write_fd, std::string name)
      : FdTransport(read_fd, write_fd, true, std::move(name)), pid_(pid) {}

  ~ChildProcessTransport() override {
    close_write();
    reap();
  }

  void shutdown() override {
    close_write();
    reap();
  }

 private:
  // Gives the adapter a moment to exit on EOF before escalating.
  void reap() {
    std::lock_guard lock(reap_mutex_);
    if (pid_ <= 0) return;
    using namespace std::chrono_literals;
    auto wait_for = [this](std::chrono::milliseconds budget) {
      auto deadline = std::chrono::steady_clock::now() + budget;
      while (std::chrono::steady_clock::now() < deadline) {
        int status = 0;
        pid_t r = ::waitpid(pid_, &status, WNOHANG);
        if (r == pid_ || (r < 0 && errno == ECHILD)) return true;
        std::this_thread::sleep_for(10ms);
      }
      return false;
    };
    if (!wait_for(1000ms)) {
      ::kill(pid_, SIGTERM);
      if (!wait_for(1000ms)) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
      }
    }
    pid_ = -1;
  }

  std::mutex reap_mutex_;
  pid_t pid_;
};

}  // namespace

FdTransport::FdTransport(int read_fd, int write_fd, bool owned,
                         std::string name)
    : read_fd_(read_fd),
      write_fd_(write_fd),
      owned_(owned),
      name_(std::move(name)) {
  ignore_sigpipe();
}

FdTransport::~FdTransport() {
  if (!owned_) return;
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
}

void FdTransport::write_all(std::string_view bytes) {
  if (write_fd_ < 0) {
    throw TransportError(name_ + ": write side closed");
  }
  while (!bytes.empty()) {
    ssize_t n = ::write(write_fd_, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(name_ + ": write failed: " + errno_text(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::size_t FdTransport::read_some(std::span<char> buffer) {
  for (;;) {
    ssize_t n = ::read(read_fd_, buffer.data(), buffer.size());
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    // A reset connection is the same as end of stream for our purposes.
    if (errno == ECONNRESET || errno == ENOTCONN) return 0;
    throw TransportError(name_ + ": read failed: " + errno_text(errno));
  }
}

void FdTransport::shutdown() {
  if (read_fd_ == write_fd_ && read_fd_ >= 0) {
    ::shutdown(read_fd_, SHUT_RDWR);
  } else {
    close_write();
  }
}

void FdTransport::close_write() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) {
    if (owned_) ::close(write_fd_);
    write_fd_ = -1;
  }
}

std::unique_ptr<Transport> spawn_adapter(const std::vector<std::string>& argv) {
  if (argv.empty()) {
    throw TransportError("empty adapter command");
  }
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw TransportError("pipe: " + errno_text(errno));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    int err = errno;
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError("pipe: " + errno_text(err));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(),
                          environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(to_child[0]);
  ::close(from_child[1]);
  if (rc != 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    throw TransportError("cannot start adapter '" + argv[0] +
                         "': " + errno_text(rc));
  }
  return std::make_unique<ChildProcessTransport>(
      pid, from_child[0], to_child[1], "adapter process '" + argv[0] + "'");
}

std::unique_ptr<Transport> connect_tcp(const std::string& host,
                                       std::uint16_t port) {
  namespace asio = boost::asio;
  using asio::ip::tcp;
  asio::io_context ioc;
  tcp::socket socket(ioc);
  boost::system::error_code ec;
  tcp::resolver resolver(ioc);
  auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) asio::connect(socket, endpoints, ec);
  if (ec) {
    throw TransportError("cannot connect to " + host + ":" +
                         std::to_string(port) + ": " + ec.message());
  }
  socket.set_option(tcp::no_delay(true), ec);
  int fd = socket.release(ec);
  if (ec) {
    throw TransportError("socket release failed: " + ec.message());
  }
  return std::make_unique<FdTransport>(
      fd, fd, true, "tcp " + host + ":" + std::to_string(port));
}

std::vector<std::string> split_command_line(std::string_view command) {
  std::vector<std::string> out;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (std::size_t i = 0; i < command.size(); ++i) {
    char c = command[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < command.size()) {
        current.push_back(command[++i]);
      } else {
        current.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == '\\' && i + 1 < command.size()) {
      current.push_back(command[++i]);
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) {
        out.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
    } else {
      current.push_back(c);
      in_token = true;
    }
  }
  if (in_token) out.push_back(std::move(current));
  return out;
}

}  // namespace vdb::dap
