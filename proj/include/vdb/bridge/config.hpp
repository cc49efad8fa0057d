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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdb/dap/session.hpp"
#include "vdb/graph/builder.hpp"

namespace vdb::bridge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAdapter = 2;
inline constexpr int kExitBind = 3;
inline constexpr int kExitConfig = 64;

struct BridgeConfig {
  dap::AdapterSpec adapter;
  dap::LaunchRequest launch;
  std::optional<std::filesystem::path> launch_file;
  std::vector<dap::SourceBreakpoint> breakpoints;
  std::size_t depth = 2;
  std::size_t history = 10;
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8071;
  graph::IdentityMode identity = graph::IdentityMode::Auto;
  bool include_expensive = false;
  std::vector<std::string> null_literals = graph::default_null_literals();
  std::int64_t frame = 0;
  std::optional<std::filesystem::path> ui_dir;
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{5'000};
  std::string log_level = "info";
};

struct ParseOutcome {
  std::optional<BridgeConfig> config;  // set when the bridge should run
  int exit_code = kExitOk;             // meaningful when config is empty
  std::string message;                 // help text or error plus usage
};

using Environment = std::map<std::string, std::string>;

// Flags win over VDBRIDGE_* variables, which win over defaults. Exactly
// one of --adapter / --attach (or their variables) must be given.
ParseOutcome parse_config(const std::vector<std::string>& args,
                          const Environment& env);

// The VDBRIDGE_* subset of the process environment.
Environment process_environment();

// "file:line" with line >= 1; nullopt otherwise.
std::optional<dap::SourceBreakpoint> parse_breakpoint(std::string_view text);

}  // namespace vdb::bridge
