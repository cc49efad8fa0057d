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

// Bridge entry point: DAP on one side, the visual debugging API on the other.

#include <atomic>
#include <csignal>
#include <iostream>

#include "vdb/bridge/config.hpp"
#include "vdb/bridge/orchestrator.hpp"
#include "vdb/log.hpp"

namespace {

std::atomic<bool> g_shutdown{false};

extern "C" void on_signal(int) { g_shutdown.store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto outcome = vdb::bridge::parse_config(args, vdb::bridge::process_environment());
  if (!outcome.config) {
    (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.message;
    return outcome.exit_code;
  }
  vdb::log().set_level(spdlog::level::from_str(outcome.config->log_level));

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);

  vdb::bridge::RunHooks hooks;
  hooks.shutdown = &g_shutdown;
  return vdb::bridge::run(*outcome.config, hooks);
}
