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

#include <atomic>
#include <cstdint>
#include <functional>

#include "vdb/bridge/config.hpp"

namespace vdb::bridge {

struct RunHooks {
  // Called once the API port is bound, before the adapter is started.
  std::function<void(std::uint16_t)> on_listening;
  // Polled by the main loop; setting it ends the run with exit 0.
  const std::atomic<bool>* shutdown = nullptr;
};

// Starts the API server and the adapter session, then turns every stop
// into a snapshot broadcast until the debuggee terminates. Returns one of
// the kExit* codes.
int run(const BridgeConfig& config, const RunHooks& hooks = {});

}  // namespace vdb::bridge
