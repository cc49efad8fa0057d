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
#include <functional>

#include "vdb/dap/transport.hpp"
#include "vdb/mock/scenario.hpp"

namespace vdb::mock {

// Plays `scenario` as a debug adapter over `transport` until the client
// disconnects or the stream closes. Returns a process exit status.
//
// Variable references are drawn from one counter for the whole run, so a
// reference is never reused. Within one stop a shared object id maps to a
// single reference, which is how cycles and aliasing are scripted. When
// `invalidate_on_resume` is set, references of earlier stops are answered
// with success=false.
int serve(const Scenario& scenario, dap::Transport& transport);

// Accepts one TCP connection on 127.0.0.1:`port` (0 = ephemeral) and
// serves it. `on_listening` receives the bound port before accept().
int serve_tcp(const Scenario& scenario, std::uint16_t port,
              const std::function<void(std::uint16_t)>& on_listening = {});

}  // namespace vdb::mock
