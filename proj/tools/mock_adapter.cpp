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

// Scripted debug adapter for tests and demos.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "vdb/log.hpp"
#include "vdb/mock/adapter.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scripted DAP adapter replaying a scenario file"};
  std::string scenario_file;
  int listen_port = -1;
  app.add_option("-s,--scenario", scenario_file, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--listen", listen_port,
                 "Serve one TCP client on this port instead of stdio (0 = any)")
      ->check(CLI::Range(0, 65535));
  CLI11_PARSE(app, argc, argv);

  vdb::mock::Scenario scenario;
  try {
    scenario = vdb::mock::load_scenario(scenario_file);
  } catch (const vdb::mock::ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 64;
  }

  try {
    if (listen_port >= 0) {
      return vdb::mock::serve_tcp(
          scenario, static_cast<std::uint16_t>(listen_port),
          [](std::uint16_t port) {
            std::printf("listening on port %u\n", port);
            std::fflush(stdout);
          });
    }
    vdb::dap::FdTransport stdio(0, 1, false, "stdio");
    return vdb::mock::serve(scenario, stdio);
  } catch (const std::exception& e) {
    vdb::log().error("mock adapter failed: {}", e.what());
    return 1;
  }
}
