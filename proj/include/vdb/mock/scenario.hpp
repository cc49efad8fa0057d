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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdb/source_location.hpp"

namespace vdb::mock {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A variable slot: either a leaf (`value`) or a reference to an object
// defined in the stop's object table (`ref`).
struct ScriptedVariable {
  std::string name;
  std::optional<std::string> type;
  std::optional<std::string> value;
  std::optional<std::string> ref;
};

struct ScriptedObject {
  std::string type;
  std::optional<std::string> value;  // display value; defaults to Type@id
  std::optional<std::string> memory_reference;
  std::vector<ScriptedVariable> fields;
};

struct ScriptedScope {
  std::string name;
  bool expensive = false;
  std::vector<ScriptedVariable> variables;
};

struct ScriptedFrame {
  std::string name;
  SourceLocation location;
  std::vector<ScriptedScope> scopes;
};

struct ScriptedStop {
  std::string reason = "breakpoint";
  std::int64_t thread_id = 1;
  std::chrono::milliseconds delay{0};  // before the stopped event is sent
  std::vector<ScriptedFrame> frames;  // empty = empty stack trace
  std::map<std::string, ScriptedObject> objects;
};

struct ScriptedThread {
  std::int64_t id = 1;
  std::string name = "main";
};

struct Scenario {
  nlohmann::json capabilities = {{"supportsConfigurationDoneRequest", true}};
  std::vector<ScriptedThread> threads = {ScriptedThread{}};
  bool invalidate_on_resume = true;
  std::optional<std::string> fail_launch;  // launch answered success=false
  std::vector<ScriptedStop> stops;
};

// Validates structure and that every `ref` names an object of its stop.
// A top-level "objects" table is inherited by every stop; a stop's own
// table overrides entries with the same id.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& file);

}  // namespace vdb::mock
