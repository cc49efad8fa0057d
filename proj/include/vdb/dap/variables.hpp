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
#include <optional>
#include <string>
#include <vector>

namespace vdb::dap {

// A variable exactly as the adapter reported it. `variables_reference` is
// the adapter's transient handle and is only meaningful during the stop in
// which it was issued; 0 means the variable has no children.
struct RawVariable {
  std::string name;
  std::string value;
  std::optional<std::string> type_name;
  std::int64_t variables_reference = 0;
  std::optional<std::string> memory_reference;

  friend bool operator==(const RawVariable&, const RawVariable&) = default;
};

struct ScopeRef {
  std::string name;
  std::int64_t variables_reference = 0;
  bool expensive = false;

  friend bool operator==(const ScopeRef&, const ScopeRef&) = default;
};

// Anything that can resolve a variables reference into its children.
class VariableSource {
 public:
  virtual ~VariableSource() = default;
  virtual std::vector<RawVariable> fetch_children(
      std::int64_t variables_reference) = 0;
};

}  // namespace vdb::dap
