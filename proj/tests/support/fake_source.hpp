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
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdb/dap/variables.hpp"

namespace vdb::testing {

// In-memory variable tree keyed by variables reference.
class FakeSource : public dap::VariableSource {
 public:
  std::map<std::int64_t, std::vector<dap::RawVariable>> children;
  std::set<std::int64_t> failing;
  std::vector<std::int64_t> fetched;

  std::vector<dap::RawVariable> fetch_children(std::int64_t ref) override {
    fetched.push_back(ref);
    if (failing.contains(ref)) {
      throw std::runtime_error("fetch of " + std::to_string(ref) + " failed");
    }
    auto it = children.find(ref);
    if (it == children.end()) {
      throw std::runtime_error("unknown reference " + std::to_string(ref));
    }
    return it->second;
  }
};

inline dap::RawVariable prim(std::string name, std::string type,
                             std::string value) {
  return {std::move(name), std::move(value), std::move(type), 0, std::nullopt};
}

inline dap::RawVariable null_var(std::string name,
                                 std::string literal = "null") {
  return {std::move(name), std::move(literal), std::nullopt, 0, std::nullopt};
}

inline dap::RawVariable ref(std::string name, std::string type,
                            std::int64_t reference,
                            std::optional<std::string> memory = std::nullopt) {
  return {std::move(name), type + "@" + std::to_string(reference),
          std::move(type), reference, std::move(memory)};
}

}  // namespace vdb::testing
