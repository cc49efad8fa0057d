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

namespace vdb {

// Where a snapshot was collected. `line` is 1-based.
struct SourceLocation {
  std::string file;
  std::int64_t line = 1;
  std::optional<std::string> method;

  friend bool operator==(const SourceLocation&,
                         const SourceLocation&) = default;
};

}  // namespace vdb
