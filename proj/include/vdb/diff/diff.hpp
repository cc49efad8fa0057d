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

#include <map>
#include <vector>

#include "vdb/diff/change_set.hpp"

namespace vdb::diff {

// A node is added/removed when its id appears on one side only. A node on
// both sides is changed when its type differs, or when it is expanded on
// both sides and an attribute or the target set of an outgoing field
// differs. Links are compared setwise. Throws DiffError when the graphs
// were built under different identity modes.
ChangeSet diff(const ObjectGraph& prev, const ObjectGraph& curr);

// What a patch carries besides the change set: the new location and roots,
// and node payloads for (at least) every added and changed id.
struct Patch {
  graph::SourceLocation location;
  std::vector<graph::RootBinding> roots;
  std::map<StableId, ObjectNode> nodes;
};

// Payloads for added and changed nodes, plus nodes whose expansion state
// differs so that apply() can reproduce `curr` exactly.
Patch make_patch(const ObjectGraph& prev, const ObjectGraph& curr,
                 const ChangeSet& changes);

// Rebuilds the successor of `prev`. With a make_patch() payload the result
// equals `curr` apart from transient references; with added/changed
// payloads only it agrees with `curr` on mutually expanded content.
// Throws DiffError(DanglingId) when the change set does not fit `prev`.
ObjectGraph apply(const ObjectGraph& prev, const ChangeSet& changes,
                  const Patch& patch);

}  // namespace vdb::diff
