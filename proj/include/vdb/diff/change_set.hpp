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
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vdb/graph/model.hpp"

namespace vdb::diff {

using graph::Link;
using graph::ObjectGraph;
using graph::ObjectNode;
using graph::StableId;

// Differences between two consecutive snapshots. Added elements render
// green, changed nodes orange; removed elements are carried for history.
struct ChangeSet {
  std::set<StableId> added_nodes;
  std::map<StableId, std::set<std::string>> changed_nodes;
  std::set<StableId> removed_nodes;
  std::set<Link> added_links;
  std::set<Link> removed_links;

  bool empty() const {
    return added_nodes.empty() && changed_nodes.empty() &&
           removed_nodes.empty() && added_links.empty() &&
           removed_links.empty();
  }

  friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

// Reserved changed-field name for a node whose type name differs.
inline constexpr const char* kTypeField = "@type";

class DiffError : public std::runtime_error {
 public:
  enum class Kind { IdentityMismatch, DanglingId };
  DiffError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// {"addedNodes":[ids], "changedNodes":{id:[fields]}, "removedNodes":[ids],
//  "addedLinks":[{source,field,target}], "removedLinks":[...]}
nlohmann::json serialize_changes(const ChangeSet& changes);
ChangeSet deserialize_changes(const nlohmann::json& doc);

}  // namespace vdb::diff
