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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vdb/source_location.hpp"

namespace vdb::graph {

using vdb::SourceLocation;

enum class IdStrategy { Memory, Path };

// Durable object identity across steps. Equal ids in consecutive snapshots
// denote the same object.
struct StableId {
  IdStrategy strategy = IdStrategy::Path;
  std::string key;

  static StableId memory(std::string key) {
    return {IdStrategy::Memory, std::move(key)};
  }
  static StableId path(std::string key) {
    return {IdStrategy::Path, std::move(key)};
  }

  // Wire form: "mem:<key>" or "path:<key>".
  std::string str() const;
  static std::optional<StableId> parse(std::string_view text);

  friend bool operator==(const StableId&, const StableId&) = default;
  // Ordered by key first so serialized node lists sort by key.
  friend std::strong_ordering operator<=>(const StableId& a,
                                          const StableId& b) {
    if (auto c = a.key <=> b.key; c != 0) return c;
    return a.strategy <=> b.strategy;
  }
};

// Which identity rule the builder applied; diffing requires both sides to
// agree.
enum class IdentityMode { Auto, Memory, Path };

std::string_view to_string(IdentityMode mode);
std::optional<IdentityMode> parse_identity_mode(std::string_view text);

struct Attribute {
  std::string name;
  std::string type_name;
  std::string value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct ObjectNode {
  StableId id;
  std::string type_name;
  std::vector<Attribute> attributes;  // adapter order, names unique
  bool expanded = false;
  std::int64_t transient_ref = 0;  // current-stop DAP handle, 0 if none

  const Attribute* find_attribute(std::string_view name) const;

  friend bool operator==(const ObjectNode&, const ObjectNode&) = default;
};

struct Link {
  StableId source;
  std::string field;
  StableId target;

  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

struct Primitive {
  std::string type_name;
  std::string value;

  friend bool operator==(const Primitive&, const Primitive&) = default;
};

struct RootBinding {
  std::string name;
  std::variant<Primitive, StableId> binding;

  const StableId* node() const { return std::get_if<StableId>(&binding); }

  friend bool operator==(const RootBinding&, const RootBinding&) = default;
};

// The object diagram for one paused frame. Immutable once built; build and
// merge operations return new graphs.
struct ObjectGraph {
  SourceLocation location;
  IdentityMode identity = IdentityMode::Auto;
  std::vector<RootBinding> roots;
  std::map<StableId, ObjectNode> nodes;
  std::set<Link> links;

  const ObjectNode* find(const StableId& id) const;

  // Links leaving `source`, in (field, target) order.
  std::vector<Link> outgoing(const StableId& source) const;

  friend bool operator==(const ObjectGraph&, const ObjectGraph&) = default;
};

class GraphInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Throws GraphInvariantError when a link endpoint or root binding does not
// resolve, an unexpanded node has outgoing links, or attribute names repeat.
void check_invariants(const ObjectGraph& graph);

// Link distance from the nearest root binding (root-bound nodes are at 0).
// Unreachable nodes are absent from the result.
std::map<StableId, std::size_t> distances_from_roots(const ObjectGraph& graph);

}  // namespace vdb::graph
