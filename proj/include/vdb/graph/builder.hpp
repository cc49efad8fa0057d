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

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vdb/dap/variables.hpp"
#include "vdb/graph/model.hpp"

namespace vdb::graph {

inline const std::vector<std::string>& default_null_literals() {
  static const std::vector<std::string> literals = {"null", "nil", "None",
                                                    "<null>"};
  return literals;
}

struct BuildOptions {
  std::size_t depth_limit = 2;
  IdentityMode identity = IdentityMode::Auto;
  std::vector<std::string> null_literals = default_null_literals();
};

// A variable is null when it has no children and its display value is one
// of the configured null literals.
bool is_null_variable(const dap::RawVariable& var, const BuildOptions& options);

// Strings render inline as attributes even when the adapter lets you expand
// them.
bool is_string_like(const dap::RawVariable& var);

// Non-null, non-string variables with children become nodes.
bool is_object_variable(const dap::RawVariable& var,
                        const BuildOptions& options);

// Escapes one path segment: '~' -> "~0", '/' -> "~1".
std::string path_segment(std::string_view name);
std::string child_path(std::string_view parent_path, std::string_view name);

// The path under which a node's children are addressed: its key for
// path ids, "@<key>" for memory ids.
std::string anchor_path(const StableId& id);

StableId assign_identity(std::string_view canonical_path,
                         const std::optional<std::string>& memory_reference,
                         IdentityMode mode);

// Children could not be fetched part-way through a build. `partial` is
// referentially closed; nodes whose children were not fetched are left
// unexpanded.
class PartialGraphError : public std::runtime_error {
 public:
  PartialGraphError(ObjectGraph partial, const std::string& what)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ObjectGraph& partial() const { return partial_; }

 private:
  ObjectGraph partial_;
};

// Breadth-first expansion of the frame's scopes. Root-bound objects sit at
// depth 0; nodes at depth < depth_limit are expanded, nodes at exactly
// depth_limit are present but unexpanded. Throws PartialGraphError.
ObjectGraph build_graph(const SourceLocation& location,
                        std::span<const dap::ScopeRef> scopes,
                        dap::VariableSource& source,
                        const BuildOptions& options);

class MergeError : public std::runtime_error {
 public:
  enum class Kind { UnknownParent, AlreadyExpanded };
  MergeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Expands one unexpanded node with freshly fetched children. Everything
// else in the graph is carried over unchanged.
ObjectGraph merge_children(const ObjectGraph& graph, const StableId& parent,
                           std::span<const dap::RawVariable> children,
                           const BuildOptions& options);

}  // namespace vdb::graph
