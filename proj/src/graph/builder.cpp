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

#include "vdb/graph/builder.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

namespace vdb::graph {

namespace {

using dap::RawVariable;

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Key under which one object is recognised twice within a single stop.
std::string object_key(const RawVariable& var, IdentityMode mode) {
  if (mode != IdentityMode::Path && var.memory_reference &&
      !var.memory_reference->empty()) {
    return "m:" + *var.memory_reference + "|" + var.type_name.value_or("");
  }
  return "r:" + std::to_string(var.variables_reference);
}

// Renames repeated child names to "name#2", "name#3", ...
std::vector<std::string> unique_names(std::span<const RawVariable> vars) {
  std::vector<std::string> out;
  std::set<std::string> used;
  out.reserve(vars.size());
  for (const auto& v : vars) {
    std::string name = v.name;
    for (int n = 2; used.contains(name); ++n) {
      name = v.name + "#" + std::to_string(n);
    }
    used.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

// Memory ids can collide (a struct and its first member share an address);
// the later object falls back to its path.
StableId unique_identity(const std::string& path, const RawVariable& var,
                         IdentityMode mode,
                         const std::map<StableId, ObjectNode>& taken) {
  auto id = assign_identity(path, var.memory_reference, mode);
  if (id.strategy == IdStrategy::Memory && taken.contains(id)) {
    id = StableId::path(path);
  }
  return id;
}

ObjectNode make_node(const StableId& id, const RawVariable& var) {
  ObjectNode node;
  node.id = id;
  node.type_name = var.type_name.value_or("");
  node.transient_ref = var.variables_reference;
  return node;
}

struct Discovery {
  std::string path;
  RawVariable var;
  std::optional<StableId> parent;  // nullopt for root variables
  std::string field;
};

// Breadth-first builder state for one stop.
class Builder {
 public:
  Builder(const SourceLocation& location, dap::VariableSource& source,
          const BuildOptions& options)
      : source_(source), options_(options) {
    graph_.location = location;
    graph_.identity = options.identity;
  }

  ObjectGraph run(std::span<const dap::ScopeRef> scopes) {
    std::vector<Discovery> level;
    std::set<std::string> root_names;
    for (const auto& scope : scopes) {
      if (scope.variables_reference <= 0) continue;
      std::vector<RawVariable> vars;
      try {
        vars = source_.fetch_children(scope.variables_reference);
      } catch (const std::exception& e) {
        fail("cannot fetch scope '" + scope.name + "': " + e.what(), {},
             &level);
      }
      for (auto& var : vars) {
        if (is_null_variable(var, options_)) continue;
        std::string name = var.name;
        for (int n = 2; root_names.contains(name); ++n) {
          name = var.name + "#" + std::to_string(n);
        }
        root_names.insert(name);
        if (!is_object_variable(var, options_)) {
          graph_.roots.push_back(
              {name, Primitive{var.type_name.value_or(""), var.value}});
          continue;
        }
        auto key = object_key(var, options_.identity);
        graph_.roots.push_back({name, StableId{}});
        root_slots_.push_back({graph_.roots.size() - 1, key});
        level.push_back({path_segment(name), std::move(var), std::nullopt, ""});
      }
    }

    for (std::size_t depth = 0; !level.empty(); ++depth) {
      auto created = settle(level);
      level.clear();
      if (depth >= options_.depth_limit) break;
      for (std::size_t i = 0; i < created.size(); ++i) {
        auto& node = graph_.nodes.at(created[i]);
        std::vector<RawVariable> children;
        try {
          children = source_.fetch_children(node.transient_ref);
        } catch (const std::exception& e) {
          std::vector<StableId> unexpanded(created.begin() + i, created.end());
          fail("cannot fetch children of " + node.id.str() + ": " + e.what(),
               unexpanded, &level);
        }
        node.expanded = true;
        expand(node.id, children, level);
      }
    }
    bind_roots();
    check_invariants(graph_);
    return std::move(graph_);
  }

 private:
  // Assigns ids to every object first seen at this level, creates their
  // nodes and resolves the links that discovered them. Returns the new
  // nodes in canonical-path order.
  std::vector<StableId> settle(const std::vector<Discovery>& level) {
    std::map<std::string, const Discovery*> canonical;
    for (const auto& d : level) {
      auto key = object_key(d.var, options_.identity);
      if (ids_.contains(key)) continue;
      auto [it, inserted] = canonical.emplace(key, &d);
      const auto& best = it->second->path;
      if (!inserted && (d.path.size() < best.size() ||
                        (d.path.size() == best.size() && d.path < best))) {
        it->second = &d;
      }
    }
    std::vector<std::pair<std::string, std::string>> order;  // path, key
    for (const auto& [key, d] : canonical) order.emplace_back(d->path, key);
    std::sort(order.begin(), order.end());

    std::vector<StableId> created;
    for (const auto& [path, key] : order) {
      const auto& var = canonical.at(key)->var;
      auto id = unique_identity(path, var, options_.identity, graph_.nodes);
      graph_.nodes.emplace(id, make_node(id, var));
      ids_.emplace(key, id);
      created.push_back(id);
    }
    for (const auto& d : level) {
      if (d.parent) {
        graph_.links.insert(
            {*d.parent, d.field, ids_.at(object_key(d.var, options_.identity))});
      }
    }
    return created;
  }

  void expand(const StableId& parent, std::span<const RawVariable> children,
              std::vector<Discovery>& next) {
    auto& node = graph_.nodes.at(parent);
    const auto base = anchor_path(parent);
    auto names = unique_names(children);
    for (std::size_t i = 0; i < children.size(); ++i) {
      const auto& child = children[i];
      if (is_null_variable(child, options_)) continue;
      if (!is_object_variable(child, options_)) {
        node.attributes.push_back(
            {names[i], child.type_name.value_or(""), child.value});
        continue;
      }
      next.push_back({child_path(base, names[i]), child, parent, names[i]});
    }
  }

  void bind_roots() {
    for (const auto& [index, key] : root_slots_) {
      graph_.roots[index].binding = ids_.at(key);
    }
  }

  [[noreturn]] void fail(const std::string& why,
                         const std::vector<StableId>& unexpanded,
                         std::vector<Discovery>* pending = nullptr) {
    for (const auto& id : unexpanded) {
      auto& node = graph_.nodes.at(id);
      node.expanded = false;
      node.attributes.clear();
    }
    if (pending && !pending->empty()) settle(*pending);
    // Roots that never got a node (scope fetch failed) are dropped.
    std::vector<RootBinding> kept;
    for (std::size_t i = 0; i < graph_.roots.size(); ++i) {
      auto slot = std::find_if(root_slots_.begin(), root_slots_.end(),
                               [i](const auto& s) { return s.first == i; });
      if (slot == root_slots_.end()) {
        kept.push_back(graph_.roots[i]);
      } else if (auto it = ids_.find(slot->second); it != ids_.end()) {
        kept.push_back({graph_.roots[i].name, it->second});
      }
    }
    graph_.roots = std::move(kept);
    throw PartialGraphError(std::move(graph_), why);
  }

  dap::VariableSource& source_;
  const BuildOptions& options_;
  ObjectGraph graph_;
  std::map<std::string, StableId> ids_;
  std::vector<std::pair<std::size_t, std::string>> root_slots_;
};

}  // namespace

bool is_null_variable(const dap::RawVariable& var,
                      const BuildOptions& options) {
  if (var.variables_reference != 0) return false;
  return std::find(options.null_literals.begin(), options.null_literals.end(),
                   var.value) != options.null_literals.end();
}

bool is_string_like(const dap::RawVariable& var) {
  if (var.type_name) {
    static const std::unordered_set<std::string> string_types = {
        "string",         "str",          "java.lang.string",
        "std::string",    "std::wstring", "std::__cxx11::string",
        "&str",           "system.string", "char*", "const char*",
        "nsstring"};
    if (string_types.contains(lowercase(*var.type_name))) return true;
  }
  const auto& v = var.value;
  return v.size() >= 2 && v.front() == '"' && v.back() == '"';
}

bool is_object_variable(const dap::RawVariable& var,
                        const BuildOptions& options) {
  return var.variables_reference > 0 && !is_string_like(var) &&
         !is_null_variable(var, options);
}

std::string path_segment(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string child_path(std::string_view parent_path, std::string_view name) {
  std::string out(parent_path);
  out.push_back('/');
  out += path_segment(name);
  return out;
}

std::string anchor_path(const StableId& id) {
  return id.strategy == IdStrategy::Memory ? "@" + id.key : id.key;
}

StableId assign_identity(std::string_view canonical_path,
                         const std::optional<std::string>& memory_reference,
                         IdentityMode mode) {
  if (mode != IdentityMode::Path && memory_reference &&
      !memory_reference->empty()) {
    return StableId::memory(*memory_reference);
  }
  return StableId::path(std::string(canonical_path));
}

ObjectGraph build_graph(const SourceLocation& location,
                        std::span<const dap::ScopeRef> scopes,
                        dap::VariableSource& source,
                        const BuildOptions& options) {
  return Builder(location, source, options).run(scopes);
}

ObjectGraph merge_children(const ObjectGraph& graph, const StableId& parent,
                           std::span<const dap::RawVariable> children,
                           const BuildOptions& options) {
  const auto* existing = graph.find(parent);
  if (!existing) {
    throw MergeError(MergeError::Kind::UnknownParent,
                     "no node " + parent.str() + " in the current graph");
  }
  if (existing->expanded) {
    throw MergeError(MergeError::Kind::AlreadyExpanded,
                     "node " + parent.str() + " is already expanded");
  }

  ObjectGraph out = graph;
  const auto base = anchor_path(parent);
  auto names = unique_names(children);
  std::vector<Attribute> attributes;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const auto& child = children[i];
    if (is_null_variable(child, options)) continue;
    if (!is_object_variable(child, options)) {
      attributes.push_back(
          {names[i], child.type_name.value_or(""), child.value});
      continue;
    }
    const ObjectNode* match = nullptr;
    const bool by_memory = graph.identity != IdentityMode::Path &&
                           child.memory_reference &&
                           !child.memory_reference->empty();
    for (const auto& [id, node] : out.nodes) {
      bool same = by_memory
                      ? id == StableId::memory(*child.memory_reference) &&
                            node.type_name == child.type_name.value_or("")
                      : node.transient_ref == child.variables_reference;
      if (same) {
        match = &node;
        break;
      }
    }
    StableId target;
    if (match) {
      target = match->id;
    } else {
      target = unique_identity(child_path(base, names[i]), child,
                               graph.identity, out.nodes);
      out.nodes.emplace(target, make_node(target, child));
    }
    out.links.insert({parent, names[i], target});
  }
  auto& node = out.nodes.at(parent);
  node.attributes = std::move(attributes);
  node.expanded = true;
  check_invariants(out);
  return out;
}

}  // namespace vdb::graph
