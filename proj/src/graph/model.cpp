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

#include "vdb/graph/model.hpp"

#include <deque>
#include <set>

namespace vdb::graph {

namespace {

constexpr std::string_view kMemoryPrefix = "mem:";
constexpr std::string_view kPathPrefix = "path:";

}  // namespace

std::string StableId::str() const {
  std::string out(strategy == IdStrategy::Memory ? kMemoryPrefix
                                                 : kPathPrefix);
  out += key;
  return out;
}

std::optional<StableId> StableId::parse(std::string_view text) {
  if (text.starts_with(kMemoryPrefix)) {
    return memory(std::string(text.substr(kMemoryPrefix.size())));
  }
  if (text.starts_with(kPathPrefix)) {
    return path(std::string(text.substr(kPathPrefix.size())));
  }
  return std::nullopt;
}

std::string_view to_string(IdentityMode mode) {
  switch (mode) {
    case IdentityMode::Auto:
      return "auto";
    case IdentityMode::Memory:
      return "memory";
    case IdentityMode::Path:
      return "path";
  }
  return "auto";
}

std::optional<IdentityMode> parse_identity_mode(std::string_view text) {
  if (text == "auto") return IdentityMode::Auto;
  if (text == "memory") return IdentityMode::Memory;
  if (text == "path") return IdentityMode::Path;
  return std::nullopt;
}

const Attribute* ObjectNode::find_attribute(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const ObjectNode* ObjectGraph::find(const StableId& id) const {
  auto it = nodes.find(id);
  return it == nodes.end() ? nullptr : &it->second;
}

std::vector<Link> ObjectGraph::outgoing(const StableId& source) const {
  std::vector<Link> out;
  const Link lowest{source, "", StableId::memory("")};
  for (auto it = links.lower_bound(lowest);
       it != links.end() && it->source == source; ++it) {
    out.push_back(*it);
  }
  return out;
}

void check_invariants(const ObjectGraph& graph) {
  for (const auto& [id, node] : graph.nodes) {
    if (node.id != id) {
      throw GraphInvariantError("node stored under foreign id " + id.str());
    }
    std::set<std::string_view> names;
    for (const auto& a : node.attributes) {
      if (!names.insert(a.name).second) {
        throw GraphInvariantError("duplicate attribute '" + a.name +
                                  "' on " + id.str());
      }
    }
  }
  for (const auto& link : graph.links) {
    auto src = graph.nodes.find(link.source);
    if (src == graph.nodes.end() || !graph.nodes.contains(link.target)) {
      throw GraphInvariantError("dangling link " + link.source.str() + "." +
                                link.field + " -> " + link.target.str());
    }
    if (!src->second.expanded) {
      throw GraphInvariantError("unexpanded node " + link.source.str() +
                                " has outgoing link '" + link.field + "'");
    }
  }
  for (const auto& root : graph.roots) {
    if (const auto* id = root.node(); id && !graph.nodes.contains(*id)) {
      throw GraphInvariantError("root '" + root.name +
                                "' binds missing node " + id->str());
    }
  }
}

std::map<StableId, std::size_t> distances_from_roots(const ObjectGraph& graph) {
  std::map<StableId, std::size_t> dist;
  std::deque<StableId> queue;
  for (const auto& root : graph.roots) {
    if (const auto* id = root.node(); id && dist.emplace(*id, 0).second) {
      queue.push_back(*id);
    }
  }
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto d = dist.at(id);
    for (const auto& link : graph.outgoing(id)) {
      if (dist.emplace(link.target, d + 1).second) {
        queue.push_back(link.target);
      }
    }
  }
  return dist;
}

}  // namespace vdb::graph
