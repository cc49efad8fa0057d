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

#include "vdb/diff/diff.hpp"

#include <algorithm>
#include <iterator>

namespace vdb::diff {

namespace {

using nlohmann::json;

using FieldTargets = std::map<std::string, std::set<StableId>>;

FieldTargets targets_by_field(const ObjectGraph& g, const StableId& id) {
  FieldTargets out;
  for (const auto& link : g.outgoing(id)) out[link.field].insert(link.target);
  return out;
}

std::set<std::string> changed_fields(const ObjectGraph& prev,
                                     const ObjectNode& before,
                                     const ObjectGraph& curr,
                                     const ObjectNode& after) {
  std::set<std::string> fields;
  if (before.type_name != after.type_name) fields.insert(kTypeField);
  if (!before.expanded || !after.expanded) return fields;

  std::map<std::string, const graph::Attribute*> old_attrs;
  for (const auto& a : before.attributes) old_attrs.emplace(a.name, &a);
  for (const auto& a : after.attributes) {
    auto it = old_attrs.find(a.name);
    if (it == old_attrs.end() || !(*it->second == a)) fields.insert(a.name);
    if (it != old_attrs.end()) old_attrs.erase(it);
  }
  for (const auto& [name, attr] : old_attrs) fields.insert(name);

  auto old_links = targets_by_field(prev, before.id);
  auto new_links = targets_by_field(curr, after.id);
  for (const auto& [field, targets] : new_links) {
    auto it = old_links.find(field);
    if (it == old_links.end() || it->second != targets) fields.insert(field);
  }
  for (const auto& [field, targets] : old_links) {
    if (!new_links.contains(field)) fields.insert(field);
  }
  return fields;
}

json id_list(const std::set<StableId>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

json link_list(const std::set<Link>& links) {
  json out = json::array();
  for (const auto& l : links) {
    out.push_back({{"source", l.source.str()},
                   {"field", l.field},
                   {"target", l.target.str()}});
  }
  return out;
}

StableId parse_id(const json& v) {
  if (!v.is_string()) throw std::invalid_argument("node id must be a string");
  auto id = StableId::parse(v.get<std::string>());
  if (!id) throw std::invalid_argument("malformed node id " + v.dump());
  return *id;
}

std::set<StableId> parse_ids(const json& v) {
  std::set<StableId> out;
  for (const auto& e : v) out.insert(parse_id(e));
  return out;
}

std::set<Link> parse_links(const json& v) {
  std::set<Link> out;
  for (const auto& e : v) {
    out.insert({parse_id(e.at("source")), e.at("field").get<std::string>(),
                parse_id(e.at("target"))});
  }
  return out;
}

[[noreturn]] void dangling(const std::string& what) {
  throw DiffError(DiffError::Kind::DanglingId, what);
}

}  // namespace

ChangeSet diff(const ObjectGraph& prev, const ObjectGraph& curr) {
  if (prev.identity != curr.identity) {
    throw DiffError(DiffError::Kind::IdentityMismatch,
                    "cannot diff graphs built with identity '" +
                        std::string(graph::to_string(prev.identity)) +
                        "' and '" +
                        std::string(graph::to_string(curr.identity)) + "'");
  }
  ChangeSet out;
  auto p = prev.nodes.begin();
  auto c = curr.nodes.begin();
  while (p != prev.nodes.end() || c != curr.nodes.end()) {
    if (c == curr.nodes.end() ||
        (p != prev.nodes.end() && p->first < c->first)) {
      out.removed_nodes.insert(p->first);
      ++p;
    } else if (p == prev.nodes.end() || c->first < p->first) {
      out.added_nodes.insert(c->first);
      ++c;
    } else {
      auto fields = changed_fields(prev, p->second, curr, c->second);
      if (!fields.empty()) out.changed_nodes.emplace(c->first, std::move(fields));
      ++p;
      ++c;
    }
  }
  std::set_difference(curr.links.begin(), curr.links.end(), prev.links.begin(),
                      prev.links.end(),
                      std::inserter(out.added_links, out.added_links.end()));
  std::set_difference(prev.links.begin(), prev.links.end(), curr.links.begin(),
                      curr.links.end(),
                      std::inserter(out.removed_links, out.removed_links.end()));
  return out;
}

Patch make_patch(const ObjectGraph& prev, const ObjectGraph& curr,
                 const ChangeSet& changes) {
  Patch patch{curr.location, curr.roots, {}};
  for (const auto& [id, node] : curr.nodes) {
    const auto* before = prev.find(id);
    if (changes.added_nodes.contains(id) || changes.changed_nodes.contains(id) ||
        (before && before->expanded != node.expanded)) {
      patch.nodes.emplace(id, node);
    }
  }
  return patch;
}

ObjectGraph apply(const ObjectGraph& prev, const ChangeSet& changes,
                  const Patch& patch) {
  ObjectGraph out = prev;
  out.location = patch.location;
  out.roots = patch.roots;
  for (const auto& id : changes.removed_nodes) {
    if (out.nodes.erase(id) == 0) dangling("removed node " + id.str() + " unknown");
  }
  for (const auto& id : changes.added_nodes) {
    auto payload = patch.nodes.find(id);
    if (payload == patch.nodes.end()) {
      dangling("no payload for added node " + id.str());
    }
    if (!out.nodes.emplace(id, payload->second).second) {
      dangling("added node " + id.str() + " already present");
    }
  }
  for (const auto& [id, fields] : changes.changed_nodes) {
    auto payload = patch.nodes.find(id);
    auto it = out.nodes.find(id);
    if (payload == patch.nodes.end() || it == out.nodes.end()) {
      dangling("changed node " + id.str() + " unknown or without payload");
    }
    it->second = payload->second;
  }
  // Extra payloads (expansion-state changes) overwrite surviving nodes.
  for (const auto& [id, node] : patch.nodes) {
    if (auto it = out.nodes.find(id); it != out.nodes.end()) it->second = node;
  }
  for (const auto& link : changes.removed_links) {
    if (out.links.erase(link) == 0) {
      dangling("removed link " + link.source.str() + "." + link.field +
               " unknown");
    }
  }
  out.links.insert(changes.added_links.begin(), changes.added_links.end());
  for (const auto& link : out.links) {
    auto src = out.nodes.find(link.source);
    if (src == out.nodes.end() || !out.nodes.contains(link.target)) {
      dangling("link " + link.source.str() + "." + link.field +
               " has a missing endpoint");
    }
    src->second.expanded = true;
  }
  for (const auto& root : out.roots) {
    if (const auto* id = root.node(); id && !out.nodes.contains(*id)) {
      dangling("root '" + root.name + "' binds missing node " + id->str());
    }
  }
  return out;
}

nlohmann::json serialize_changes(const ChangeSet& changes) {
  json changed = json::object();
  for (const auto& [id, fields] : changes.changed_nodes) {
    changed[id.str()] = fields;
  }
  return {{"addedNodes", id_list(changes.added_nodes)},
          {"changedNodes", std::move(changed)},
          {"removedNodes", id_list(changes.removed_nodes)},
          {"addedLinks", link_list(changes.added_links)},
          {"removedLinks", link_list(changes.removed_links)}};
}

ChangeSet deserialize_changes(const nlohmann::json& doc) {
  ChangeSet out;
  try {
    out.added_nodes = parse_ids(doc.at("addedNodes"));
    out.removed_nodes = parse_ids(doc.at("removedNodes"));
    for (const auto& [id, fields] : doc.at("changedNodes").items()) {
      auto parsed = StableId::parse(id);
      if (!parsed) throw std::invalid_argument("malformed node id " + id);
      out.changed_nodes.emplace(*parsed, fields.get<std::set<std::string>>());
    }
    out.added_links = parse_links(doc.at("addedLinks"));
    out.removed_links = parse_links(doc.at("removedLinks"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed change set: ") +
                                e.what());
  }
  return out;
}

}  // namespace vdb::diff
