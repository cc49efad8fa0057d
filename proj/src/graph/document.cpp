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

#include "vdb/graph/document.hpp"

namespace vdb::graph {

namespace {

using nlohmann::json;

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) throw DocumentError("expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw DocumentError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string text(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_string()) {
    throw DocumentError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

const json& array(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_array()) {
    throw DocumentError(std::string("field '") + key + "' must be an array");
  }
  return v;
}

StableId id_field(const json& doc, const char* key) {
  auto raw = text(doc, key);
  auto id = StableId::parse(raw);
  if (!id) throw DocumentError("malformed node id '" + raw + "'");
  return *id;
}

}  // namespace

nlohmann::json serialize_location(const SourceLocation& location) {
  return {{"file", location.file},
          {"line", location.line},
          {"method", location.method ? json(*location.method) : json(nullptr)}};
}

SourceLocation deserialize_location(const nlohmann::json& doc) {
  SourceLocation loc;
  loc.file = text(doc, "file");
  const auto& line = field(doc, "line");
  if (!line.is_number_integer() || line.get<std::int64_t>() < 1) {
    throw DocumentError("location line must be a positive integer");
  }
  loc.line = line.get<std::int64_t>();
  if (auto it = doc.find("method"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw DocumentError("method must be a string");
    loc.method = it->get<std::string>();
  }
  return loc;
}

nlohmann::json serialize_graph(const ObjectGraph& graph) {
  json roots = json::array();
  for (const auto& root : graph.roots) {
    if (const auto* id = root.node()) {
      roots.push_back({{"name", root.name}, {"nodeId", id->str()}});
    } else {
      const auto& p = std::get<Primitive>(root.binding);
      roots.push_back({{"name", root.name},
                       {"primitive", {{"type", p.type_name}, {"value", p.value}}}});
    }
  }
  json nodes = json::array();
  for (const auto& [id, node] : graph.nodes) {
    json attributes = json::array();
    for (const auto& a : node.attributes) {
      attributes.push_back(
          {{"name", a.name}, {"type", a.type_name}, {"value", a.value}});
    }
    nodes.push_back({{"id", id.str()},
                     {"type", node.type_name},
                     {"attributes", std::move(attributes)},
                     {"expanded", node.expanded}});
  }
  json links = json::array();
  for (const auto& l : graph.links) {
    links.push_back({{"source", l.source.str()},
                     {"field", l.field},
                     {"target", l.target.str()}});
  }
  return {{"location", serialize_location(graph.location)},
          {"identity", to_string(graph.identity)},
          {"roots", std::move(roots)},
          {"nodes", std::move(nodes)},
          {"links", std::move(links)}};
}

ObjectGraph deserialize_graph(const nlohmann::json& doc) {
  ObjectGraph g;
  g.location = deserialize_location(field(doc, "location"));
  if (auto it = doc.find("identity"); it != doc.end()) {
    auto mode = it->is_string() ? parse_identity_mode(it->get<std::string>())
                                : std::nullopt;
    if (!mode) throw DocumentError("unknown identity mode");
    g.identity = *mode;
  }
  for (const auto& r : array(doc, "roots")) {
    RootBinding root;
    root.name = text(r, "name");
    if (r.contains("nodeId")) {
      root.binding = id_field(r, "nodeId");
    } else {
      const auto& p = field(r, "primitive");
      root.binding = Primitive{text(p, "type"), text(p, "value")};
    }
    g.roots.push_back(std::move(root));
  }
  for (const auto& n : array(doc, "nodes")) {
    ObjectNode node;
    node.id = id_field(n, "id");
    node.type_name = text(n, "type");
    const auto& expanded = field(n, "expanded");
    if (!expanded.is_boolean()) throw DocumentError("expanded must be boolean");
    node.expanded = expanded.get<bool>();
    for (const auto& a : array(n, "attributes")) {
      node.attributes.push_back({text(a, "name"), text(a, "type"),
                                 text(a, "value")});
    }
    auto id = node.id;
    if (!g.nodes.emplace(id, std::move(node)).second) {
      throw DocumentError("duplicate node id " + id.str());
    }
  }
  for (const auto& l : array(doc, "links")) {
    g.links.insert(
        {id_field(l, "source"), text(l, "field"), id_field(l, "target")});
  }
  try {
    check_invariants(g);
  } catch (const GraphInvariantError& e) {
    throw DocumentError(e.what());
  }
  return g;
}

}  // namespace vdb::graph
