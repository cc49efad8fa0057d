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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vdb/dap/message.hpp"
#include "vdb/graph/model.hpp"

namespace vdb::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

inline std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {
      "a", "Z", "0", " ", "\"", "\\", "\n", "\t", "{", "}", ":", "\r\n",
      "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x90\x9B", "Content-Length: 3"};
  std::string out;
  const auto n = pick(rng, max_len + 1);
  for (std::size_t i = 0; i < n; ++i) out += pieces[pick(rng, pieces.size())];
  return out;
}

inline nlohmann::json random_json(Rng& rng, int depth) {
  switch (pick(rng, depth > 0 ? 7 : 5)) {
    case 0:
      return nullptr;
    case 1:
      return coin(rng);
    case 2:
      return std::uniform_int_distribution<std::int64_t>(-1'000'000,
                                                         1'000'000)(rng);
    case 3:
      return random_text(rng, 6);
    case 4:
      return static_cast<double>(pick(rng, 1000)) / 8.0;
    case 5: {
      auto arr = nlohmann::json::array();
      for (auto n = pick(rng, 4); n > 0; --n) {
        arr.push_back(random_json(rng, depth - 1));
      }
      return arr;
    }
    default: {
      auto obj = nlohmann::json::object();
      for (auto n = pick(rng, 4); n > 0; --n) {
        obj[random_text(rng, 3)] = random_json(rng, depth - 1);
      }
      return obj;
    }
  }
}

// A random, schema-valid DAP envelope. Null bodies/arguments are absent on
// the wire, so they are only generated as absent.
inline dap::ProtocolMessage random_message(Rng& rng, std::int64_t seq) {
  static const std::vector<std::string> commands = {
      "initialize", "launch", "stackTrace", "scopes", "variables", "next"};
  static const std::vector<std::string> events = {"stopped", "output",
                                                  "terminated", "initialized"};
  auto body = [&]() -> nlohmann::json {
    if (coin(rng, 0.2)) return nullptr;
    auto obj = nlohmann::json::object();
    for (auto n = pick(rng, 5); n > 0; --n) {
      obj[random_text(rng, 3)] = random_json(rng, 3);
    }
    return obj;
  };
  switch (pick(rng, 3)) {
    case 0:
      return dap::ProtocolMessage::request(seq, commands[pick(rng, commands.size())],
                                           body());
    case 1: {
      auto req = dap::ProtocolMessage::request(
          1 + static_cast<std::int64_t>(pick(rng, 500)),
          commands[pick(rng, commands.size())]);
      bool ok = coin(rng, 0.8);
      return dap::ProtocolMessage::response(
          seq, req, ok, body(),
          ok ? std::nullopt : std::optional<std::string>(random_text(rng, 5)));
    }
    default:
      return dap::ProtocolMessage::event(seq, events[pick(rng, events.size())],
                                         body());
  }
}

// Splits `bytes` into random non-empty chunks.
inline std::vector<std::string> random_chunks(Rng& rng, const std::string& bytes) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t len = 1 + pick(rng, coin(rng, 0.3) ? 4 : 97);
    out.push_back(bytes.substr(pos, len));
    pos += len;
  }
  return out;
}

struct GraphShape {
  std::size_t max_nodes = 12;
  graph::IdentityMode identity = graph::IdentityMode::Auto;
};

inline graph::StableId random_id(Rng& rng, graph::IdentityMode mode,
                                 std::size_t n) {
  bool memory = mode == graph::IdentityMode::Memory ||
                (mode == graph::IdentityMode::Auto && coin(rng));
  if (memory) return graph::StableId::memory("0x" + std::to_string(4096 + n));
  return graph::StableId::path("v" + std::to_string(n % 5) + "/f" +
                               std::to_string(n));
}

inline graph::ObjectNode random_node(Rng& rng, const graph::StableId& id) {
  static const std::vector<std::string> types = {"Node", "Leaf", "Box"};
  static const std::vector<std::string> attrs = {"value", "size", "name"};
  graph::ObjectNode n;
  n.id = id;
  n.type_name = types[pick(rng, types.size())];
  n.expanded = coin(rng, 0.7);
  if (n.expanded) {
    for (const auto& a : attrs) {
      if (coin(rng, 0.6)) {
        n.attributes.push_back({a, "int", std::to_string(pick(rng, 4))});
      }
    }
  }
  return n;
}

inline void random_links(Rng& rng, graph::ObjectGraph& g,
                         const graph::StableId& source) {
  static const std::vector<std::string> fields = {"left", "right", "next"};
  if (!g.nodes.at(source).expanded || g.nodes.empty()) return;
  std::vector<graph::StableId> ids;
  for (const auto& [id, n] : g.nodes) ids.push_back(id);
  for (const auto& f : fields) {
    if (coin(rng, 0.5)) g.links.insert({source, f, ids[pick(rng, ids.size())]});
  }
}

inline void random_roots(Rng& rng, graph::ObjectGraph& g) {
  g.roots.clear();
  std::vector<graph::StableId> ids;
  for (const auto& [id, n] : g.nodes) ids.push_back(id);
  for (std::size_t i = 0, n = 1 + pick(rng, 3); i < n; ++i) {
    std::string name = "r" + std::to_string(i);
    if (!ids.empty() && coin(rng, 0.7)) {
      g.roots.push_back({name, ids[pick(rng, ids.size())]});
    } else {
      g.roots.push_back(
          {name, graph::Primitive{"int", std::to_string(pick(rng, 9))}});
    }
  }
}

inline graph::ObjectGraph random_graph(Rng& rng, const GraphShape& shape = {}) {
  graph::ObjectGraph g;
  g.identity = shape.identity;
  g.location = {"/src/gen/file" + std::to_string(pick(rng, 3)) + ".c",
                1 + static_cast<std::int64_t>(pick(rng, 50)),
                coin(rng) ? std::optional<std::string>("fn") : std::nullopt};
  std::size_t count = pick(rng, shape.max_nodes + 1);
  std::size_t serial = 0;
  while (g.nodes.size() < count) {
    auto id = random_id(rng, shape.identity, serial++);
    g.nodes.emplace(id, random_node(rng, id));
  }
  for (const auto& [id, n] : std::map(g.nodes)) random_links(rng, g, id);
  random_roots(rng, g);
  return g;
}

// A plausible successor of `prev`: some nodes removed, some added, some
// retyped, re-valued, toggled or relinked.
inline graph::ObjectGraph mutate(Rng& rng, const graph::ObjectGraph& prev,
                                 const GraphShape& shape = {}) {
  graph::ObjectGraph g = prev;
  g.location.line += static_cast<std::int64_t>(pick(rng, 3));
  std::vector<graph::StableId> ids;
  for (const auto& [id, n] : g.nodes) ids.push_back(id);
  for (const auto& id : ids) {
    if (coin(rng, 0.15)) g.nodes.erase(id);
  }
  std::size_t serial = 1000 + pick(rng, 1000);
  for (auto n = pick(rng, 4); n > 0; --n) {
    auto id = random_id(rng, shape.identity, serial++);
    g.nodes.emplace(id, random_node(rng, id));
  }
  for (auto& [id, n] : g.nodes) {
    if (coin(rng, 0.1)) n.type_name += "2";
    if (coin(rng, 0.15)) n.expanded = !n.expanded;
    if (n.expanded && coin(rng, 0.3)) {
      if (!n.attributes.empty() && coin(rng)) {
        n.attributes[pick(rng, n.attributes.size())].value += "9";
      } else if (!n.attributes.empty() && coin(rng)) {
        n.attributes.erase(n.attributes.begin() +
                           static_cast<std::ptrdiff_t>(pick(rng, n.attributes.size())));
      } else if (!n.find_attribute("extra")) {
        n.attributes.push_back({"extra", "bool", "true"});
      }
    }
    if (!n.expanded) n.attributes.clear();
  }
  std::set<graph::Link> kept;
  for (const auto& l : g.links) {
    const auto* s = g.find(l.source);
    if (s && s->expanded && g.nodes.contains(l.target) && coin(rng, 0.85)) {
      kept.insert(l);
    }
  }
  g.links = std::move(kept);
  for (const auto& [id, n] : std::map(g.nodes)) {
    if (coin(rng, 0.3)) random_links(rng, g, id);
  }
  if (coin(rng, 0.3)) {
    random_roots(rng, g);
  } else {
    for (auto& r : g.roots) {
      if (const auto* id = r.node(); id && !g.nodes.contains(*id)) {
        r.binding = graph::Primitive{"int", "0"};
      }
    }
  }
  return g;
}

}  // namespace vdb::testing
