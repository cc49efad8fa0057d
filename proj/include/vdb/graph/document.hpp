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

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vdb/graph/model.hpp"

namespace vdb::graph {

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph document used both for export and as the API payload:
//   {"location":{file,line,method}, "identity":"auto|memory|path",
//    "roots":[{name, primitive:{type,value}} | {name, nodeId}],
//    "nodes":[{id, type, attributes:[{name,type,value}], expanded}],
//    "links":[{source, field, target}]}
// Nodes are sorted by id key, links by (source, field, target), so equal
// graphs serialize to identical bytes. Transient DAP references are not
// part of the document.
nlohmann::json serialize_graph(const ObjectGraph& graph);
nlohmann::json serialize_location(const SourceLocation& location);

// Throws DocumentError on schema violations or broken references.
ObjectGraph deserialize_graph(const nlohmann::json& doc);
SourceLocation deserialize_location(const nlohmann::json& doc);

}  // namespace vdb::graph
