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

#include "vdb/mock/scenario.hpp"

#include <fstream>

namespace vdb::mock {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

std::string req_string(const json& doc, const char* key,
                       const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    bad(where, std::string("'") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> opt_string(const json& doc, const char* key,
                                      const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::nullopt;
  if (!it->is_string()) bad(where, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

const json& req_array(const json& doc, const char* key,
                      const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    bad(where, std::string("'") + key + "' must be an array");
  }
  return *it;
}

void require_object(const json& doc, const std::string& where) {
  if (!doc.is_object()) bad(where, "must be an object");
}

ScriptedVariable parse_variable(const json& doc, const std::string& where) {
  require_object(doc, where);
  ScriptedVariable v;
  v.name = req_string(doc, "name", where);
  v.type = opt_string(doc, "type", where);
  v.value = opt_string(doc, "value", where);
  v.ref = opt_string(doc, "ref", where);
  if (!v.value && !v.ref) bad(where, "variable needs 'value' or 'ref'");
  return v;
}

std::vector<ScriptedVariable> parse_variables(const json& list,
                                              const std::string& where) {
  std::vector<ScriptedVariable> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(parse_variable(list[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::map<std::string, ScriptedObject> parse_objects(const json& doc,
                                                    const std::string& where) {
  require_object(doc, where);
  std::map<std::string, ScriptedObject> out;
  for (const auto& [id, def] : doc.items()) {
    auto w = where + "." + id;
    require_object(def, w);
    ScriptedObject obj;
    obj.type = req_string(def, "type", w);
    obj.value = opt_string(def, "value", w);
    obj.memory_reference = opt_string(def, "memoryReference", w);
    if (def.contains("fields")) {
      obj.fields = parse_variables(req_array(def, "fields", w), w + ".fields");
    }
    out.emplace(id, std::move(obj));
  }
  return out;
}

SourceLocation parse_location(const json& doc, const std::string& where) {
  require_object(doc, where);
  SourceLocation loc;
  loc.file = req_string(doc, "file", where);
  auto line = doc.find("line");
  if (line == doc.end() || !line->is_number_integer() ||
      line->get<std::int64_t>() < 1) {
    bad(where, "'line' must be a positive integer");
  }
  loc.line = line->get<std::int64_t>();
  loc.method = opt_string(doc, "method", where);
  return loc;
}

std::vector<ScriptedScope> parse_scopes(const json& list,
                                        const std::string& where) {
  std::vector<ScriptedScope> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto w = where + "[" + std::to_string(i) + "]";
    require_object(list[i], w);
    ScriptedScope scope;
    scope.name = req_string(list[i], "name", w);
    scope.expensive = list[i].value("expensive", false);
    scope.variables =
        parse_variables(req_array(list[i], "variables", w), w + ".variables");
    out.push_back(std::move(scope));
  }
  return out;
}

ScriptedFrame parse_frame(const json& doc, const std::string& where) {
  ScriptedFrame frame;
  frame.location = parse_location(doc.at("location"), where + ".location");
  frame.name = opt_string(doc, "name", where)
                   .value_or(frame.location.method.value_or("frame"));
  if (doc.contains("scopes")) {
    frame.scopes = parse_scopes(req_array(doc, "scopes", where), where + ".scopes");
  }
  return frame;
}

void check_refs(const std::vector<ScriptedVariable>& vars,
                const std::map<std::string, ScriptedObject>& objects,
                const std::string& where) {
  for (const auto& v : vars) {
    if (v.ref && !objects.contains(*v.ref)) {
      bad(where, "variable '" + v.name + "' references undefined object '" +
                     *v.ref + "'");
    }
  }
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc) {
  require_object(doc, "scenario");
  Scenario s;
  if (auto it = doc.find("capabilities"); it != doc.end()) {
    require_object(*it, "capabilities");
    s.capabilities = *it;
  }
  if (auto it = doc.find("threads"); it != doc.end()) {
    s.threads.clear();
    for (const auto& t : *it) {
      s.threads.push_back({t.at("id").get<std::int64_t>(),
                           t.value("name", std::string("thread"))});
    }
  }
  s.invalidate_on_resume = doc.value("invalidateOnResume", true);
  s.fail_launch = opt_string(doc, "failLaunch", "scenario");

  std::map<std::string, ScriptedObject> shared;
  if (doc.contains("objects")) shared = parse_objects(doc.at("objects"), "objects");

  const auto& stops = req_array(doc, "stops", "scenario");
  for (std::size_t i = 0; i < stops.size(); ++i) {
    auto w = "stops[" + std::to_string(i) + "]";
    const auto& def = stops[i];
    require_object(def, w);
    ScriptedStop stop;
    stop.reason = opt_string(def, "reason", w).value_or("breakpoint");
    stop.thread_id = def.value("threadId", std::int64_t{1});
    if (def.contains("delayMs")) {
      const auto& d = def.at("delayMs");
      if (!d.is_number_unsigned()) bad(w, "'delayMs' must be a non-negative integer");
      stop.delay = std::chrono::milliseconds(d.get<std::int64_t>());
    }
    stop.objects = shared;
    if (def.contains("objects")) {
      for (auto& [id, obj] : parse_objects(def.at("objects"), w + ".objects")) {
        stop.objects.insert_or_assign(id, std::move(obj));
      }
    }
    if (def.contains("frames")) {
      const auto& frames = req_array(def, "frames", w);
      for (std::size_t f = 0; f < frames.size(); ++f) {
        stop.frames.push_back(
            parse_frame(frames[f], w + ".frames[" + std::to_string(f) + "]"));
      }
    } else {
      if (!def.contains("location")) bad(w, "needs 'location' or 'frames'");
      stop.frames.push_back(parse_frame(def, w));
    }
    for (const auto& frame : stop.frames) {
      for (const auto& scope : frame.scopes) {
        check_refs(scope.variables, stop.objects, w + " scope " + scope.name);
      }
    }
    for (const auto& [id, obj] : stop.objects) {
      check_refs(obj.fields, stop.objects, w + " object " + id);
    }
    s.stops.push_back(std::move(stop));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open scenario " + file.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ScenarioError("scenario " + file.string() + " is not valid JSON");
  }
  return parse_scenario(doc);
}

}  // namespace vdb::mock
