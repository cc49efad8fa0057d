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

#include "vdb/bridge/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

extern char** environ;

namespace vdb::bridge {

namespace {

constexpr std::string_view kEnvPrefix = "VDBRIDGE_";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::uint64_t unsigned_setting(const std::string& name, const std::string& text,
                               std::uint64_t max) {
  auto v = parse_unsigned(text);
  if (!v || *v > max) {
    throw ConfigError(name + " must be an integer between 0 and " +
                      std::to_string(max) + ", got '" + text + "'");
  }
  return *v;
}

bool bool_setting(const std::string& name, std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off" ||
      text.empty()) {
    return false;
  }
  throw ConfigError(name + " must be a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

// A setting is taken from its flag when given, else from the environment.
struct Layer {
  const CLI::App& app;
  const Environment& env;

  std::optional<std::string> single(const std::string& flag, const std::string& var,
                                    const std::string& flag_value) const {
    if (app.count(flag) > 0) return flag_value;
    auto it = env.find(std::string(kEnvPrefix) + var);
    if (it != env.end()) return it->second;
    return std::nullopt;
  }

  std::optional<std::vector<std::string>> list(
      const std::string& flag, const std::string& var,
      const std::vector<std::string>& flag_values) const {
    if (app.count(flag) > 0) return flag_values;
    auto it = env.find(std::string(kEnvPrefix) + var);
    if (it != env.end()) return split_list(it->second);
    return std::nullopt;
  }
};

nlohmann::json read_launch_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read launch file " + file.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("launch file " + file.string() +
                      " must contain a JSON object");
  }
  return doc;
}

}  // namespace

std::optional<dap::SourceBreakpoint> parse_breakpoint(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  auto line = parse_unsigned(text.substr(colon + 1));
  if (!line || *line < 1 ||
      *line > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    return std::nullopt;
  }
  return dap::SourceBreakpoint{std::string(text.substr(0, colon)),
                               static_cast<std::int64_t>(*line)};
}

Environment process_environment() {
  Environment env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    if (entry.substr(0, kEnvPrefix.size()) != kEnvPrefix) continue;
    auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

ParseOutcome parse_config(const std::vector<std::string>& args,
                          const Environment& env) {
  CLI::App app{"Visual debugging bridge: turns DAP stops into object graphs "
               "and pushes them to WebSocket clients."};
  app.name("vdbridge");
  app.footer(
      "Every option can also be set through an environment variable named\n"
      "VDBRIDGE_<OPTION>, e.g. VDBRIDGE_DEPTH=3. List options (VDBRIDGE_BP,\n"
      "VDBRIDGE_NULL_LITERAL) take comma-separated values. Flags take\n"
      "precedence over the environment.\n\n"
      "Exit status: 0 on normal termination, 2 adapter failure, 3 port bind\n"
      "failure, 64 configuration error.");

  std::string adapter, attach, launch, depth, history, port, bind, identity,
      frame, ui_dir, handshake_ms, request_ms, log_level;
  std::vector<std::string> bps, nulls;
  bool expensive = false;

  app.add_option("--adapter", adapter,
                 "Debug adapter command line, started as a child speaking DAP on stdio");
  app.add_option("--attach", attach, "Connect to a DAP server at HOST:PORT");
  app.add_option("--launch", launch,
                 "JSON file with launch (or attach) arguments for the adapter");
  app.add_option("--bp", bps, "Breakpoint FILE:LINE (repeatable)")->take_all();
  app.add_option("--depth", depth, "Initial expansion depth of the object graph [2]");
  app.add_option("--history", history, "Number of snapshots kept; 0 disables [10]");
  app.add_option("--port", port, "API and UI port; 0 picks a free one [8071]");
  app.add_option("--bind", bind, "Listen address [127.0.0.1]");
  app.add_option("--identity", identity, "Object identity: auto, memory or path [auto]");
  app.add_flag("--include-expensive", expensive, "Also expand scopes marked expensive");
  app.add_option("--null-literal", nulls,
                 "Display value treated as null (repeatable; replaces the defaults)")
      ->take_all();
  app.add_option("--frame", frame, "Stack frame to visualize, 0 = top [0]");
  app.add_option("--ui-dir", ui_dir, "Directory of static UI files served over HTTP");
  app.add_option("--handshake-timeout-ms", handshake_ms,
                 "Budget for the adapter handshake [10000]");
  app.add_option("--request-timeout-ms", request_ms,
                 "Budget for each adapter request [5000]");
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error or off [info]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, kExitOk, app.help()};
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, kExitConfig,
            std::string("error: ") + e.what() + "\n\n" + app.help()};
  }

  BridgeConfig cfg;
  Layer layer{app, env};
  try {
    auto adapter_v = layer.single("--adapter", "ADAPTER", adapter);
    auto attach_v = layer.single("--attach", "ATTACH", attach);
    if (app.count("--adapter") && app.count("--attach")) {
      throw ConfigError("--adapter and --attach are mutually exclusive");
    }
    if (app.count("--adapter")) attach_v.reset();
    if (app.count("--attach")) adapter_v.reset();
    if (adapter_v && attach_v) {
      throw ConfigError("VDBRIDGE_ADAPTER and VDBRIDGE_ATTACH are mutually exclusive");
    }
    if (adapter_v) {
      auto argv = dap::split_command_line(*adapter_v);
      if (argv.empty()) throw ConfigError("--adapter needs a command");
      cfg.adapter = dap::AdapterSpec::command_line(std::move(argv));
      cfg.launch.mode = dap::LaunchRequest::Mode::Launch;
    } else if (attach_v) {
      auto colon = attach_v->rfind(':');
      if (colon == std::string::npos || colon == 0) {
        throw ConfigError("--attach expects HOST:PORT, got '" + *attach_v + "'");
      }
      auto p = unsigned_setting("--attach port", attach_v->substr(colon + 1), 65535);
      if (p == 0) throw ConfigError("--attach port must not be 0");
      cfg.adapter = dap::AdapterSpec::tcp(attach_v->substr(0, colon),
                                          static_cast<std::uint16_t>(p));
      cfg.launch.mode = dap::LaunchRequest::Mode::Attach;
    } else {
      throw ConfigError("one of --adapter or --attach is required");
    }

    if (auto v = layer.single("--launch", "LAUNCH", launch)) {
      cfg.launch_file = *v;
      cfg.launch.arguments = read_launch_file(*v);
    }
    if (auto v = layer.list("--bp", "BP", bps)) {
      for (const auto& text : *v) {
        auto bp = parse_breakpoint(text);
        if (!bp) throw ConfigError("breakpoint must be FILE:LINE, got '" + text + "'");
        cfg.breakpoints.push_back(*bp);
      }
    }
    if (auto v = layer.single("--depth", "DEPTH", depth)) {
      cfg.depth = unsigned_setting("--depth", *v, 1'000'000);
    }
    if (auto v = layer.single("--history", "HISTORY", history)) {
      cfg.history = unsigned_setting("--history", *v, 1'000'000);
    }
    if (auto v = layer.single("--port", "PORT", port)) {
      cfg.port = static_cast<std::uint16_t>(unsigned_setting("--port", *v, 65535));
    }
    if (auto v = layer.single("--bind", "BIND", bind)) {
      if (v->empty()) throw ConfigError("--bind must not be empty");
      cfg.bind_address = *v;
    }
    if (auto v = layer.single("--identity", "IDENTITY", identity)) {
      auto mode = graph::parse_identity_mode(*v);
      if (!mode) {
        throw ConfigError("--identity must be auto, memory or path, got '" + *v + "'");
      }
      cfg.identity = *mode;
    }
    if (app.count("--include-expensive") > 0) {
      cfg.include_expensive = expensive;
    } else if (auto it = env.find("VDBRIDGE_INCLUDE_EXPENSIVE"); it != env.end()) {
      cfg.include_expensive = bool_setting("VDBRIDGE_INCLUDE_EXPENSIVE", it->second);
    }
    if (auto v = layer.list("--null-literal", "NULL_LITERAL", nulls)) {
      if (v->empty()) throw ConfigError("--null-literal needs at least one value");
      cfg.null_literals = *v;
    }
    if (auto v = layer.single("--frame", "FRAME", frame)) {
      cfg.frame = static_cast<std::int64_t>(unsigned_setting("--frame", *v, 1'000'000));
    }
    if (auto v = layer.single("--ui-dir", "UI_DIR", ui_dir)) {
      if (!std::filesystem::is_directory(*v)) {
        throw ConfigError("--ui-dir " + *v + " is not a directory");
      }
      cfg.ui_dir = *v;
    }
    if (auto v = layer.single("--handshake-timeout-ms", "HANDSHAKE_TIMEOUT_MS",
                              handshake_ms)) {
      cfg.handshake_timeout = std::chrono::milliseconds(
          unsigned_setting("--handshake-timeout-ms", *v, 3'600'000));
    }
    if (auto v = layer.single("--request-timeout-ms", "REQUEST_TIMEOUT_MS",
                              request_ms)) {
      cfg.request_timeout = std::chrono::milliseconds(
          unsigned_setting("--request-timeout-ms", *v, 3'600'000));
    }
    if (auto v = layer.single("--log-level", "LOG_LEVEL", log_level)) {
      static const std::vector<std::string> levels = {"trace", "debug", "info",
                                                      "warn",  "error", "off"};
      if (std::find(levels.begin(), levels.end(), *v) == levels.end()) {
        throw ConfigError("--log-level must be one of trace, debug, info, warn, "
                          "error, off; got '" + *v + "'");
      }
      cfg.log_level = *v;
    }
  } catch (const ConfigError& e) {
    return {std::nullopt, kExitConfig,
            std::string("error: ") + e.what() + "\n\n" + app.help()};
  }
  return {std::move(cfg), kExitOk, {}};
}

}  // namespace vdb::bridge
