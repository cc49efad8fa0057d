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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vdb/bridge/config.hpp"

namespace vdb::bridge {
namespace {

using Args = std::vector<std::string>;

BridgeConfig parsed(const Args& args, const Environment& env = {}) {
  auto out = parse_config(args, env);
  EXPECT_TRUE(out.config) << out.message;
  return out.config.value_or(BridgeConfig{});
}

int failure(const Args& args, const Environment& env = {}) {
  auto out = parse_config(args, env);
  EXPECT_FALSE(out.config);
  return out.exit_code;
}

TEST(Config, DefaultsWithOnlyAnAdapter) {
  auto cfg = parsed({"--adapter", "mock -s x.json"});
  EXPECT_EQ(cfg.depth, 2u);
  EXPECT_EQ(cfg.history, 10u);
  EXPECT_EQ(cfg.port, 8071);
  EXPECT_EQ(cfg.bind_address, "127.0.0.1");
  EXPECT_EQ(cfg.identity, graph::IdentityMode::Auto);
  EXPECT_FALSE(cfg.include_expensive);
  EXPECT_EQ(cfg.null_literals, graph::default_null_literals());
  EXPECT_TRUE(cfg.breakpoints.empty());
  EXPECT_EQ(cfg.adapter.transport, dap::AdapterSpec::Transport::ChildProcessStdio);
  EXPECT_EQ(cfg.adapter.command, (std::vector<std::string>{"mock", "-s", "x.json"}));
  EXPECT_EQ(cfg.launch.mode, dap::LaunchRequest::Mode::Launch);
}

TEST(Config, AttachAddress) {
  auto cfg = parsed({"--attach", "localhost:4711"});
  EXPECT_EQ(cfg.adapter.transport, dap::AdapterSpec::Transport::TcpSocket);
  EXPECT_EQ(cfg.adapter.host, "localhost");
  EXPECT_EQ(cfg.adapter.port, 4711);
  EXPECT_EQ(cfg.launch.mode, dap::LaunchRequest::Mode::Attach);
  EXPECT_EQ(failure({"--attach", "localhost"}), kExitConfig);
  EXPECT_EQ(failure({"--attach", "h:0"}), kExitConfig);
  EXPECT_EQ(failure({"--attach", "h:70000"}), kExitConfig);
}

TEST(Config, RepeatedBreakpoints) {
  auto cfg = parsed({"--adapter", "a", "--bp", "Main.java:12", "--bp", "C:\\src\\x.c:3"});
  ASSERT_EQ(cfg.breakpoints.size(), 2u);
  EXPECT_EQ(cfg.breakpoints[0], (dap::SourceBreakpoint{"Main.java", 12}));
  EXPECT_EQ(cfg.breakpoints[1], (dap::SourceBreakpoint{"C:\\src\\x.c", 3}));
}

TEST(Config, MalformedBreakpoints) {
  for (const char* bp : {"Main.java", "Main.java:", ":12", "Main.java:0", "Main.java:-3",
                         "Main.java:1x"}) {
    EXPECT_EQ(failure({"--adapter", "a", "--bp", bp}), kExitConfig) << bp;
    EXPECT_FALSE(parse_breakpoint(bp)) << bp;
  }
}

TEST(Config, NegativeOrJunkNumbers) {
  EXPECT_EQ(failure({"--adapter", "a", "--depth", "-1"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--history=-2"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--port", "65536"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--depth", "two"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--frame", "-1"}), kExitConfig);
}

TEST(Config, ZeroIsAllowed) {
  auto cfg = parsed({"--adapter", "a", "--depth", "0", "--history", "0", "--port", "0"});
  EXPECT_EQ(cfg.depth, 0u);
  EXPECT_EQ(cfg.history, 0u);
  EXPECT_EQ(cfg.port, 0);
}

TEST(Config, UnknownFlagGivesUsage) {
  auto out = parse_config({"--adapter", "a", "--frobnicate"}, {});
  EXPECT_FALSE(out.config);
  EXPECT_EQ(out.exit_code, kExitConfig);
  EXPECT_NE(out.message.find("--depth"), std::string::npos);
}

TEST(Config, HelpExitsZero) {
  auto out = parse_config({"--help"}, {});
  EXPECT_FALSE(out.config);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_NE(out.message.find("--adapter"), std::string::npos);
}

TEST(Config, AdapterIsRequiredAndExclusive) {
  EXPECT_EQ(failure({}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--attach", "h:1"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "   "}), kExitConfig);
  EXPECT_EQ(failure({}, {{"VDBRIDGE_ADAPTER", "a"}, {"VDBRIDGE_ATTACH", "h:1"}}),
            kExitConfig);
}

TEST(Config, EnvironmentFillsInFlags) {
  Environment env = {{"VDBRIDGE_ADAPTER", "dbg --stdio"},
                     {"VDBRIDGE_DEPTH", "4"},
                     {"VDBRIDGE_HISTORY", "3"},
                     {"VDBRIDGE_PORT", "9000"},
                     {"VDBRIDGE_IDENTITY", "path"},
                     {"VDBRIDGE_INCLUDE_EXPENSIVE", "yes"},
                     {"VDBRIDGE_BP", "a.py:1,b.py:2"},
                     {"VDBRIDGE_NULL_LITERAL", "NULL,nullptr"}};
  auto cfg = parsed({}, env);
  EXPECT_EQ(cfg.adapter.command, (std::vector<std::string>{"dbg", "--stdio"}));
  EXPECT_EQ(cfg.depth, 4u);
  EXPECT_EQ(cfg.history, 3u);
  EXPECT_EQ(cfg.port, 9000);
  EXPECT_EQ(cfg.identity, graph::IdentityMode::Path);
  EXPECT_TRUE(cfg.include_expensive);
  EXPECT_EQ(cfg.breakpoints,
            (std::vector<dap::SourceBreakpoint>{{"a.py", 1}, {"b.py", 2}}));
  EXPECT_EQ(cfg.null_literals, (std::vector<std::string>{"NULL", "nullptr"}));
}

TEST(Config, FlagsOverrideEnvironment) {
  Environment env = {{"VDBRIDGE_ATTACH", "h:1"},
                     {"VDBRIDGE_DEPTH", "4"},
                     {"VDBRIDGE_BP", "x.c:9"},
                     {"VDBRIDGE_PORT", "junk"}};
  auto cfg = parsed({"--adapter", "a", "--depth", "1", "--bp", "y.c:2", "--port", "1234"},
                    env);
  EXPECT_EQ(cfg.adapter.transport, dap::AdapterSpec::Transport::ChildProcessStdio);
  EXPECT_EQ(cfg.depth, 1u);
  EXPECT_EQ(cfg.breakpoints, (std::vector<dap::SourceBreakpoint>{{"y.c", 2}}));
  EXPECT_EQ(cfg.port, 1234);
}

TEST(Config, BadEnvironmentValues) {
  EXPECT_EQ(failure({"--adapter", "a"}, {{"VDBRIDGE_DEPTH", "-1"}}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a"}, {{"VDBRIDGE_INCLUDE_EXPENSIVE", "maybe"}}),
            kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a"}, {{"VDBRIDGE_IDENTITY", "address"}}), kExitConfig);
}

TEST(Config, LaunchFile) {
  auto dir = std::filesystem::temp_directory_path() / "vdb_config_test";
  std::filesystem::create_directories(dir);
  auto good = dir / "launch.json";
  auto bad = dir / "array.json";
  std::ofstream(good) << R"({"program": "a.out", "args": ["1"]})";
  std::ofstream(bad) << "[1, 2]";

  auto cfg = parsed({"--adapter", "a", "--launch", good.string()});
  EXPECT_EQ(cfg.launch.arguments["program"], "a.out");
  EXPECT_EQ(cfg.launch_file, good);
  EXPECT_EQ(failure({"--adapter", "a", "--launch", bad.string()}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--launch", (dir / "missing.json").string()}),
            kExitConfig);
  std::filesystem::remove_all(dir);
}

TEST(Config, OptionValidation) {
  EXPECT_EQ(failure({"--adapter", "a", "--ui-dir", "/definitely/not/here"}), kExitConfig);
  EXPECT_EQ(failure({"--adapter", "a", "--log-level", "loud"}), kExitConfig);
  auto cfg = parsed({"--adapter", "a", "--identity", "memory", "--include-expensive",
                     "--null-literal", "NIL", "--frame", "2", "--log-level", "debug"});
  EXPECT_EQ(cfg.identity, graph::IdentityMode::Memory);
  EXPECT_TRUE(cfg.include_expensive);
  EXPECT_EQ(cfg.null_literals, (std::vector<std::string>{"NIL"}));
  EXPECT_EQ(cfg.frame, 2);
  EXPECT_EQ(cfg.log_level, "debug");
}

}  // namespace
}  // namespace vdb::bridge
