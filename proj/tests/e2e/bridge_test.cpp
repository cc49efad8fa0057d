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

#include <boost/asio/ip/tcp.hpp>

#include "support/process.hpp"
#include "support/ws_client.hpp"

namespace vdb {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;
using testing::ChildProcess;
using testing::WsClient;

std::string scenario(const std::string& name) {
  return std::string(VDB_SCENARIO_DIR) + "/" + name;
}

std::string mock_command(const std::string& name) {
  return std::string(VDB_MOCK_ADAPTER) + " -s " + scenario(name);
}

// A bridge process on an ephemeral port driving the mock adapter.
struct RunningBridge {
  explicit RunningBridge(const std::string& scenario_name,
                         std::vector<std::string> extra = {})
      : process(args(scenario_name, std::move(extra))) {
    auto p = process.await_port();
    if (!p) throw std::runtime_error("bridge did not report a port");
    port = *p;
  }

  static std::vector<std::string> args(const std::string& scenario_name,
                                       std::vector<std::string> extra) {
    std::vector<std::string> out = {VDB_BRIDGE, "--adapter", mock_command(scenario_name),
                                    "--port", "0", "--log-level", "warn"};
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  }

  ChildProcess process;
  std::uint16_t port = 0;
};

json step(const char* kind = "next") { return {{"type", "step"}, {"kind", kind}}; }

TEST(Bridge, BstInsertHighlightsOneAddedAndOneChanged) {
  RunningBridge bridge("bst_insert.json");
  WsClient client(bridge.port);
  auto hello = client.read();
  ASSERT_TRUE(hello);
  EXPECT_EQ(*hello, (json{{"type", "hello"}, {"version", 1},
                          {"config", {{"depth", 2}, {"history", 10}}}}));

  auto first = client.read_type("snapshot");
  ASSERT_TRUE(first);
  EXPECT_EQ((*first)["location"]["line"], 24);
  EXPECT_EQ((*first)["changes"]["addedNodes"], json::array());
  EXPECT_EQ((*first)["historyLength"], 1);

  client.send(step());
  auto second = client.read_type("snapshot");
  ASSERT_TRUE(second);
  const auto& changes = (*second)["changes"];
  EXPECT_EQ(changes["addedNodes"], json::array({"mem:0x1030"}));
  EXPECT_EQ(changes["changedNodes"], (json{{"mem:0x1010", {"right"}}}));
  EXPECT_EQ(changes["addedLinks"],
            json::array({{{"source", "mem:0x1010"}, {"field", "right"},
                          {"target", "mem:0x1030"}}}));
  EXPECT_EQ(changes["removedNodes"], json::array());
  EXPECT_EQ(changes["removedLinks"], json::array());
  EXPECT_EQ((*second)["location"]["line"], 31);
  EXPECT_GT((*second)["seq"].get<int>(), (*first)["seq"].get<int>());

  client.send(step());
  auto end = client.read_type("error");
  ASSERT_TRUE(end);
  EXPECT_EQ((*end)["code"], "terminated");
  EXPECT_EQ(bridge.process.wait(10s), 0);
}

TEST(Bridge, LoadChildrenExtendsTheSharedView) {
  RunningBridge bridge("deep_nesting.json");
  WsClient a(bridge.port), b(bridge.port);
  auto snap = a.read_type("snapshot");
  ASSERT_TRUE(snap && b.read_type("snapshot"));
  const std::string frontier = "path:top/child/child";
  bool found = false;
  for (const auto& node : (*snap)["graph"]["nodes"]) {
    if (node["id"] == frontier) {
      found = true;
      EXPECT_FALSE(node["expanded"].get<bool>());
    }
  }
  ASSERT_TRUE(found);

  a.send({{"type", "loadChildren"}, {"nodeId", frontier}});
  for (auto* client : {&a, &b}) {
    auto update = client->read_type("snapshot");
    ASSERT_TRUE(update);
    EXPECT_EQ((*update)["stepSeq"], (*snap)["stepSeq"]);
    EXPECT_EQ((*update)["changes"]["addedNodes"], json::array({"path:top/child/child/child"}));
    EXPECT_EQ((*update)["changes"]["changedNodes"], json::object());
    EXPECT_EQ((*update)["changes"]["addedLinks"].size(), 1u);
  }

  a.send({{"type", "loadChildren"}, {"nodeId", frontier}});
  auto again = a.read_type("error");
  ASSERT_TRUE(again);
  EXPECT_EQ((*again)["code"], "already-expanded");

  a.send({{"type", "loadChildren"}, {"nodeId", "path:nowhere"}});
  auto unknown = a.read_type("error");
  ASSERT_TRUE(unknown);
  EXPECT_EQ((*unknown)["code"], "unknown-node");
  EXPECT_FALSE(b.read(300ms)) << "errors go to the requester only";

  // The amended current entry reflects the expansion.
  a.send({{"type", "getHistory"}, {"index", 0}});
  auto current = a.read_type("history");
  ASSERT_TRUE(current);
  EXPECT_EQ((*current)["graph"]["nodes"].size(), 4u);
}

TEST(Bridge, HistoryNavigation) {
  RunningBridge bridge("three_stops.json");
  WsClient client(bridge.port);
  std::vector<json> snaps;
  snaps.push_back(*client.read_type("snapshot"));
  for (int i = 0; i < 2; ++i) {
    client.send(step());
    auto s = client.read_type("snapshot");
    ASSERT_TRUE(s);
    snaps.push_back(*s);
  }
  EXPECT_EQ(snaps.back()["historyLength"], 3);
  for (int index = 0; index < 3; ++index) {
    client.send({{"type", "getHistory"}, {"index", index}});
    auto h = client.read_type("history");
    ASSERT_TRUE(h);
    EXPECT_EQ((*h)["historical"], true);
    EXPECT_EQ((*h)["index"], index);
    const auto& expected = snaps[2 - index];
    for (const char* key : {"stepSeq", "location", "graph", "changes"}) {
      EXPECT_EQ((*h)[key], expected[key]) << key << " at index " << index;
    }
  }
  client.send({{"type", "getHistory"}, {"index", 3}});
  auto range = client.read_type("error");
  ASSERT_TRUE(range);
  EXPECT_EQ((*range)["code"], "range");
}

TEST(Bridge, HistoryDisabled) {
  RunningBridge bridge("three_stops.json", {"--history", "0"});
  WsClient client(bridge.port);
  auto snap = client.read_type("snapshot");
  ASSERT_TRUE(snap);
  EXPECT_EQ((*snap)["historyLength"], 0);
  client.send({{"type", "getHistory"}, {"index", 0}});
  EXPECT_TRUE(client.read_type("history"));
  client.send({{"type", "getHistory"}, {"index", 1}});
  auto range = client.read_type("error");
  ASSERT_TRUE(range);
  EXPECT_EQ((*range)["code"], "range");
}

TEST(Bridge, StepWhileRunningIsRejected) {
  RunningBridge bridge("slow_resume.json");
  WsClient client(bridge.port);
  ASSERT_TRUE(client.read_type("snapshot"));
  client.send(step());
  client.send(step());
  client.send({{"type", "loadChildren"}, {"nodeId", "path:n"}});
  auto first = client.read_type("error");
  auto second = client.read_type("error");
  ASSERT_TRUE(first && second);
  EXPECT_EQ((*first)["code"], "not-stopped");
  EXPECT_EQ((*second)["code"], "not-stopped");
  auto snap = client.read_type("snapshot");
  ASSERT_TRUE(snap);
  EXPECT_EQ((*snap)["location"]["line"], 9);
}

TEST(Bridge, SetConfigRebroadcastsHelloAndAppliesDepth) {
  RunningBridge bridge("deep_nesting.json");
  WsClient client(bridge.port);
  ASSERT_TRUE(client.read_type("snapshot"));
  client.send({{"type", "setConfig"}, {"depth", 4}, {"history", 2}});
  auto hello = client.read_type("hello");
  ASSERT_TRUE(hello);
  EXPECT_EQ((*hello)["config"], (json{{"depth", 4}, {"history", 2}}));
  client.send({{"type", "bogus"}});
  auto err = client.read_type("error");
  ASSERT_TRUE(err);
  EXPECT_EQ((*err)["code"], "bad-request");
}

TEST(Bridge, ZeroStopsTerminatesCleanly) {
  ChildProcess process(RunningBridge::args("zero_stops.json", {}));
  ASSERT_TRUE(process.await_port());
  EXPECT_EQ(process.wait(10s), 0);
}

TEST(Bridge, EmptyStackStillProducesASnapshot) {
  RunningBridge bridge("empty_stack.json");
  WsClient client(bridge.port);
  auto snap = client.read_type("snapshot");
  ASSERT_TRUE(snap);
  EXPECT_EQ((*snap)["graph"]["nodes"], json::array());
  EXPECT_EQ((*snap)["graph"]["roots"], json::array());
  client.send(step("continue"));
  auto next = client.read_type("snapshot");
  ASSERT_TRUE(next);
  EXPECT_EQ((*next)["location"]["line"], 5);
}

TEST(Bridge, PortAlreadyBoundExitsThree) {
  boost::asio::io_context io;
  boost::asio::ip::tcp::acceptor holder(
      io, {boost::asio::ip::make_address("127.0.0.1"), 0});
  auto busy = std::to_string(holder.local_endpoint().port());
  ChildProcess process({VDB_BRIDGE, "--adapter", mock_command("three_stops.json"),
                        "--port", busy, "--log-level", "off"});
  EXPECT_EQ(process.wait(10s), 3);
}

TEST(Bridge, AdapterFailureExitsTwo) {
  ChildProcess missing({VDB_BRIDGE, "--adapter", "/nonexistent/adapter", "--port", "0",
                        "--log-level", "off"});
  EXPECT_EQ(missing.wait(10s), 2);
  ChildProcess silent({VDB_BRIDGE, "--adapter", "/bin/true", "--port", "0",
                       "--log-level", "off"});
  EXPECT_EQ(silent.wait(10s), 2);
}

TEST(Bridge, ConfigErrorsExitSixtyFour) {
  ChildProcess unknown({VDB_BRIDGE, "--adapter", "x", "--no-such-flag"});
  EXPECT_EQ(unknown.wait(10s), 64);
  ChildProcess bad_bp({VDB_BRIDGE, "--adapter", "x", "--bp", "Main.java"});
  EXPECT_EQ(bad_bp.wait(10s), 64);
  ChildProcess help({VDB_BRIDGE, "--help"});
  auto line = help.read_line(5s);
  EXPECT_TRUE(line);
  EXPECT_EQ(help.wait(10s), 0);
}

TEST(Bridge, SigtermShutsDownCleanly) {
  RunningBridge bridge("three_stops.json");
  WsClient client(bridge.port);
  ASSERT_TRUE(client.read_type("snapshot"));
  bridge.process.signal(SIGTERM);
  auto notice = client.read_type("error");
  ASSERT_TRUE(notice);
  EXPECT_EQ((*notice)["code"], "terminated");
  EXPECT_EQ(bridge.process.wait(10s), 0);
}

}  // namespace
}  // namespace vdb
