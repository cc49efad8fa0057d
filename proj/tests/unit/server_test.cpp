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
#include <mutex>
#include <thread>

#include "support/ws_client.hpp"
#include "vdb/api/messages.hpp"
#include "vdb/api/server.hpp"
#include "vdb/diff/diff.hpp"

namespace vdb::api {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;
using testing::WsClient;

ServerOptions ephemeral() {
  ServerOptions options;
  options.port = 0;
  return options;
}

template <typename Pred>
bool eventually(Pred pred, std::chrono::milliseconds budget = 3000ms) {
  auto deadline = std::chrono::steady_clock::now() + budget;
  while (!pred()) {
    if (std::chrono::steady_clock::now() > deadline) return false;
    std::this_thread::sleep_for(5ms);
  }
  return true;
}

json snapshot_doc(int step) {
  return {{"type", "snapshot"}, {"stepSeq", step}, {"graph", json::object()}};
}

TEST(Server, HelloFirstWithoutSeq) {
  Server server(ephemeral(), {});
  server.set_hello(make_hello({3, 5}), false);
  server.start();
  WsClient client(server.port());
  auto hello = client.read();
  ASSERT_TRUE(hello);
  EXPECT_EQ(*hello, make_hello({3, 5}));
  EXPECT_FALSE(hello->contains("seq"));
}

TEST(Server, BroadcastReachesEveryClientIdentically) {
  Server server(ephemeral(), {});
  server.start();
  std::vector<std::unique_ptr<WsClient>> clients;
  for (int i = 0; i < 3; ++i) {
    clients.push_back(std::make_unique<WsClient>(server.port()));
    ASSERT_TRUE(clients.back()->read_type("hello"));
  }
  ASSERT_TRUE(eventually([&] { return server.client_count() == 3; }));
  for (int step = 1; step <= 5; ++step) server.broadcast_snapshot(snapshot_doc(step));

  std::vector<std::vector<json>> seen(3);
  for (int i = 0; i < 3; ++i) {
    for (int step = 1; step <= 5; ++step) {
      auto doc = clients[i]->read();
      ASSERT_TRUE(doc);
      seen[i].push_back(*doc);
    }
  }
  EXPECT_EQ(seen[0], seen[1]);
  EXPECT_EQ(seen[0], seen[2]);
  for (std::size_t k = 1; k < seen[0].size(); ++k) {
    EXPECT_GT(seen[0][k]["seq"].get<int>(), seen[0][k - 1]["seq"].get<int>());
    EXPECT_EQ(seen[0][k]["stepSeq"], static_cast<int>(k) + 1);
  }
}

TEST(Server, LateJoinerGetsHelloThenLatestSnapshot) {
  Server server(ephemeral(), {});
  server.start();
  WsClient early(server.port());
  ASSERT_TRUE(early.read_type("hello"));
  ASSERT_TRUE(eventually([&] { return server.client_count() == 1; }));
  server.broadcast_snapshot(snapshot_doc(1));
  server.broadcast_snapshot(snapshot_doc(2));
  server.broadcast(make_error(ErrorCode::AdapterError, "noise"));
  early.read();
  auto second = early.read();
  ASSERT_TRUE(second);

  WsClient late(server.port());
  auto hello = late.read();
  auto snap = late.read();
  ASSERT_TRUE(hello && snap);
  EXPECT_EQ((*hello)["type"], "hello");
  EXPECT_EQ(*snap, *second);  // same payload, same seq
  EXPECT_FALSE(late.read(200ms));
}

TEST(Server, ZeroClientsIsANoOp) {
  Server server(ephemeral(), {});
  server.start();
  server.broadcast(make_error(ErrorCode::Range, "x"));
  server.broadcast_snapshot(snapshot_doc(1));
  server.send_to(42, make_error(ErrorCode::Range, "x"));
  server.stop();
  server.stop();
  SUCCEED();
}

TEST(Server, InboundMessagesReachHandlerAndRepliesStayPrivate) {
  std::mutex mutex;
  std::vector<std::pair<ClientId, json>> inbound;
  Server* self = nullptr;
  Server server(ephemeral(), [&](ClientId id, json doc) {
    std::lock_guard lock(mutex);
    inbound.emplace_back(id, doc);
    self->send_to(id, make_error(ErrorCode::Range, "only you"));
  });
  self = &server;
  server.start();
  WsClient a(server.port()), b(server.port());
  ASSERT_TRUE(a.read_type("hello") && b.read_type("hello"));
  a.send({{"type", "getHistory"}, {"index", 7}});
  auto reply = a.read();
  ASSERT_TRUE(reply);
  EXPECT_EQ((*reply)["code"], "range");
  EXPECT_TRUE(reply->contains("seq"));
  EXPECT_FALSE(b.read(200ms));
  std::lock_guard lock(mutex);
  ASSERT_EQ(inbound.size(), 1u);
  EXPECT_EQ(inbound[0].second["index"], 7);
}

TEST(Server, NonJsonFrameGetsBadRequest) {
  Server server(ephemeral(), [](ClientId, json) { FAIL() << "handler called"; });
  server.start();
  WsClient client(server.port());
  ASSERT_TRUE(client.read_type("hello"));
  client.send_raw("{not json");
  auto reply = client.read();
  ASSERT_TRUE(reply);
  EXPECT_EQ((*reply)["type"], "error");
  EXPECT_EQ((*reply)["code"], "bad-request");
}

TEST(Server, HelloRebroadcast) {
  Server server(ephemeral(), {});
  server.start();
  WsClient client(server.port());
  ASSERT_TRUE(client.read_type("hello"));
  server.set_hello(make_hello({4, 0}), true);
  auto hello = client.read();
  ASSERT_TRUE(hello);
  EXPECT_EQ((*hello)["config"]["depth"], 4);
  EXPECT_EQ((*hello)["config"]["history"], 0);
}

TEST(Server, SlowClientIsDisconnectedOthersUnaffected) {
  auto options = ephemeral();
  options.queue_limit = 4;
  Server server(options, {});
  server.start();
  WsClient reader(server.port()), stalled(server.port());
  ASSERT_TRUE(reader.read_type("hello"));
  ASSERT_TRUE(eventually([&] { return server.client_count() == 2; }));

  const std::string filler(256 * 1024, 'x');
  int received = 0;
  for (int i = 0; i < 120 && server.client_count() == 2; ++i) {
    server.broadcast({{"type", "error"}, {"code", "adapter-error"}, {"detail", filler}});
    auto doc = reader.read();
    ASSERT_TRUE(doc);
    ++received;
  }
  EXPECT_TRUE(eventually([&] { return server.client_count() == 1; }));
  server.broadcast(make_error(ErrorCode::Range, "after"));
  auto after = reader.read_type("error");
  ASSERT_TRUE(after);
  EXPECT_EQ((*after)["detail"], "after");
  EXPECT_GT(received, 0);
}

TEST(Server, StopDrainsQueuedMessages) {
  Server server(ephemeral(), {});
  server.start();
  WsClient client(server.port());
  ASSERT_TRUE(client.read_type("hello"));
  ASSERT_TRUE(eventually([&] { return server.client_count() == 1; }));
  server.broadcast(make_error(ErrorCode::Terminated, "bye"));
  server.stop();
  auto last = client.read();
  ASSERT_TRUE(last);
  EXPECT_EQ((*last)["code"], "terminated");
  EXPECT_FALSE(client.read(500ms));
  EXPECT_TRUE(client.closed());
}

TEST(Server, BusyPortIsABindError) {
  Server first(ephemeral(), {});
  first.start();
  auto options = ephemeral();
  options.port = first.port();
  Server second(options, {});
  EXPECT_THROW(second.start(), BindError);
  options.bind_address = "not-an-address";
  Server third(options, {});
  EXPECT_THROW(third.start(), BindError);
}

TEST(StaticHttp, PlaceholderWithoutUiDir) {
  Server server(ephemeral(), {});
  server.start();
  std::string type;
  auto [status, body] = testing::http_get(server.port(), "/", &type);
  EXPECT_EQ(status, 200);
  EXPECT_NE(body.find("vdbridge"), std::string::npos);
  EXPECT_EQ(type, "text/html; charset=utf-8");
  EXPECT_EQ(testing::http_get(server.port(), "/app.js").first, 404);
}

TEST(StaticHttp, ServesUiDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "vdb_static_test";
  std::filesystem::create_directories(dir / "assets");
  std::ofstream(dir / "index.html") << "<p>ui</p>";
  std::ofstream(dir / "assets" / "app.js") << "console.log(1);";
  std::ofstream(dir.parent_path() / "vdb_static_secret.txt") << "secret";

  auto options = ephemeral();
  options.ui_dir = dir;
  Server server(options, {});
  server.start();
  std::string type;
  EXPECT_EQ(testing::http_get(server.port(), "/", &type).second, "<p>ui</p>");
  EXPECT_EQ(type, "text/html; charset=utf-8");
  auto js = testing::http_get(server.port(), "/assets/app.js?v=2", &type);
  EXPECT_EQ(js.first, 200);
  EXPECT_EQ(js.second, "console.log(1);");
  EXPECT_EQ(type, "text/javascript; charset=utf-8");
  EXPECT_EQ(testing::http_get(server.port(), "/../vdb_static_secret.txt").first, 404);
  EXPECT_EQ(testing::http_get(server.port(), "/assets/../../vdb_static_secret.txt").first,
            404);
  EXPECT_EQ(testing::http_get(server.port(), "/missing.css").first, 404);

  // The WebSocket endpoint shares the port.
  WsClient client(server.port());
  EXPECT_TRUE(client.read_type("hello"));
  client.close();
  server.stop();
  std::filesystem::remove_all(dir);
  std::filesystem::remove(dir.parent_path() / "vdb_static_secret.txt");
}

TEST(StaticHttp, ResolveRejectsTraversal) {
  const auto root = std::filesystem::temp_directory_path() / "vdb_resolve_test";
  std::filesystem::create_directories(root / "a");
  std::ofstream(root / "index.html") << "i";
  std::ofstream(root / "a.js") << "a";
  std::ofstream(root / "a" / "b.js") << "b";
  EXPECT_EQ(resolve_static(root, "/"), root / "index.html");
  EXPECT_EQ(resolve_static(root, "/./a/"), std::nullopt);  // no a/index.html
  EXPECT_EQ(resolve_static(root, "/nope.js"), std::nullopt);
  EXPECT_EQ(resolve_static(root, "/a/b.js"), root / "a" / "b.js");
  EXPECT_EQ(resolve_static(root, "/a.js?x=1#y"), root / "a.js");
  for (const char* bad : {"/..", "/../etc/passwd", "/a/../../b", "/a\\..\\b", "relative"}) {
    EXPECT_FALSE(resolve_static(root, bad)) << bad;
  }
  EXPECT_FALSE(resolve_static(root, std::string_view("/a\0b", 4)));
  std::filesystem::remove_all(root);
}

TEST(StaticHttp, MimeTypes) {
  EXPECT_EQ(mime_type("x.svg"), "image/svg+xml");
  EXPECT_EQ(mime_type("x.css"), "text/css; charset=utf-8");
  EXPECT_EQ(mime_type("x.bin"), "application/octet-stream");
}

TEST(Messages, ParseClientRequests) {
  auto lc = parse_request(json{{"type", "loadChildren"}, {"nodeId", "path:root"}});
  ASSERT_TRUE(std::holds_alternative<LoadChildren>(lc));
  EXPECT_EQ(std::get<LoadChildren>(lc).node, graph::StableId::path("root"));
  auto step = parse_request(json{{"type", "step"}, {"kind", "stepOut"}});
  EXPECT_EQ(std::get<Step>(step).kind, dap::StepKind::StepOut);
  auto hist = parse_request(json{{"type", "getHistory"}, {"index", 3}});
  EXPECT_EQ(std::get<GetHistory>(hist).index, 3u);
  auto cfg = parse_request(json{{"type", "setConfig"}, {"depth", 5}});
  EXPECT_EQ(std::get<SetConfig>(cfg).depth, 5u);
  EXPECT_FALSE(std::get<SetConfig>(cfg).history);
}

TEST(Messages, MalformedRequests) {
  auto code_of = [](const json& doc) {
    try {
      parse_request(doc);
    } catch (const RequestError& e) {
      return std::string(to_string(e.code()));
    }
    return std::string("accepted");
  };
  EXPECT_EQ(code_of(json::array()), "bad-request");
  EXPECT_EQ(code_of({{"type", "launchMissiles"}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "getHistory"}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "getHistory"}, {"index", -1}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "getHistory"}, {"index", "1"}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "step"}, {"kind", "jump"}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "loadChildren"}, {"nodeId", 12}}), "bad-request");
  EXPECT_EQ(code_of({{"type", "loadChildren"}, {"nodeId", "bogus"}}), "unknown-node");
  EXPECT_EQ(code_of({{"type", "setConfig"}, {"history", -4}}), "bad-request");
}

TEST(Messages, SnapshotAndHistoryShapes) {
  auto g = std::make_shared<const graph::ObjectGraph>(
      graph::ObjectGraph{{"Main.java", 7, "main"}, graph::IdentityMode::Auto, {}, {}, {}});
  history::HistoryEntry entry{2, g, {}, g->location, 9};
  auto snap = make_snapshot(entry, 4);
  EXPECT_EQ(snap["type"], "snapshot");
  EXPECT_EQ(snap["stepSeq"], 9);
  EXPECT_EQ(snap["historyLength"], 4);
  EXPECT_EQ(snap["location"], (json{{"file", "Main.java"}, {"line", 7}, {"method", "main"}}));
  for (const char* key : {"roots", "nodes", "links"}) EXPECT_TRUE(snap["graph"].contains(key));
  for (const char* key :
       {"addedNodes", "changedNodes", "removedNodes", "addedLinks", "removedLinks"}) {
    EXPECT_TRUE(snap["changes"].contains(key)) << key;
  }
  auto hist = make_history(entry, 4);
  EXPECT_EQ(hist["type"], "history");
  EXPECT_EQ(hist["historical"], true);
  EXPECT_EQ(hist["index"], 2);
  EXPECT_EQ(make_error(ErrorCode::NotStopped, "d"),
            (json{{"type", "error"}, {"code", "not-stopped"}, {"detail", "d"}}));
}

}  // namespace
}  // namespace vdb::api
