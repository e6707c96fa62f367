// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "httplib.h"
#include "lkb/service.hpp"
#include "temp_dir.hpp"
#include "toy_corpus.hpp"

namespace lkb::service {
namespace {

using nlohmann::json;
using lkb::testing::TempDir;

class HttpServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceConfig cfg;
    cfg.data_dir = dir_.path();
    cfg.splitter.chunk_size = 80;
    cfg.splitter.overlap = 10;
    kb_ = KnowledgeBase::open(cfg);
    server_ = std::make_unique<HttpServer>(*kb_);
    port_ = server_->start("127.0.0.1", 0);
  }
  void TearDown() override { server_->stop(); }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }

  TempDir dir_;
  std::unique_ptr<KnowledgeBase> kb_;
  std::unique_ptr<HttpServer> server_;
  int port_ = 0;
};

TEST_F(HttpServerTest, ServesJsonRoutes) {
  auto c = client();
  for (const auto& d : lkb::testing::toy_documents()) {
    const auto r = c.Post("/v1/documents", json{{"source", d.source}, {"content", d.content}}.dump(),
                          "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200) << r->body;
    EXPECT_NE(r->get_header_value("Content-Type").find("application/json"), std::string::npos);
  }
  const auto health = c.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["docs"], 3);

  const std::string body = json{{"query", "slip ring brushes"}, {"k", 2}}.dump();
  const auto q = c.Post("/v1/query", body, "application/json");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->status, 200);
  EXPECT_EQ(q->body, handle_request(*kb_, "POST", "/v1/query", body).body);

  const auto ask = c.Post("/v1/ask", json{{"query", "slip ring"}}.dump(), "application/json");
  ASSERT_TRUE(ask);
  EXPECT_EQ(ask->status, 200);
  EXPECT_TRUE(json::parse(ask->body).contains("answer"));
}

TEST_F(HttpServerTest, PropagatesErrorStatuses) {
  auto c = client();
  const auto empty = c.Post("/v1/query", R"({"query":"x"})", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 409);
  EXPECT_EQ(json::parse(empty->body)["error"]["code"], "empty_index");

  const auto bad = c.Post("/v1/query", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  const auto missing = c.Get("/v1/missing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_TRUE(json::parse(missing->body).contains("error"));

  const auto method = c.Get("/v1/ask");
  ASSERT_TRUE(method);
  EXPECT_EQ(method->status, 405);
}

TEST_F(HttpServerTest, HandlesConcurrentClients) {
  auto c = client();
  for (const auto& d : lkb::testing::toy_documents()) {
    ASSERT_TRUE(c.Post("/v1/documents", json{{"source", d.source}, {"content", d.content}}.dump(),
                       "application/json"));
  }
  const std::string body = json{{"query", "charge pressure"}, {"k", 3}}.dump();
  const std::string expected = handle_request(*kb_, "POST", "/v1/query", body).body;
  std::atomic<int> matches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      auto local = client();
      for (int i = 0; i < 5; ++i) {
        const auto r = local.Post("/v1/query", body, "application/json");
        if (r && r->status == 200 && r->body == expected) ++matches;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(matches.load(), 40);
}

TEST(HttpServer, StopWithoutStartIsSafe) {
  TempDir dir;
  ServiceConfig cfg;
  cfg.data_dir = dir.path();
  auto kb = KnowledgeBase::open(cfg);
  HttpServer server(*kb);
  server.stop();
  SUCCEED();
}

TEST(HttpServer, StartsOnRequestedFreePort) {
  TempDir dir;
  ServiceConfig cfg;
  cfg.data_dir = dir.path();
  auto kb = KnowledgeBase::open(cfg);
  HttpServer server(*kb);
  const int port = server.start("127.0.0.1", 0);
  EXPECT_GT(port, 0);
  httplib::Client c("127.0.0.1", port);
  const auto r = c.Get("/v1/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  server.stop();
  server.stop();
}

}  // namespace
}  // namespace lkb::service
