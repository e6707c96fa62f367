// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <chrono>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"
#include "lkb/llm.hpp"
#include "stub_server.hpp"

namespace lkb::llm {
namespace {

using lkb::testing::StubServer;
using nlohmann::json;

retrieve::PromptBundle bundle(std::string text, std::vector<std::string> ids = {}) {
  retrieve::PromptBundle b;
  b.prompt_text = std::move(text);
  b.included_chunk_ids = std::move(ids);
  return b;
}

LlmEndpointConfig endpoint(const StubServer& stub, int retries = 2) {
  LlmEndpointConfig cfg;
  cfg.base_url = stub.origin() + "/v1";
  cfg.model = "glm-local";
  cfg.timeout_ms = 2000;
  cfg.max_retries = retries;
  cfg.retry_backoff_ms = 10;
  return cfg;
}

StubServer::Handler reply(std::string body, int status = 200) {
  return [body, status](const httplib::Request&, httplib::Response& res) {
    res.status = status;
    res.set_content(body, "application/json");
  };
}

const char* kChoice = R"({"choices":[{"message":{"role":"assistant","content":"Check the pump."},"finish_reason":"stop"}]})";

ErrorKind failure_kind(const retrieve::PromptBundle& p, const LlmEndpointConfig& cfg) {
  try {
    complete(p, cfg);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::io;
}

TEST(MockModel, DeterministicAnswerNamesPromptAndChunks) {
  const auto p = bundle("hello prompt", {"d#000000", "d#000003"});
  const Answer a = MockLanguageModel().complete(p);
  EXPECT_EQ(a.text, "MOCK-ANSWER sha=" + sha256_hex("hello prompt").substr(0, 8) +
                        " chunks=[d#000000,d#000003]");
  EXPECT_EQ(a.model_id, "mock");
  EXPECT_EQ(a.prompt_chars, 12u);
  EXPECT_EQ(a.finish_reason, FinishReason::complete);
  EXPECT_GE(a.latency_ms, 0.0);
  EXPECT_EQ(MockLanguageModel().complete(p).text, a.text);
  EXPECT_EQ(mock_complete(bundle("x")).text, "MOCK-ANSWER sha=2d711642 chunks=[]");
}

TEST(HttpModel, SendsPromptVerbatimAndParsesChoice) {
  StubServer stub("/v1/chat/completions", reply(kChoice));
  const std::string prompt = "Known Information:\n\"quoted\" \xE9\xA3\x8E\nThe question is: Q.";
  const Answer a = HttpLanguageModel(endpoint(stub)).complete(bundle(prompt));
  EXPECT_EQ(a.text, "Check the pump.");
  EXPECT_EQ(a.model_id, "glm-local");
  EXPECT_EQ(a.finish_reason, FinishReason::complete);
  EXPECT_EQ(a.prompt_chars, 49u);
  EXPECT_EQ(stub.hits(), 1);
  const json sent = json::parse(stub.last_body());
  EXPECT_EQ(sent["messages"][0]["content"], prompt);
  EXPECT_EQ(sent["messages"][0]["role"], "user");
  EXPECT_EQ(sent["model"], "glm-local");
  EXPECT_EQ(stub.last_body(), chat_request_body(bundle(prompt), endpoint(stub)));
}

TEST(HttpModel, LengthFinishIsTruncated) {
  StubServer stub("/v1/chat/completions",
                  reply(R"({"choices":[{"message":{"content":"par"},"finish_reason":"length"}]})"));
  EXPECT_EQ(complete(bundle("p"), endpoint(stub)).finish_reason, FinishReason::truncated);
}

TEST(HttpModel, ServerErrorsAreRetriedThenReported) {
  StubServer stub("/v1/chat/completions", reply("{}", 500));
  EXPECT_EQ(failure_kind(bundle("p"), endpoint(stub, 2)), ErrorKind::transport);
  EXPECT_EQ(stub.hits(), 3);
}

TEST(HttpModel, RecoversAfterTransientFailure) {
  std::atomic<int> calls{0};
  StubServer stub("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    res.set_content(kChoice, "application/json");
  });
  EXPECT_EQ(complete(bundle("p"), endpoint(stub, 1)).text, "Check the pump.");
  EXPECT_EQ(stub.hits(), 2);
}

TEST(HttpModel, ClientErrorsAreNotRetried) {
  StubServer stub("/v1/chat/completions", reply("{}", 400));
  EXPECT_EQ(failure_kind(bundle("p"), endpoint(stub, 2)), ErrorKind::transport);
  EXPECT_EQ(stub.hits(), 1);
}

TEST(HttpModel, MalformedBody) {
  StubServer stub("/v1/chat/completions", reply(R"({"choices":[]})"));
  EXPECT_EQ(failure_kind(bundle("p"), endpoint(stub)), ErrorKind::malformed_response);
  StubServer text("/v1/chat/completions", reply("<html>"));
  EXPECT_EQ(failure_kind(bundle("p"), endpoint(text)), ErrorKind::malformed_response);
}

TEST(HttpModel, SlowEndpointTimesOut) {
  StubServer stub("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
    res.set_content(kChoice, "application/json");
  });
  LlmEndpointConfig cfg = endpoint(stub, 0);
  cfg.timeout_ms = 100;
  EXPECT_EQ(failure_kind(bundle("p"), cfg), ErrorKind::timeout);
}

TEST(HttpModel, ConfigValidation) {
  LlmEndpointConfig cfg;
  cfg.api_style = "completions";
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.max_retries = -1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.base_url = "localhost:8000";
  EXPECT_THROW(HttpLanguageModel{cfg}, Error);
  EXPECT_NO_THROW(LlmEndpointConfig{}.validate());
}

}  // namespace
}  // namespace lkb::llm
