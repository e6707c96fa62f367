// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "lkb/retrieve.hpp"

namespace lkb::llm {

enum class FinishReason { complete, truncated, error };

std::string_view to_string(FinishReason reason) noexcept;

struct Answer {
  std::string text;
  std::string model_id;
  double latency_ms = 0.0;
  std::size_t prompt_chars = 0;
  FinishReason finish_reason = FinishReason::complete;
};

struct LlmEndpointConfig {
  /// Requests go to base_url + "/chat/completions", e.g. base_url
  /// "http://127.0.0.1:8000/v1".
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string api_style = "chat-json";
  std::string model = "local-dialogue-model";
  int timeout_ms = 60000;
  int max_retries = 2;
  double temperature = 0.0;
  /// Delay before each retry.
  int retry_backoff_ms = 250;

  void validate() const;
};

/// The exact request body complete() sends.
std::string chat_request_body(const retrieve::PromptBundle& prompt,
                              const LlmEndpointConfig& cfg);

/// Sends prompt_text over the chat-json wire format. Connection failures,
/// timeouts and HTTP 5xx are retried up to max_retries times; 4xx is not.
/// Throws transport, timeout or malformed_response.
Answer complete(const retrieve::PromptBundle& prompt, const LlmEndpointConfig& cfg);

inline constexpr std::string_view kMockModelId = "mock";

/// "MOCK-ANSWER sha=<8 hex of sha256(prompt_text)> chunks=[id,id,...]".
Answer mock_complete(const retrieve::PromptBundle& prompt);

class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual Answer complete(const retrieve::PromptBundle& prompt) const = 0;
  virtual std::string model_id() const = 0;
};

class MockLanguageModel final : public LanguageModel {
 public:
  Answer complete(const retrieve::PromptBundle& prompt) const override {
    return mock_complete(prompt);
  }
  std::string model_id() const override { return std::string(kMockModelId); }
};

class HttpLanguageModel final : public LanguageModel {
 public:
  explicit HttpLanguageModel(LlmEndpointConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
  }
  Answer complete(const retrieve::PromptBundle& prompt) const override {
    return llm::complete(prompt, cfg_);
  }
  std::string model_id() const override { return cfg_.model; }

 private:
  LlmEndpointConfig cfg_;
};

}  // namespace lkb::llm
