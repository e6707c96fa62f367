// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/llm.hpp"

#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "http_util.hpp"
#include "lkb/digest.hpp"
#include "lkb/error.hpp"
#include "lkb/utf8.hpp"

namespace lkb::llm {

std::string_view to_string(FinishReason reason) noexcept {
  switch (reason) {
    case FinishReason::complete: return "complete";
    case FinishReason::truncated: return "truncated";
    case FinishReason::error: return "error";
  }
  return "error";
}

void LlmEndpointConfig::validate() const {
  if (api_style != "chat-json") {
    throw Error(ErrorKind::invalid_argument, "unsupported llm api_style '" + api_style + "'");
  }
  if (timeout_ms <= 0) throw Error(ErrorKind::invalid_argument, "llm timeout_ms must be > 0");
  if (max_retries < 0) throw Error(ErrorKind::invalid_argument, "llm max_retries must be >= 0");
  if (retry_backoff_ms < 0) {
    throw Error(ErrorKind::invalid_argument, "llm retry_backoff_ms must be >= 0");
  }
  detail::split_url(base_url);
}

std::string chat_request_body(const retrieve::PromptBundle& prompt, const LlmEndpointConfig& cfg) {
  nlohmann::json body;
  body["model"] = cfg.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt.prompt_text}}});
  body["temperature"] = cfg.temperature;
  return body.dump();
}

Answer complete(const retrieve::PromptBundle& prompt, const LlmEndpointConfig& cfg) {
  cfg.validate();
  detail::SplitUrl url = detail::split_url(cfg.base_url);
  if (!url.path.empty() && url.path.back() == '/') url.path.pop_back();
  const std::string path = url.path + "/chat/completions";
  const std::string body = chat_request_body(prompt, cfg);

  const auto started = std::chrono::steady_clock::now();
  Error last(ErrorKind::transport, "no attempt made");
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(cfg.retry_backoff_ms));

    httplib::Client client(url.origin);
    detail::apply_timeouts(client, cfg.timeout_ms);
    const auto sent = std::chrono::steady_clock::now();
    const auto res = client.Post(path, body, "application/json");
    if (!res) {
      const auto elapsed = std::chrono::steady_clock::now() - sent;
      last = detail::is_timeout(res.error(), elapsed, cfg.timeout_ms)
                 ? Error(ErrorKind::timeout, "llm request timed out after " +
                                                 std::to_string(cfg.timeout_ms) + " ms")
                 : Error(ErrorKind::transport, "llm request failed: " + httplib::to_string(res.error()));
      continue;
    }
    if (res->status >= 500) {
      last = Error(ErrorKind::transport, "llm endpoint returned HTTP " + std::to_string(res->status));
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorKind::transport, "llm endpoint returned HTTP " + std::to_string(res->status));
    }

    Answer answer;
    try {
      const auto doc = nlohmann::json::parse(res->body);
      const auto& choice = doc.at("choices").at(0);
      answer.text = choice.at("message").at("content").get<std::string>();
      if (choice.contains("finish_reason") && choice["finish_reason"] == "length") {
        answer.finish_reason = FinishReason::truncated;
      }
    } catch (const std::exception& e) {
      throw Error(ErrorKind::malformed_response, std::string("llm response unusable: ") + e.what());
    }
    answer.model_id = cfg.model;
    answer.prompt_chars = utf8::length(prompt.prompt_text);
    answer.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return answer;
  }
  throw last;
}

Answer mock_complete(const retrieve::PromptBundle& prompt) {
  const auto started = std::chrono::steady_clock::now();
  std::string ids;
  for (std::size_t i = 0; i < prompt.included_chunk_ids.size(); ++i) {
    if (i > 0) ids.push_back(',');
    ids += prompt.included_chunk_ids[i];
  }
  Answer answer;
  answer.text =
      "MOCK-ANSWER sha=" + sha256_hex(prompt.prompt_text).substr(0, 8) + " chunks=[" + ids + "]";
  answer.model_id = std::string(kMockModelId);
  answer.prompt_chars = utf8::length(prompt.prompt_text);
  answer.finish_reason = FinishReason::complete;
  answer.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return answer;
}

}  // namespace lkb::llm
