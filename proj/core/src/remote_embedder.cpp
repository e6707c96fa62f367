// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <nlohmann/json.hpp>

#include "http_util.hpp"
#include "lkb/embed.hpp"
#include "lkb/error.hpp"

namespace lkb::embed {

EmbeddingVector embed_remote(std::string_view text, const RemoteEmbedderConfig& cfg) {
  if (cfg.timeout_ms <= 0) throw Error(ErrorKind::invalid_argument, "timeout_ms must be > 0");
  const detail::SplitUrl url = detail::split_url(cfg.url);
  httplib::Client client(url.origin);
  detail::apply_timeouts(client, cfg.timeout_ms);

  const std::string body = nlohmann::json{{"input", std::string(text)}}.dump();
  const auto started = std::chrono::steady_clock::now();
  const auto res = client.Post(url.path, body, "application/json");
  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const std::string why = detail::is_timeout(res.error(), elapsed, cfg.timeout_ms)
                                ? "timed out after " + std::to_string(cfg.timeout_ms) + " ms"
                                : httplib::to_string(res.error());
    throw Error(ErrorKind::transport, "embedder " + cfg.url + ": " + why);
  }
  if (res->status != 200) {
    throw Error(ErrorKind::transport,
                "embedder " + cfg.url + " returned HTTP " + std::to_string(res->status));
  }

  std::vector<double> values;
  try {
    const auto doc = nlohmann::json::parse(res->body);
    const auto& arr = doc.at("embedding");
    if (!arr.is_array()) throw std::runtime_error("embedding is not an array");
    values.reserve(arr.size());
    for (const auto& v : arr) {
      if (!v.is_number()) throw std::runtime_error("embedding entry is not a number");
      values.push_back(v.get<double>());
    }
  } catch (const std::exception& e) {
    throw Error(ErrorKind::malformed_response,
                "embedder " + cfg.url + " sent an unusable body: " + e.what());
  }
  if (values.size() != cfg.dim) {
    throw Error(ErrorKind::dimension_mismatch,
                "embedder returned " + std::to_string(values.size()) +
                    " values, configured dim is " + std::to_string(cfg.dim));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::non_finite, "embedder returned a non-finite value");
  }
  return EmbeddingVector::normalize(std::span<const double>(values));
}

}  // namespace lkb::embed
