// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lkb/corpus.hpp"
#include "lkb/embed.hpp"
#include "lkb/llm.hpp"
#include "lkb/vindex/index_io.hpp"

namespace lkb::service {

enum class EmbedderKind { reference, remote };
enum class LlmKind { mock, remote };

struct ServiceConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  std::filesystem::path data_dir = "lkb-data";

  corpus::SplitterConfig splitter;

  EmbedderKind embedder = EmbedderKind::reference;
  std::size_t embed_dim = embed::ReferenceEmbedderParams::kDefaultDim;
  std::uint32_t embed_vocab = embed::ReferenceEmbedderParams::kDefaultVocab;
  std::size_t embed_heads = embed::ReferenceEmbedderParams::kDefaultHeads;
  std::uint64_t embed_seed = embed::ReferenceEmbedderParams::kDefaultSeed;
  std::string embed_url;
  int embed_timeout_ms = 5000;

  vindex::IndexKind index_mode = vindex::IndexKind::flat;
  std::size_t nlist = 0;  // 0: ⌊√N⌋ at build time
  std::size_t nprobe = 8;
  std::size_t pq_m = 8;
  unsigned pq_bits = 8;
  std::uint64_t index_seed = 42;
  std::size_t kmeans_iters = 25;

  std::size_t top_k = 4;
  std::size_t budget = 2048;

  LlmKind llm = LlmKind::mock;
  llm::LlmEndpointConfig llm_endpoint;

  /// Throws invalid_argument naming the offending key.
  void validate() const;
};

/// Every recognised dotted key, in documentation order.
const std::vector<std::string>& config_keys();

/// "index.nlist" -> "LKB_INDEX_NLIST".
std::string env_var_for(std::string_view key);

/// Parses `key=value` lines; blank lines and lines starting with '#' are
/// skipped, surrounding whitespace trimmed. Throws invalid_argument with the
/// line number on malformed input.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies one `key=value`. Throws invalid_argument for unknown keys or
/// unparsable values.
void apply_setting(ServiceConfig& cfg, std::string_view key, std::string_view value);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// System environment lookup.
std::optional<std::string> process_env(const std::string& name);

/// Defaults, then `file` (if given), then LKB_* environment, then
/// `overrides`; validated.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file,
                          const EnvLookup& env = process_env,
                          const std::map<std::string, std::string>& overrides = {});

std::unique_ptr<embed::Embedder> make_embedder(const ServiceConfig& cfg);
std::unique_ptr<llm::LanguageModel> make_language_model(const ServiceConfig& cfg);

}  // namespace lkb::service
