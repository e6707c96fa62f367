// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lkb/embed.hpp"
#include "lkb/llm.hpp"
#include "lkb/retrieve.hpp"
#include "lkb/service/config.hpp"
#include "lkb/service/store.hpp"

namespace lkb::service {

struct IngestRequest {
  std::string source;
  corpus::Format format = corpus::Format::plain_text;
  std::string content;
};

struct IngestResult {
  std::string doc_id;
  std::size_t chunk_count = 0;
  bool created = false;
};

struct QueryRequest {
  std::string query;
  std::optional<std::size_t> k;
  std::optional<vindex::IndexKind> mode;
  std::optional<std::size_t> nprobe;
};

struct AskRequest {
  std::string query;
  std::optional<std::size_t> k;
  std::optional<std::size_t> budget;
};

struct AskResult {
  retrieve::RetrievalResult retrieval;
  retrieve::PromptBundle prompt;
  llm::Answer answer;
};

struct Health {
  vindex::IndexKind index_kind = vindex::IndexKind::flat;
  std::size_t vectors = 0;
  std::size_t docs = 0;
};

struct IndexStats {
  vindex::IndexKind index_kind = vindex::IndexKind::flat;
  std::size_t vectors = 0;
  std::size_t docs = 0;
  std::size_t chunks = 0;
  std::size_t nlist = 0;
  std::size_t pq_m = 0;
  unsigned pq_bits = 0;
  std::vector<std::size_t> list_sizes;
};

struct RebuildRequest {
  std::optional<vindex::IndexKind> mode;
  std::optional<std::size_t> nlist;
  std::optional<std::size_t> m;
  std::optional<unsigned> bits;
  std::optional<std::uint64_t> seed;
};

// Ties corpus, embedder, indexes and the language model together over a
// persistent CorpusStore. Reads work on immutable snapshots; writes are
// serialised and publish a new snapshot atomically.
class KnowledgeBase {
 public:
  KnowledgeBase(ServiceConfig cfg, std::unique_ptr<embed::Embedder> embedder,
                std::unique_ptr<llm::LanguageModel> model);

  /// Builds the embedder and model from `cfg` and loads cfg.data_dir.
  static std::unique_ptr<KnowledgeBase> open(const ServiceConfig& cfg);

  const ServiceConfig& config() const noexcept { return cfg_; }
  const embed::Embedder& embedder() const noexcept { return *embedder_; }

  std::shared_ptr<const Snapshot> snapshot() const;

  /// Idempotent for identical content; conflict when a stored doc_id maps to
  /// different text; unavailable when the embedder fails.
  IngestResult ingest(const IngestRequest& request);

  retrieve::RetrievalResult query(const QueryRequest& request) const;

  /// k == 0 skips retrieval and prompts with the no-knowledge sentinel.
  AskResult ask(const AskRequest& request) const;

  Health health() const;
  IndexStats stats() const;

  /// Retrains from the stored vectors and swaps the active index. Throws busy
  /// while another rebuild runs.
  IndexStats rebuild(const RebuildRequest& request);

 private:
  void publish(std::shared_ptr<const Snapshot> next);
  retrieve::RetrieveParams resolve(const Snapshot& snap, std::optional<std::size_t> k,
                                   std::optional<vindex::IndexKind> mode,
                                   std::optional<std::size_t> nprobe) const;
  static IndexStats stats_of(const Snapshot& snap);

  ServiceConfig cfg_;
  std::unique_ptr<embed::Embedder> embedder_;
  std::unique_ptr<llm::LanguageModel> model_;
  CorpusStore store_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> current_;

  std::mutex write_mutex_;
  std::atomic<bool> rebuilding_{false};
};

}  // namespace lkb::service
