// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lkb/corpus.hpp"
#include "lkb/embed.hpp"
#include "lkb/vindex.hpp"

namespace lkb::retrieve {

using ChunkMap = std::map<std::string, corpus::Chunk, std::less<>>;

struct RetrievedChunk {
  corpus::Chunk chunk;
  double score = 0.0;
};

struct RetrieveParams {
  std::size_t k = 4;
  vindex::IndexKind mode = vindex::IndexKind::flat;
  std::size_t nprobe = 8;
};

struct RetrievalResult {
  std::string query_text;
  std::vector<RetrievedChunk> hits;
  std::size_t k_requested = 0;
  vindex::IndexKind search_mode = vindex::IndexKind::flat;
  /// Partitions probed; 0 for flat search.
  std::size_t nprobe_used = 0;
};

// Read-only handle over one consistent store snapshot. `exact` is always
// present; `approximate` only after an IVF/IVF-PQ build.
struct KnowledgeView {
  const vindex::FlatIndex& exact;
  const vindex::IvfIndex* approximate = nullptr;
  const ChunkMap& chunks;
};

/// Embeds `query`, searches with params.mode, resolves ids and drops hits
/// whose text duplicates a higher-ranked hit. Throws empty_index,
/// not_found (dangling id), invalid_argument (k == 0, mode not built,
/// nprobe out of range) and whatever the embedder throws.
RetrievalResult retrieve(const KnowledgeView& view, const embed::Embedder& embedder,
                         std::string_view query, const RetrieveParams& params);

// ---------------------------------------------------------------------------
// Prompt assembly

inline constexpr std::string_view kCanonicalTemplate =
    "Known Information:\n{context}\nBased on known information, please answer "
    "relevant questions concisely and professionally.\nThe question is: {query}.";
inline constexpr std::string_view kCanonicalTemplateId = "lkb-known-information-en-v1";
inline constexpr std::string_view kContextSeparator = "\n---\n";
inline constexpr std::string_view kNoKnowledgeSentinel =
    "(no relevant local knowledge found)";
inline constexpr std::size_t kDefaultBudget = 2048;
inline constexpr std::size_t kDefaultTopK = 4;

struct PromptTemplate {
  std::string id{kCanonicalTemplateId};
  std::string text{kCanonicalTemplate};
};

struct PromptBundle {
  std::string prompt_text;
  std::string template_id;
  /// Scalar values of included context; 0 when the sentinel is used.
  std::size_t context_chars = 0;
  std::vector<std::string> included_chunk_ids;
  bool truncated = false;
};

/// Substitutes {context} and {query} in one pass. Each placeholder must
/// occur exactly once, otherwise invalid_argument.
std::string render_template(std::string_view tmpl, std::string_view context,
                            std::string_view query);

/// Joins hit texts with kContextSeparator in rank order. Over budget, drops
/// the lowest-ranked hits while more than one remains, then cuts the last
/// one at its final whitespace inside the budget (hard cut if there is
/// none). No hits renders kNoKnowledgeSentinel.
PromptBundle assemble_prompt(const RetrievalResult& result, std::size_t budget,
                             const PromptTemplate& tmpl = {});

}  // namespace lkb::retrieve
