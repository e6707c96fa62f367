// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/retrieve.hpp"

#include <string>
#include <unordered_set>

#include "lkb/error.hpp"

namespace lkb::retrieve {

namespace {

std::vector<vindex::SearchHit> run_search(const KnowledgeView& view,
                                          const embed::EmbeddingVector& q, std::size_t k,
                                          const RetrieveParams& params) {
  switch (params.mode) {
    case vindex::IndexKind::flat:
      return view.exact.search(q, k);
    case vindex::IndexKind::ivf:
    case vindex::IndexKind::ivfpq: {
      const auto* ivf = view.approximate;
      const bool built = ivf != nullptr && (ivf->quantized() == (params.mode == vindex::IndexKind::ivfpq));
      if (!built) {
        throw Error(ErrorKind::invalid_argument,
                    "search mode '" + std::string(vindex::to_string(params.mode)) +
                        "' is not built; rebuild the index first");
      }
      return ivf->search(q, k, params.nprobe);
    }
  }
  return {};
}

}  // namespace

RetrievalResult retrieve(const KnowledgeView& view, const embed::Embedder& embedder,
                         std::string_view query, const RetrieveParams& params) {
  if (params.k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (view.exact.empty()) throw Error(ErrorKind::empty_index, "the knowledge base index is empty");

  const embed::EmbeddingVector q = embedder.embed(query);

  RetrievalResult result;
  result.query_text = std::string(query);
  result.k_requested = params.k;
  result.search_mode = params.mode;
  result.nprobe_used = params.mode == vindex::IndexKind::flat ? 0 : params.nprobe;

  // Duplicate texts are dropped, so widen the search until k distinct hits
  // survive or the candidate pool is exhausted.
  const std::size_t pool = view.exact.size();
  for (std::size_t fetch = params.k;; fetch = std::min(pool, fetch * 2)) {
    const std::vector<vindex::SearchHit> hits = run_search(view, q, fetch, params);
    result.hits.clear();
    std::unordered_set<std::string_view> seen_text;
    for (const auto& hit : hits) {
      const auto it = view.chunks.find(hit.id);
      if (it == view.chunks.end()) {
        throw Error(ErrorKind::not_found, "index references unknown chunk '" + hit.id + "'");
      }
      if (!seen_text.insert(it->second.text).second) continue;
      result.hits.push_back({it->second, hit.score});
      if (result.hits.size() == params.k) break;
    }
    if (result.hits.size() == params.k || hits.size() < fetch || fetch >= pool) break;
  }
  return result;
}

}  // namespace lkb::retrieve
