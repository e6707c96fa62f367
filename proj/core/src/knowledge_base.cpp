// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/service/knowledge_base.hpp"

#include <algorithm>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"

namespace lkb::service {

namespace {

class RebuildGuard {
 public:
  explicit RebuildGuard(std::atomic<bool>& flag) : flag_(flag) {
    if (flag_.exchange(true)) throw Error(ErrorKind::busy, "an index rebuild is already in progress");
  }
  ~RebuildGuard() { flag_.store(false); }
  RebuildGuard(const RebuildGuard&) = delete;
  RebuildGuard& operator=(const RebuildGuard&) = delete;

 private:
  std::atomic<bool>& flag_;
};

embed::EmbeddingVector embed_or_unavailable(const embed::Embedder& embedder, std::string_view text) {
  try {
    return embedder.embed(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::unavailable, "embedder unavailable: " + std::string(e.what()));
  }
}

// Forwards to the real embedder, mapping its failures to `unavailable`.
class GuardedEmbedder final : public embed::Embedder {
 public:
  explicit GuardedEmbedder(const embed::Embedder& inner) : inner_(inner) {}
  embed::EmbeddingVector embed(std::string_view text) const override {
    return embed_or_unavailable(inner_, text);
  }
  std::size_t dim() const noexcept override { return inner_.dim(); }
  std::string model_id() const override { return inner_.model_id(); }

 private:
  const embed::Embedder& inner_;
};

}  // namespace

KnowledgeBase::KnowledgeBase(ServiceConfig cfg, std::unique_ptr<embed::Embedder> embedder,
                             std::unique_ptr<llm::LanguageModel> model)
    : cfg_(std::move(cfg)),
      embedder_(std::move(embedder)),
      model_(std::move(model)),
      store_(cfg_.data_dir) {
  if (!embedder_ || !model_) {
    throw Error(ErrorKind::invalid_argument, "knowledge base needs an embedder and a model");
  }
  cfg_.validate();
  current_ = std::make_shared<const Snapshot>(store_.load(embedder_->dim()));
}

std::unique_ptr<KnowledgeBase> KnowledgeBase::open(const ServiceConfig& cfg) {
  cfg.validate();
  return std::make_unique<KnowledgeBase>(cfg, make_embedder(cfg), make_language_model(cfg));
}

std::shared_ptr<const Snapshot> KnowledgeBase::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void KnowledgeBase::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(next);
}

IngestResult KnowledgeBase::ingest(const IngestRequest& request) {
  corpus::Document doc = corpus::load_document(request.content, request.format, request.source);
  const std::string digest = sha256_hex(doc.text);

  std::lock_guard write(write_mutex_);
  const auto current = snapshot();
  if (const auto it = current->documents.find(doc.doc_id); it != current->documents.end()) {
    if (it->second.sha256 != digest) {
      throw Error(ErrorKind::conflict,
                  "document '" + doc.doc_id + "' is already stored with different content");
    }
    return {doc.doc_id, it->second.chunk_count, false};
  }

  std::vector<corpus::Chunk> chunks = corpus::split(doc, cfg_.splitter);
  std::vector<embed::EmbeddingVector> vectors;
  vectors.reserve(chunks.size());
  for (const auto& c : chunks) vectors.push_back(embed_or_unavailable(*embedder_, c.text));

  auto next = std::make_shared<Snapshot>(*current);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    next->vectors.add(chunks[i].chunk_id, vectors[i]);
    if (next->approximate) next->approximate->add(chunks[i].chunk_id, vectors[i]);
    std::string id = chunks[i].chunk_id;
    next->chunks.emplace(std::move(id), std::move(chunks[i]));
  }
  IngestResult result{doc.doc_id, chunks.size(), true};
  std::string id = doc.doc_id;
  next->documents.emplace(std::move(id), StoredDocument{std::move(doc), digest, chunks.size()});
  ++next->generation;

  store_.save(*next);
  publish(std::move(next));
  return result;
}

retrieve::RetrieveParams KnowledgeBase::resolve(const Snapshot& snap,
                                                std::optional<std::size_t> k,
                                                std::optional<vindex::IndexKind> mode,
                                                std::optional<std::size_t> nprobe) const {
  retrieve::RetrieveParams params;
  params.k = k.value_or(cfg_.top_k);
  params.mode = mode.value_or(snap.active_kind());
  if (params.mode != vindex::IndexKind::flat && snap.approximate) {
    params.nprobe = nprobe.value_or(std::min(cfg_.nprobe, snap.approximate->nlist()));
  } else {
    params.nprobe = nprobe.value_or(cfg_.nprobe);
  }
  return params;
}

retrieve::RetrievalResult KnowledgeBase::query(const QueryRequest& request) const {
  const auto snap = snapshot();
  const GuardedEmbedder embedder(*embedder_);
  return retrieve::retrieve(snap->view(), embedder, request.query,
                            resolve(*snap, request.k, request.mode, request.nprobe));
}

AskResult KnowledgeBase::ask(const AskRequest& request) const {
  const std::size_t budget = request.budget.value_or(cfg_.budget);
  if (budget == 0) throw Error(ErrorKind::invalid_argument, "budget must be >= 1");

  const auto snap = snapshot();
  AskResult out;
  const retrieve::RetrieveParams params = resolve(*snap, request.k, std::nullopt, std::nullopt);
  if (params.k == 0) {
    out.retrieval.query_text = request.query;
    out.retrieval.search_mode = params.mode;
  } else {
    const GuardedEmbedder embedder(*embedder_);
    out.retrieval = retrieve::retrieve(snap->view(), embedder, request.query, params);
  }
  out.prompt = retrieve::assemble_prompt(out.retrieval, budget);
  out.answer = model_->complete(out.prompt);
  return out;
}

Health KnowledgeBase::health() const {
  const auto snap = snapshot();
  return {snap->active_kind(), snap->vectors.size(), snap->documents.size()};
}

IndexStats KnowledgeBase::stats_of(const Snapshot& snap) {
  IndexStats s;
  s.index_kind = snap.active_kind();
  s.vectors = snap.vectors.size();
  s.docs = snap.documents.size();
  s.chunks = snap.chunks.size();
  if (snap.approximate) {
    s.nlist = snap.approximate->nlist();
    s.list_sizes = snap.approximate->list_sizes();
    if (const auto& books = snap.approximate->codebooks()) {
      s.pq_m = books->subquantizers();
      s.pq_bits = books->bits();
    }
  }
  return s;
}

IndexStats KnowledgeBase::stats() const { return stats_of(*snapshot()); }

IndexStats KnowledgeBase::rebuild(const RebuildRequest& request) {
  RebuildGuard guard(rebuilding_);
  std::lock_guard write(write_mutex_);

  const auto current = snapshot();
  auto next = std::make_shared<Snapshot>(*current);
  const vindex::IndexKind mode = request.mode.value_or(cfg_.index_mode);
  if (mode == vindex::IndexKind::flat) {
    next->approximate.reset();
  } else {
    if (next->vectors.empty()) {
      throw Error(ErrorKind::empty_index, "cannot train an index on an empty knowledge base");
    }
    vindex::IvfBuildParams ivf;
    ivf.nlist = request.nlist.value_or(cfg_.nlist);
    ivf.seed = request.seed.value_or(cfg_.index_seed);
    ivf.max_iters = cfg_.kmeans_iters;
    const auto data = next->vectors.data();
    const auto& ids = next->vectors.ids();
    const std::size_t dim = next->vectors.dim();
    if (mode == vindex::IndexKind::ivf) {
      next->approximate = vindex::build_ivf(dim, data, ids, ivf);
    } else {
      const vindex::PqParams pq{request.m.value_or(cfg_.pq_m), request.bits.value_or(cfg_.pq_bits)};
      next->approximate = vindex::build_ivfpq(dim, data, ids, ivf, pq);
    }
  }
  ++next->generation;

  store_.save(*next);
  IndexStats stats = stats_of(*next);
  publish(std::move(next));
  return stats;
}

}  // namespace lkb::service
