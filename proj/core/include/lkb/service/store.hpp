// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lkb/corpus.hpp"
#include "lkb/retrieve.hpp"
#include "lkb/vindex.hpp"

namespace lkb::service {

struct StoredDocument {
  corpus::Document document;
  std::string sha256;
  std::size_t chunk_count = 0;
};

// One immutable, internally consistent view of the knowledge base. Writers
// build a fresh Snapshot and publish it; readers never see a partial one.
struct Snapshot {
  std::map<std::string, StoredDocument, std::less<>> documents;
  retrieve::ChunkMap chunks;
  vindex::FlatIndex vectors;
  std::optional<vindex::IvfIndex> approximate;
  std::uint64_t generation = 0;

  vindex::IndexKind active_kind() const noexcept;
  retrieve::KnowledgeView view() const {
    return {vectors, approximate ? &*approximate : nullptr, chunks};
  }
};

// On-disk layout under the data directory:
//
//   manifest.json       versioned listing with per-file and per-doc sha256
//   docs/<doc_id>.txt   normalised document text
//   chunks.jsonl        one chunk record per line
//   vectors.bin         every embedding as a flat index
//   index.bin           the active search index (flat, ivf or ivfpq)
//
// Every file is replaced via rename and the manifest goes last. A save cut
// short leaves a manifest whose digests no longer match, which load()
// reports instead of serving mixed state.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }

  /// A fresh directory loads as an empty snapshot of width `dim`. Throws
  /// io on unreadable files and checksum_mismatch when a digest disagrees.
  Snapshot load(std::size_t dim) const;
  void save(const Snapshot& snapshot) const;

 private:
  std::filesystem::path root_;
};

}  // namespace lkb::service
