// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lkb/embed.hpp"
#include "lkb/vindex/pq.hpp"
#include "lkb/vindex/similarity.hpp"

namespace lkb::vindex {

struct IvfBuildParams {
  std::size_t nlist = 0;  // 0 selects default_nlist(N)
  std::uint64_t seed = 42;
  std::size_t max_iters = 25;
};

struct PqParams {
  std::size_t m = 8;
  unsigned bits = 8;
};

/// ⌊√N⌋ clamped to [1, 4096].
std::size_t default_nlist(std::size_t n) noexcept;

// Inverted-file index over k-means partitions. Postings hold either raw
// rows (exact scoring within probed lists) or PQ codes of the residual
// x - centroid (ADC scoring).
//
// Removal tombstones the posting entry; compact() or a rebuild drops it.
class IvfIndex {
 public:
  struct PostingList {
    std::vector<std::string> ids;
    std::vector<float> vectors;         // raw mode: size × dim
    std::vector<std::uint16_t> codes;   // pq mode: size × M
    std::vector<std::uint8_t> live;
    std::size_t live_count = 0;

    std::size_t size() const noexcept { return ids.size(); }
  };

  IvfIndex(std::size_t dim, std::vector<float> centroids, std::uint64_t seed,
           std::optional<PqCodebooks> codebooks = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nlist() const noexcept { return lists_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  bool quantized() const noexcept { return codebooks_.has_value(); }
  const std::optional<PqCodebooks>& codebooks() const noexcept { return codebooks_; }
  std::span<const float> centroids() const noexcept { return centroids_; }
  std::span<const float> centroid(std::size_t list) const {
    return {centroids_.data() + list * dim_, dim_};
  }
  const std::vector<PostingList>& lists() const noexcept { return lists_; }

  std::size_t size() const noexcept { return live_total_; }
  bool empty() const noexcept { return live_total_ == 0; }
  std::size_t trained_on() const noexcept { return trained_on_; }
  void set_trained_on(std::size_t n) noexcept { trained_on_ = n; }

  /// Live entries per list.
  std::vector<std::size_t> list_sizes() const;

  /// Routes to the nearest centroid; PQ mode stores the residual code.
  void add(std::string id, std::span<const float> vector);
  void add(std::string id, const embed::EmbeddingVector& v) {
    add(std::move(id), v.values());
  }
  /// Appends a pre-encoded entry to a specific list (used by the loader).
  void add_encoded(std::size_t list, std::string id, std::span<const float> vector,
                   std::span<const std::uint16_t> code);
  void remove(std::string_view id);
  bool contains(std::string_view id) const;
  void compact();

  std::uint32_t assign(std::span<const float> vector) const noexcept;

  /// Lists sorted by squared distance to `query`, lowest index on ties.
  std::vector<std::uint32_t> probe_order(std::span<const float> query,
                                         std::size_t nprobe) const;

  /// Scans the nprobe nearest lists. Throws invalid_argument unless
  /// 1 <= nprobe <= nlist and k >= 1; dimension_mismatch on width.
  std::vector<SearchHit> search(std::span<const float> query, std::size_t k,
                                std::size_t nprobe) const;
  std::vector<SearchHit> search(const embed::EmbeddingVector& query, std::size_t k,
                                std::size_t nprobe) const {
    return search(query.values(), k, nprobe);
  }

  /// PQ mode: centroid + decode(code) for a stored id, in double.
  std::vector<double> reconstruct(std::string_view id) const;
  /// PQ mode: ⟨q, centroid⟩ + table-sum, the score search() assigns to `id`.
  double adc_score(std::span<const float> query, std::string_view id) const;

 private:
  std::size_t dim_;
  std::vector<float> centroids_;
  std::uint64_t seed_;
  std::optional<PqCodebooks> codebooks_;
  std::vector<PostingList> lists_;
  std::unordered_map<std::string, std::pair<std::uint32_t, std::uint32_t>> where_;
  std::size_t live_total_ = 0;
  std::size_t trained_on_ = 0;
};

/// Trains kmeans(nlist) on all rows and routes every row to its list.
/// Throws invalid_argument when nlist > N or N == 0.
IvfIndex build_ivf(std::size_t dim, std::span<const float> vectors,
                   std::span<const std::string> ids, const IvfBuildParams& params);

/// As build_ivf, then trains PQ codebooks on the residuals and stores codes.
IvfIndex build_ivfpq(std::size_t dim, std::span<const float> vectors,
                     std::span<const std::string> ids,
                     const IvfBuildParams& params, const PqParams& pq);

}  // namespace lkb::vindex
