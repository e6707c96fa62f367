// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lkb/embed.hpp"
#include "lkb/vindex/similarity.hpp"

namespace lkb::vindex {

// Exhaustive inner-product index over unit-norm rows. Because every row and
// query is L2-normalised, the inner product is the cosine similarity.
class FlatIndex {
 public:
  explicit FlatIndex(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  /// Throws duplicate_id, dimension_mismatch, or invalid_argument when the
  /// row is not unit-norm within 1e-6.
  void add(std::string id, std::span<const float> vector);
  void add(std::string id, const embed::EmbeddingVector& vector) {
    add(std::move(id), vector.values());
  }

  /// Throws not_found.
  void remove(std::string_view id);

  bool contains(std::string_view id) const;

  /// Exact top-min(k, size). Throws dimension_mismatch, invalid_argument
  /// for k == 0.
  std::vector<SearchHit> search(std::span<const float> query, std::size_t k) const;
  std::vector<SearchHit> search(const embed::EmbeddingVector& query,
                                std::size_t k) const {
    return search(query.values(), k);
  }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  /// Row-major N × dim.
  std::span<const float> data() const noexcept { return data_; }

  /// Row of `id`; throws not_found.
  std::span<const float> vector_of(std::string_view id) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> positions_;
};

/// Throws dimension_mismatch when rows are ragged, plus everything add() can.
FlatIndex build_flat(std::size_t dim, std::span<const float> vectors,
                     std::span<const std::string> ids);

/// Throws not-unit-norm as invalid_argument.
void check_unit_norm(std::span<const float> v);

}  // namespace lkb::vindex
