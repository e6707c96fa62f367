// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/flat_index.hpp"

#include <cmath>

#include "lkb/error.hpp"

namespace lkb::vindex {

void check_unit_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "vector has a non-finite entry");
    acc += static_cast<double>(x) * x;
  }
  if (std::abs(std::sqrt(acc) - 1.0) > embed::kUnitNormTolerance) {
    throw Error(ErrorKind::invalid_argument,
                "vector norm " + std::to_string(std::sqrt(acc)) + " is not 1 within 1e-6");
  }
}

void FlatIndex::add(std::string id, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "vector of width " + std::to_string(vector.size()) +
                                                   " added to index of width " +
                                                   std::to_string(dim_));
  }
  if (positions_.contains(id)) throw Error(ErrorKind::duplicate_id, "duplicate id '" + id + "'");
  check_unit_norm(vector);
  positions_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

void FlatIndex::remove(std::string_view id) {
  const auto it = positions_.find(std::string(id));
  if (it == positions_.end()) {
    throw Error(ErrorKind::not_found, "unknown id '" + std::string(id) + "'");
  }
  const std::size_t pos = it->second;
  positions_.erase(it);
  ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(pos));
  const auto first = data_.begin() + static_cast<std::ptrdiff_t>(pos * dim_);
  data_.erase(first, first + static_cast<std::ptrdiff_t>(dim_));
  for (std::size_t i = pos; i < ids_.size(); ++i) positions_[ids_[i]] = i;
}

bool FlatIndex::contains(std::string_view id) const {
  return positions_.contains(std::string(id));
}

std::span<const float> FlatIndex::vector_of(std::string_view id) const {
  const auto it = positions_.find(std::string(id));
  if (it == positions_.end()) {
    throw Error(ErrorKind::not_found, "unknown id '" + std::string(id) + "'");
  }
  return row(it->second);
}

std::vector<SearchHit> FlatIndex::search(std::span<const float> query, std::size_t k) const {
  if (query.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "query of width " + std::to_string(query.size()) +
                                                   " against index of width " +
                                                   std::to_string(dim_));
  }
  if (k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  std::vector<Candidate> candidates;
  candidates.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    candidates.push_back({inner_product(query, row(i)), &ids_[i]});
  }
  return select_top_k(std::move(candidates), k);
}

FlatIndex build_flat(std::size_t dim, std::span<const float> vectors,
                     std::span<const std::string> ids) {
  if (dim == 0 || vectors.size() != ids.size() * dim) {
    throw Error(ErrorKind::dimension_mismatch, "build_flat: " + std::to_string(vectors.size()) +
                                                   " values do not form " +
                                                   std::to_string(ids.size()) + " rows of width " +
                                                   std::to_string(dim));
  }
  FlatIndex index(dim);
  for (std::size_t i = 0; i < ids.size(); ++i) index.add(ids[i], vectors.subspan(i * dim, dim));
  return index;
}

}  // namespace lkb::vindex
