// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lkb/embed.hpp"

namespace lkb::vindex {

/// Σ aᵢbᵢ accumulated in double, left to right.
double inner_product(std::span<const float> a, std::span<const float> b) noexcept;

/// Σ (aᵢ - bᵢ)² accumulated in double, left to right.
double squared_l2(std::span<const float> a, std::span<const float> b) noexcept;
double squared_l2(std::span<const float> a, std::span<const double> b) noexcept;

/// Σvᵢwᵢ / (√Σvᵢ² · √Σwᵢ²). Throws dimension_mismatch, and invalid_argument
/// for a zero vector.
double cosine(std::span<const float> v, std::span<const float> w);
double cosine(const embed::EmbeddingVector& v, const embed::EmbeddingVector& w);

struct SearchHit {
  std::string id;
  double score = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Total result order: score descending, then id ascending.
inline bool ranks_before(double score_a, const std::string& id_a,
                         double score_b, const std::string& id_b) noexcept {
  if (score_a != score_b) return score_a > score_b;
  return id_a < id_b;
}

struct Candidate {
  double score;
  const std::string* id;
};

/// Keeps the best min(k, size) candidates in result order.
std::vector<SearchHit> select_top_k(std::vector<Candidate> candidates,
                                    std::size_t k);

}  // namespace lkb::vindex
