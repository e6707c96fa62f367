// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lkb/error.hpp"

namespace lkb::vindex {

double inner_product(std::span<const float> a, std::span<const float> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

double squared_l2(std::span<const float> a, std::span<const float> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

double squared_l2(std::span<const float> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    acc += d * d;
  }
  return acc;
}

double cosine(std::span<const float> v, std::span<const float> w) {
  if (v.size() != w.size()) {
    throw Error(ErrorKind::dimension_mismatch, "cosine: dimensions " + std::to_string(v.size()) +
                                                   " and " + std::to_string(w.size()) + " differ");
  }
  double dot = 0.0, vv = 0.0, ww = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v[i], b = w[i];
    dot += a * b;
    vv += a * a;
    ww += b * b;
  }
  if (vv == 0.0 || ww == 0.0) throw Error(ErrorKind::invalid_argument, "cosine of a zero vector");
  return dot / (std::sqrt(vv) * std::sqrt(ww));
}

double cosine(const embed::EmbeddingVector& v, const embed::EmbeddingVector& w) {
  return cosine(v.values(), w.values());
}

std::vector<SearchHit> select_top_k(std::vector<Candidate> candidates, std::size_t k) {
  const auto before = [](const Candidate& a, const Candidate& b) {
    return ranks_before(a.score, *a.id, b.score, *b.id);
  };
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), before);
  std::vector<SearchHit> hits;
  hits.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) hits.push_back({*candidates[i].id, candidates[i].score});
  return hits;
}

}  // namespace lkb::vindex
