// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lkb/matrix.hpp"

namespace lkb::vindex {

struct KMeansResult {
  Matrix centroids;                         // k × dim
  std::vector<std::uint32_t> assignments;   // N
  std::vector<double> objective;            // one entry per assignment pass
  std::size_t iterations = 0;
  /// Set when initial centroids had to repeat a point (k > distinct rows).
  bool duplicate_centroids = false;
};

// Lloyd's algorithm by Euclidean distance.
//
//  - init: k rows sampled without replacement by a partial Fisher-Yates
//    shuffle (swap i with i + below(N - i)) driven by SeededRng(seed); when
//    k > N the full permutation is cycled and duplicate_centroids is set.
//  - each iteration assigns every point to its nearest centroid (lowest
//    index wins ties), records Σ‖x - c‖², stops if nothing moved, otherwise
//    recomputes means.
//  - an empty cluster is reseeded to the point currently farthest from its
//    centroid; that point is then excluded from further reseeding in the
//    same pass.
//
// Throws invalid_argument for k == 0, an empty input or ragged data.
KMeansResult kmeans(std::span<const float> data, std::size_t dim, std::size_t k,
                    std::size_t max_iters, std::uint64_t seed);

/// Index of the nearest row of `centroids` (f32, row-major), lowest index on
/// ties.
std::uint32_t nearest_centroid(std::span<const float> centroids, std::size_t dim,
                               std::span<const float> point) noexcept;

}  // namespace lkb::vindex
