// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/kmeans.hpp"

#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_set>

#include "lkb/error.hpp"
#include "lkb/rng.hpp"
#include "lkb/vindex/similarity.hpp"

namespace lkb::vindex {

namespace {

bool has_repeated_rows(std::span<const float> data, std::size_t dim,
                       std::span<const std::size_t> rows) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t r : rows) {
    const std::string_view bytes(reinterpret_cast<const char*>(data.data() + r * dim),
                                 dim * sizeof(float));
    if (!seen.insert(bytes).second) return true;
  }
  return false;
}

}  // namespace

std::uint32_t nearest_centroid(std::span<const float> centroids, std::size_t dim,
                               std::span<const float> point) noexcept {
  const std::size_t k = centroids.size() / dim;
  std::uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = squared_l2(point, centroids.subspan(c * dim, dim));
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::uint32_t>(c);
    }
  }
  return best;
}

KMeansResult kmeans(std::span<const float> data, std::size_t dim, std::size_t k,
                    std::size_t max_iters, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::invalid_argument, "kmeans: k must be >= 1");
  if (dim == 0 || data.empty()) throw Error(ErrorKind::invalid_argument, "kmeans: empty input");
  if (data.size() % dim != 0) {
    throw Error(ErrorKind::invalid_argument, "kmeans: data is not a whole number of rows");
  }
  if (max_iters == 0) throw Error(ErrorKind::invalid_argument, "kmeans: max_iters must be >= 1");
  const std::size_t n = data.size() / dim;
  const auto point = [&](std::size_t i) { return data.subspan(i * dim, dim); };

  KMeansResult result;

  // Partial Fisher-Yates: the first min(k, n) slots become the sample.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  const std::size_t distinct = std::min(k, n);
  for (std::size_t i = 0; i < distinct; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
  }
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(distinct));
  for (std::size_t i = distinct; i < k; ++i) chosen.push_back(order[i % n]);
  result.duplicate_centroids = k > n || has_repeated_rows(data, dim, chosen);

  Matrix centroids(k, dim);
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = point(chosen[c]);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }

  std::vector<std::uint32_t> assign(n, 0);
  std::vector<double> own_distance(n, 0.0);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = point(i);
      std::uint32_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_l2(x, centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::uint32_t>(c);
        }
      }
      if (iter == 0 || assign[i] != best) changed = true;
      assign[i] = best;
      own_distance[i] = best_d;
      objective += best_d;
    }
    result.objective.push_back(objective);
    result.iterations = iter + 1;
    if (!changed) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = point(i);
      double* s = sums.data() + assign[i] * dim;
      for (std::size_t j = 0; j < dim; ++j) s[j] += x[j];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = centroids.row(c);
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t j = 0; j < dim; ++j) dst[j] = sums[c * dim + j] * inv;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (own_distance[i] > far_d) {
          far_d = own_distance[i];
          far = i;
        }
      }
      const auto src = point(far);
      std::copy(src.begin(), src.end(), centroids.row(c).begin());
      own_distance[far] = -1.0;
    }
  }

  result.centroids = std::move(centroids);
  result.assignments = std::move(assign);
  return result;
}

}  // namespace lkb::vindex
