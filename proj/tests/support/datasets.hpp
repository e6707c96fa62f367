// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lkb::testing {

// Row-major unit vectors with generated ids ("v000042").
struct VectorSet {
  std::size_t dim = 0;
  std::vector<float> data;
  std::vector<std::string> ids;

  std::size_t size() const noexcept { return ids.size(); }
  const float* row(std::size_t i) const { return data.data() + i * dim; }
};

std::string vector_id(std::size_t i);

/// Normalised isotropic Gaussian rows.
VectorSet random_unit_vectors(std::size_t n, std::size_t dim, std::uint64_t seed);

// Clustered unit vectors: `clusters` random unit centres, each with its own
// `intrinsic` random unit directions. A sample is
// centre + spread * Σ_j z_j u_j with z_j ~ N(0, 1), normalised. Points and
// queries drawn with different seeds share the same geometry.
struct Mixture {
  std::size_t dim = 0;
  std::size_t intrinsic = 0;
  double spread = 0.0;
  std::vector<double> centers;     // clusters × dim
  std::vector<double> directions;  // clusters × intrinsic × dim

  static Mixture make(std::size_t clusters, std::size_t dim, std::size_t intrinsic,
                      double spread, std::uint64_t seed);
  std::size_t clusters() const noexcept { return centers.size() / dim; }
  VectorSet sample(std::size_t n, std::uint64_t seed) const;
};

/// The dataset the recall gates run on: 10,000 base vectors and 200
/// queries, D = 64, 100 clusters of intrinsic dimension 12, spread 0.4,
/// mixture seed 20260, base seed 1, query seed 2.
struct RecallDataset {
  VectorSet base;
  VectorSet queries;
};
RecallDataset pinned_recall_dataset();

}  // namespace lkb::testing
