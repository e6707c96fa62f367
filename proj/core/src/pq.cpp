// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/pq.hpp"

#include <limits>
#include <string>

#include "lkb/error.hpp"
#include "lkb/vindex/kmeans.hpp"
#include "lkb/vindex/similarity.hpp"

namespace lkb::vindex {

PqCodebooks::PqCodebooks(std::size_t dim, std::size_t m, unsigned bits, std::uint64_t seed,
                         std::vector<float> codewords)
    : dim_(dim), m_(m), bits_(bits), seed_(seed), codewords_(std::move(codewords)) {
  if (m_ == 0 || dim_ == 0 || dim_ % m_ != 0) {
    throw Error(ErrorKind::invalid_argument, "PQ: dim " + std::to_string(dim_) +
                                                 " is not divisible by M=" + std::to_string(m_));
  }
  if (bits_ < 1 || bits_ > kMaxBits) {
    throw Error(ErrorKind::invalid_argument, "PQ: bits must be in [1, 16]");
  }
  if (codewords_.size() != m_ * ksub() * subdim()) {
    throw Error(ErrorKind::dimension_mismatch, "PQ: codebook block has the wrong size");
  }
}

PqCode PqCodebooks::encode(std::span<const float> v) const {
  if (v.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "PQ encode: vector width " +
                                                   std::to_string(v.size()) + " != " +
                                                   std::to_string(dim_));
  }
  PqCode code(m_);
  const std::size_t ds = subdim();
  for (std::size_t s = 0; s < m_; ++s) {
    const auto slice = v.subspan(s * ds, ds);
    const auto book = std::span<const float>(codewords_).subspan(s * ksub() * ds, ksub() * ds);
    code[s] = static_cast<std::uint16_t>(nearest_centroid(book, ds, slice));
  }
  return code;
}

std::vector<float> PqCodebooks::decode(const PqCode& code) const {
  if (code.size() != m_) {
    throw Error(ErrorKind::dimension_mismatch, "PQ decode: code length " +
                                                   std::to_string(code.size()) + " != M=" +
                                                   std::to_string(m_));
  }
  std::vector<float> out;
  out.reserve(dim_);
  for (std::size_t s = 0; s < m_; ++s) {
    if (code[s] >= ksub()) {
      throw Error(ErrorKind::invalid_argument, "PQ decode: code " + std::to_string(code[s]) +
                                                   " out of range for ksub=" +
                                                   std::to_string(ksub()));
    }
    const auto w = codeword(s, code[s]);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

std::vector<double> PqCodebooks::inner_product_table(std::span<const float> query) const {
  if (query.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "PQ table: query width mismatch");
  }
  const std::size_t ds = subdim();
  std::vector<double> table(m_ * ksub());
  for (std::size_t s = 0; s < m_; ++s) {
    const auto slice = query.subspan(s * ds, ds);
    for (std::size_t c = 0; c < ksub(); ++c) {
      table[s * ksub() + c] = inner_product(slice, codeword(s, c));
    }
  }
  return table;
}

double PqCodebooks::table_score(std::span<const double> table, const PqCode& code) const noexcept {
  double acc = 0.0;
  for (std::size_t s = 0; s < m_; ++s) acc += table[s * ksub() + code[s]];
  return acc;
}

PqCodebooks train_pq(std::span<const float> data, std::size_t dim, std::size_t m, unsigned bits,
                     std::uint64_t seed, std::size_t max_iters) {
  if (m == 0 || dim == 0 || dim % m != 0) {
    throw Error(ErrorKind::invalid_argument, "train_pq: dim " + std::to_string(dim) +
                                                 " is not divisible by M=" + std::to_string(m));
  }
  if (bits < 1 || bits > PqCodebooks::kMaxBits) {
    throw Error(ErrorKind::invalid_argument, "train_pq: bits must be in [1, 16]");
  }
  if (data.empty() || data.size() % dim != 0) {
    throw Error(ErrorKind::invalid_argument, "train_pq: empty or ragged training data");
  }
  const std::size_t n = data.size() / dim;
  const std::size_t ds = dim / m;
  const std::size_t ksub = std::size_t{1} << bits;

  std::vector<float> codewords(m * ksub * ds);
  std::vector<float> slice(n * ds);
  bool duplicated = false;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const float* src = data.data() + i * dim + s * ds;
      std::copy(src, src + ds, slice.begin() + static_cast<std::ptrdiff_t>(i * ds));
    }
    const KMeansResult km = kmeans(slice, ds, ksub, max_iters, seed + s);
    duplicated = duplicated || km.duplicate_centroids;
    for (std::size_t c = 0; c < ksub; ++c) {
      const auto row = km.centroids.row(c);
      for (std::size_t j = 0; j < ds; ++j) {
        codewords[(s * ksub + c) * ds + j] = static_cast<float>(row[j]);
      }
    }
  }
  PqCodebooks books(dim, m, bits, seed, std::move(codewords));
  books.set_duplicated_codewords(duplicated);
  return books;
}

}  // namespace lkb::vindex
