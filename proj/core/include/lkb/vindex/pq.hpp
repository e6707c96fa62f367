// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lkb::vindex {

using PqCode = std::vector<std::uint16_t>;

// M independent codebooks of 2^bits codewords over contiguous D/M slices.
class PqCodebooks {
 public:
  static constexpr unsigned kMaxBits = 16;

  PqCodebooks() = default;
  /// `codewords` is M × ksub × (dim/M), row-major. Validates shapes.
  PqCodebooks(std::size_t dim, std::size_t m, unsigned bits, std::uint64_t seed,
              std::vector<float> codewords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t subquantizers() const noexcept { return m_; }
  unsigned bits() const noexcept { return bits_; }
  std::size_t ksub() const noexcept { return std::size_t{1} << bits_; }
  std::size_t subdim() const noexcept { return m_ == 0 ? 0 : dim_ / m_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// Set by train_pq when ksub exceeded the number of distinct training rows.
  bool duplicated_codewords() const noexcept { return duplicated_; }
  void set_duplicated_codewords(bool v) noexcept { duplicated_ = v; }

  std::span<const float> codeword(std::size_t sub, std::size_t index) const {
    return {codewords_.data() + (sub * ksub() + index) * subdim(), subdim()};
  }
  std::span<const float> all_codewords() const noexcept { return codewords_; }

  /// Nearest codeword per slice (Euclidean, lowest index on ties).
  PqCode encode(std::span<const float> v) const;
  /// Concatenated codewords. Throws invalid_argument for out-of-range codes.
  std::vector<float> decode(const PqCode& code) const;

  /// M × ksub table of ⟨q_slice, codeword⟩.
  std::vector<double> inner_product_table(std::span<const float> query) const;
  /// Σ_m table[m][code_m].
  double table_score(std::span<const double> table, const PqCode& code) const noexcept;

 private:
  std::size_t dim_ = 0;
  std::size_t m_ = 0;
  unsigned bits_ = 0;
  std::uint64_t seed_ = 0;
  bool duplicated_ = false;
  std::vector<float> codewords_;
};

/// Runs kmeans(2^bits) on each slice; slice s uses seed + s. Throws
/// invalid_argument when dim % m != 0, bits is outside [1, 16] or the data
/// is empty.
PqCodebooks train_pq(std::span<const float> data, std::size_t dim, std::size_t m,
                     unsigned bits, std::uint64_t seed,
                     std::size_t max_iters = 25);

}  // namespace lkb::vindex
