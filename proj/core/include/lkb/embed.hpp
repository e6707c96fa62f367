// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lkb/matrix.hpp"

namespace lkb::embed {

// Dense L2-normalised vector. Stored as f32 (the on-disk width of the index),
// arithmetic on it accumulates in double.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;

  /// Normalises `values`. Throws non_finite for NaN/inf entries and
  /// invalid_argument for an all-zero or empty input.
  static EmbeddingVector normalize(std::span<const double> values);
  static EmbeddingVector normalize(std::span<const float> values);

  /// Wraps values that are already unit-norm (checked within 1e-6).
  static EmbeddingVector from_unit(std::vector<float> values);

  /// e_{index} in `dim` dimensions.
  static EmbeddingVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const float> values() const noexcept { return values_; }
  float operator[](std::size_t i) const { return values_[i]; }

  double norm() const noexcept;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  explicit EmbeddingVector(std::vector<float> v) : values_(std::move(v)) {}
  std::vector<float> values_;
};

inline constexpr double kUnitNormTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Hash tokenizer

/// 64-bit FNV-1a (offset 0xcbf29ce484222325, prime 0x100000001b3).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// ASCII-lowercases, splits on runs of non-alphanumeric bytes (bytes >= 0x80
/// count as alphanumeric so non-Latin scripts survive), and maps each token
/// to fnv1a64(token) % vocab.
std::vector<std::uint32_t> tokenize_hash(std::string_view text,
                                         std::uint32_t vocab);

// ---------------------------------------------------------------------------
// Attention

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& m);

/// Softmax((X·Wq)(X·Wk)ᵀ / √d)·(X·Wv), d = Wq.cols().
Matrix self_attention(const Matrix& x, const Matrix& wq, const Matrix& wk,
                      const Matrix& wv);

struct HeadWeights {
  Matrix query;  // D × d
  Matrix key;    // D × d
  Matrix value;  // D × d
};

/// Concat(head_1..head_H) · W_out, each head a self_attention call.
Matrix multi_head_attention(const Matrix& x, std::span<const HeadWeights> heads,
                            const Matrix& output_projection);

// ---------------------------------------------------------------------------
// Reference embedder

// Seeded random single-layer multi-head attention encoder. Immutable after
// construction and safe to share between threads.
//
// Weight draw order from SeededRng(seed), every entry uniform in
// [-1/sqrt(D), 1/sqrt(D)], each matrix row-major:
//   token table (V × D), then for h = 0..H-1: W^Q_h, W^K_h, W^V_h (D × D/H),
//   then the output projection W^H (D × D).
class ReferenceEmbedderParams {
 public:
  static constexpr std::size_t kDefaultDim = 64;
  static constexpr std::uint32_t kDefaultVocab = 4096;
  static constexpr std::size_t kDefaultHeads = 4;
  static constexpr std::uint64_t kDefaultSeed = 42;

  static ReferenceEmbedderParams generate(std::size_t dim = kDefaultDim,
                                          std::uint32_t vocab = kDefaultVocab,
                                          std::size_t heads = kDefaultHeads,
                                          std::uint64_t seed = kDefaultSeed);

  /// Explicit weights; validates every shape.
  ReferenceEmbedderParams(Matrix token_table, std::vector<HeadWeights> heads,
                          Matrix output_projection, std::uint64_t seed);

  std::size_t dim() const noexcept { return token_table_.cols(); }
  std::uint32_t vocab() const noexcept {
    return static_cast<std::uint32_t>(token_table_.rows());
  }
  std::size_t head_count() const noexcept { return heads_.size(); }
  std::size_t head_width() const noexcept { return dim() / head_count(); }
  std::uint64_t seed() const noexcept { return seed_; }

  const Matrix& token_table() const noexcept { return token_table_; }
  std::span<const HeadWeights> heads() const noexcept { return heads_; }
  const Matrix& output_projection() const noexcept { return output_; }

 private:
  Matrix token_table_;
  std::vector<HeadWeights> heads_;
  Matrix output_;
  std::uint64_t seed_ = 0;
};

/// tokens -> token-table rows -> one MHA pass -> mean pool -> L2 normalise.
/// Text without tokens maps to e_0.
EmbeddingVector embed_reference(std::string_view text,
                                const ReferenceEmbedderParams& params);

// ---------------------------------------------------------------------------
// Embedder interface

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::size_t dim() const noexcept = 0;
  virtual std::string model_id() const = 0;
};

class ReferenceEmbedder final : public Embedder {
 public:
  explicit ReferenceEmbedder(ReferenceEmbedderParams params)
      : params_(std::make_shared<const ReferenceEmbedderParams>(std::move(params))) {}

  EmbeddingVector embed(std::string_view text) const override {
    return embed_reference(text, *params_);
  }
  std::size_t dim() const noexcept override { return params_->dim(); }
  std::string model_id() const override;

  const ReferenceEmbedderParams& params() const noexcept { return *params_; }

 private:
  std::shared_ptr<const ReferenceEmbedderParams> params_;
};

struct RemoteEmbedderConfig {
  /// Full endpoint URL, e.g. "http://127.0.0.1:9000/embed".
  std::string url;
  std::size_t dim = ReferenceEmbedderParams::kDefaultDim;
  int timeout_ms = 5000;
};

/// POST {"input": text} -> {"embedding": [...]}; normalises and validates
/// the width. Throws transport, timeout, malformed_response,
/// dimension_mismatch or non_finite.
EmbeddingVector embed_remote(std::string_view text,
                             const RemoteEmbedderConfig& cfg);

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteEmbedderConfig cfg) : cfg_(std::move(cfg)) {}

  EmbeddingVector embed(std::string_view text) const override {
    return embed_remote(text, cfg_);
  }
  std::size_t dim() const noexcept override { return cfg_.dim; }
  std::string model_id() const override { return "remote:" + cfg_.url; }

 private:
  RemoteEmbedderConfig cfg_;
};

}  // namespace lkb::embed
