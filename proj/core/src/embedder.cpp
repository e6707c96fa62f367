// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "lkb/embed.hpp"
#include "lkb/error.hpp"
#include "lkb/rng.hpp"

namespace lkb::embed {

namespace {

std::vector<float> scaled(std::span<const double> v, double inv) {
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] * inv);
  return out;
}

double norm_of(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "embedding has a non-finite entry");
    acc += x * x;
  }
  return std::sqrt(acc);
}

Matrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double bound) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : m.row(r)) v = rng.uniform(-bound, bound);
  }
  return m;
}

}  // namespace

EmbeddingVector EmbeddingVector::normalize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::invalid_argument, "empty embedding");
  const double n = norm_of(values);
  if (n == 0.0) throw Error(ErrorKind::invalid_argument, "cannot normalise a zero vector");
  return EmbeddingVector(scaled(values, 1.0 / n));
}

EmbeddingVector EmbeddingVector::normalize(std::span<const float> values) {
  const std::vector<double> wide(values.begin(), values.end());
  return normalize(std::span<const double>(wide));
}

EmbeddingVector EmbeddingVector::from_unit(std::vector<float> values) {
  double acc = 0.0;
  for (float x : values) {
    if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "embedding has a non-finite entry");
    acc += static_cast<double>(x) * x;
  }
  if (std::abs(std::sqrt(acc) - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorKind::invalid_argument, "vector is not unit-norm");
  }
  return EmbeddingVector(std::move(values));
}

EmbeddingVector EmbeddingVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorKind::invalid_argument, "basis index out of range");
  std::vector<float> v(dim, 0.0f);
  v[index] = 1.0f;
  return EmbeddingVector(std::move(v));
}

double EmbeddingVector::norm() const noexcept {
  double acc = 0.0;
  for (float x : values_) acc += static_cast<double>(x) * x;
  return std::sqrt(acc);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint32_t> tokenize_hash(std::string_view text, std::uint32_t vocab) {
  if (vocab == 0) throw Error(ErrorKind::invalid_argument, "vocab must be >= 1");
  std::vector<std::uint32_t> ids;
  std::string token;
  const auto emit = [&] {
    if (token.empty()) return;
    ids.push_back(static_cast<std::uint32_t>(fnv1a64(token) % vocab));
    token.clear();
  };
  for (unsigned char c : text) {
    const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                       (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (!alnum) {
      emit();
      continue;
    }
    token.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  }
  emit();
  return ids;
}

ReferenceEmbedderParams ReferenceEmbedderParams::generate(std::size_t dim, std::uint32_t vocab,
                                                          std::size_t heads,
                                                          std::uint64_t seed) {
  if (dim == 0 || vocab == 0 || heads == 0 || dim % heads != 0) {
    throw Error(ErrorKind::invalid_argument,
                "reference embedder needs dim, vocab, heads >= 1 and dim divisible by heads");
  }
  SeededRng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  const std::size_t width = dim / heads;
  Matrix table = random_matrix(rng, vocab, dim, bound);
  std::vector<HeadWeights> weights;
  weights.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    HeadWeights w;
    w.query = random_matrix(rng, dim, width, bound);
    w.key = random_matrix(rng, dim, width, bound);
    w.value = random_matrix(rng, dim, width, bound);
    weights.push_back(std::move(w));
  }
  Matrix output = random_matrix(rng, dim, dim, bound);
  return ReferenceEmbedderParams(std::move(table), std::move(weights), std::move(output), seed);
}

ReferenceEmbedderParams::ReferenceEmbedderParams(Matrix token_table,
                                                 std::vector<HeadWeights> heads,
                                                 Matrix output_projection, std::uint64_t seed)
    : token_table_(std::move(token_table)),
      heads_(std::move(heads)),
      output_(std::move(output_projection)),
      seed_(seed) {
  const std::size_t d = token_table_.cols();
  if (d == 0 || token_table_.rows() == 0 || heads_.empty() || d % heads_.size() != 0) {
    throw Error(ErrorKind::dimension_mismatch,
                "token table must be V x D with D divisible by the head count");
  }
  const std::size_t width = d / heads_.size();
  for (const HeadWeights& h : heads_) {
    for (const Matrix* w : {&h.query, &h.key, &h.value}) {
      if (w->rows() != d || w->cols() != width) {
        throw Error(ErrorKind::dimension_mismatch,
                    "head projection must be " + std::to_string(d) + "x" + std::to_string(width));
      }
    }
  }
  if (output_.rows() != d || output_.cols() != d) {
    throw Error(ErrorKind::dimension_mismatch, "output projection must be D x D");
  }
}

EmbeddingVector embed_reference(std::string_view text, const ReferenceEmbedderParams& params) {
  const std::size_t dim = params.dim();
  const std::vector<std::uint32_t> ids = tokenize_hash(text, params.vocab());
  if (ids.empty()) return EmbeddingVector::basis(dim, 0);

  Matrix x(ids.size(), dim);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const auto src = params.token_table().row(ids[r]);
    std::copy(src.begin(), src.end(), x.row(r).begin());
  }
  const Matrix encoded = multi_head_attention(x, params.heads(), params.output_projection());

  std::vector<double> pooled(dim, 0.0);
  for (std::size_t r = 0; r < encoded.rows(); ++r) {
    const auto row = encoded.row(r);
    for (std::size_t c = 0; c < dim; ++c) pooled[c] += row[c];
  }
  const double inv_rows = 1.0 / static_cast<double>(encoded.rows());
  for (double& v : pooled) v *= inv_rows;

  double sq = 0.0;
  for (double v : pooled) sq += v * v;
  if (sq == 0.0) return EmbeddingVector::basis(dim, 0);
  return EmbeddingVector::normalize(std::span<const double>(pooled));
}

std::string ReferenceEmbedder::model_id() const {
  return "reference-mha-d" + std::to_string(params_->dim()) + "-h" +
         std::to_string(params_->head_count()) + "-v" + std::to_string(params_->vocab()) +
         "-s" + std::to_string(params_->seed());
}

}  // namespace lkb::embed
