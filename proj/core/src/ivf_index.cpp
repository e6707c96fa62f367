// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/ivf_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lkb/error.hpp"
#include "lkb/vindex/flat_index.hpp"
#include "lkb/vindex/kmeans.hpp"

namespace lkb::vindex {

std::size_t default_nlist(std::size_t n) noexcept {
  const auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  return std::clamp<std::size_t>(root, 1, 4096);
}

IvfIndex::IvfIndex(std::size_t dim, std::vector<float> centroids, std::uint64_t seed,
                   std::optional<PqCodebooks> codebooks)
    : dim_(dim), centroids_(std::move(centroids)), seed_(seed), codebooks_(std::move(codebooks)) {
  if (dim_ == 0 || centroids_.empty() || centroids_.size() % dim_ != 0) {
    throw Error(ErrorKind::invalid_argument, "IVF: centroid block must hold nlist >= 1 rows");
  }
  for (float c : centroids_) {
    if (!std::isfinite(c)) throw Error(ErrorKind::non_finite, "IVF: non-finite centroid");
  }
  if (codebooks_ && codebooks_->dim() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "IVF: codebook width differs from index width");
  }
  lists_.resize(centroids_.size() / dim_);
}

std::vector<std::size_t> IvfIndex::list_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(lists_.size());
  for (const auto& l : lists_) sizes.push_back(l.live_count);
  return sizes;
}

std::uint32_t IvfIndex::assign(std::span<const float> vector) const noexcept {
  return nearest_centroid(centroids_, dim_, vector);
}

void IvfIndex::add(std::string id, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "vector of width " + std::to_string(vector.size()) +
                                                   " added to IVF index of width " +
                                                   std::to_string(dim_));
  }
  if (where_.contains(id)) throw Error(ErrorKind::duplicate_id, "duplicate id '" + id + "'");
  check_unit_norm(vector);
  const std::uint32_t list = assign(vector);
  if (!codebooks_) {
    add_encoded(list, std::move(id), vector, {});
    return;
  }
  const auto c = centroid(list);
  std::vector<float> residual(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    residual[j] = static_cast<float>(static_cast<double>(vector[j]) - static_cast<double>(c[j]));
  }
  const PqCode code = codebooks_->encode(residual);
  add_encoded(list, std::move(id), {}, code);
}

void IvfIndex::add_encoded(std::size_t list, std::string id, std::span<const float> vector,
                           std::span<const std::uint16_t> code) {
  if (list >= lists_.size()) throw Error(ErrorKind::invalid_argument, "IVF: list out of range");
  if (where_.contains(id)) throw Error(ErrorKind::duplicate_id, "duplicate id '" + id + "'");
  PostingList& p = lists_[list];
  if (codebooks_) {
    if (code.size() != codebooks_->subquantizers()) {
      throw Error(ErrorKind::dimension_mismatch, "IVF-PQ: code length mismatch");
    }
    for (std::uint16_t c : code) {
      if (c >= codebooks_->ksub()) throw Error(ErrorKind::invalid_argument, "IVF-PQ: code out of range");
    }
    p.codes.insert(p.codes.end(), code.begin(), code.end());
  } else {
    if (vector.size() != dim_) throw Error(ErrorKind::dimension_mismatch, "IVF: vector width mismatch");
    p.vectors.insert(p.vectors.end(), vector.begin(), vector.end());
  }
  where_.emplace(id, std::pair{static_cast<std::uint32_t>(list),
                               static_cast<std::uint32_t>(p.ids.size())});
  p.ids.push_back(std::move(id));
  p.live.push_back(1);
  ++p.live_count;
  ++live_total_;
}

void IvfIndex::remove(std::string_view id) {
  const auto it = where_.find(std::string(id));
  if (it == where_.end()) throw Error(ErrorKind::not_found, "unknown id '" + std::string(id) + "'");
  PostingList& p = lists_[it->second.first];
  p.live[it->second.second] = 0;
  --p.live_count;
  --live_total_;
  where_.erase(it);
}

bool IvfIndex::contains(std::string_view id) const { return where_.contains(std::string(id)); }

void IvfIndex::compact() {
  const std::size_t m = codebooks_ ? codebooks_->subquantizers() : 0;
  where_.clear();
  for (std::uint32_t l = 0; l < lists_.size(); ++l) {
    PostingList& p = lists_[l];
    PostingList kept;
    for (std::size_t i = 0; i < p.ids.size(); ++i) {
      if (!p.live[i]) continue;
      if (codebooks_) {
        kept.codes.insert(kept.codes.end(), p.codes.begin() + static_cast<std::ptrdiff_t>(i * m),
                          p.codes.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
      } else {
        kept.vectors.insert(kept.vectors.end(),
                            p.vectors.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                            p.vectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
      }
      where_.emplace(p.ids[i], std::pair{l, static_cast<std::uint32_t>(kept.ids.size())});
      kept.ids.push_back(std::move(p.ids[i]));
      kept.live.push_back(1);
      ++kept.live_count;
    }
    p = std::move(kept);
  }
}

std::vector<std::uint32_t> IvfIndex::probe_order(std::span<const float> query,
                                                 std::size_t nprobe) const {
  std::vector<std::pair<double, std::uint32_t>> dist;
  dist.reserve(lists_.size());
  for (std::uint32_t l = 0; l < lists_.size(); ++l) {
    dist.emplace_back(squared_l2(query, centroid(l)), l);
  }
  const std::size_t keep = std::min(nprobe, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(keep), dist.end());
  std::vector<std::uint32_t> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(dist[i].second);
  return out;
}

std::vector<SearchHit> IvfIndex::search(std::span<const float> query, std::size_t k,
                                        std::size_t nprobe) const {
  if (query.size() != dim_) {
    throw Error(ErrorKind::dimension_mismatch, "query of width " + std::to_string(query.size()) +
                                                   " against IVF index of width " +
                                                   std::to_string(dim_));
  }
  if (k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (nprobe < 1 || nprobe > lists_.size()) {
    throw Error(ErrorKind::invalid_argument, "nprobe " + std::to_string(nprobe) +
                                                 " outside [1, " + std::to_string(lists_.size()) +
                                                 "]");
  }
  std::vector<double> table;
  if (codebooks_) table = codebooks_->inner_product_table(query);
  const std::size_t m = codebooks_ ? codebooks_->subquantizers() : 0;

  std::vector<Candidate> candidates;
  for (std::uint32_t l : probe_order(query, nprobe)) {
    const PostingList& p = lists_[l];
    if (codebooks_) {
      const double base = inner_product(query, centroid(l));
      PqCode code(m);
      for (std::size_t i = 0; i < p.ids.size(); ++i) {
        if (!p.live[i]) continue;
        std::copy_n(p.codes.begin() + static_cast<std::ptrdiff_t>(i * m), m, code.begin());
        candidates.push_back({base + codebooks_->table_score(table, code), &p.ids[i]});
      }
    } else {
      for (std::size_t i = 0; i < p.ids.size(); ++i) {
        if (!p.live[i]) continue;
        const std::span<const float> row(p.vectors.data() + i * dim_, dim_);
        candidates.push_back({inner_product(query, row), &p.ids[i]});
      }
    }
  }
  return select_top_k(std::move(candidates), k);
}

std::vector<double> IvfIndex::reconstruct(std::string_view id) const {
  if (!codebooks_) throw Error(ErrorKind::invalid_argument, "reconstruct needs a PQ index");
  const auto it = where_.find(std::string(id));
  if (it == where_.end()) throw Error(ErrorKind::not_found, "unknown id '" + std::string(id) + "'");
  const PostingList& p = lists_[it->second.first];
  const std::size_t m = codebooks_->subquantizers();
  const PqCode code(p.codes.begin() + static_cast<std::ptrdiff_t>(it->second.second * m),
                    p.codes.begin() + static_cast<std::ptrdiff_t>((it->second.second + 1) * m));
  const std::vector<float> residual = codebooks_->decode(code);
  const auto c = centroid(it->second.first);
  std::vector<double> out(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    out[j] = static_cast<double>(c[j]) + static_cast<double>(residual[j]);
  }
  return out;
}

double IvfIndex::adc_score(std::span<const float> query, std::string_view id) const {
  if (!codebooks_) throw Error(ErrorKind::invalid_argument, "adc_score needs a PQ index");
  const auto it = where_.find(std::string(id));
  if (it == where_.end()) throw Error(ErrorKind::not_found, "unknown id '" + std::string(id) + "'");
  const PostingList& p = lists_[it->second.first];
  const std::size_t m = codebooks_->subquantizers();
  const PqCode code(p.codes.begin() + static_cast<std::ptrdiff_t>(it->second.second * m),
                    p.codes.begin() + static_cast<std::ptrdiff_t>((it->second.second + 1) * m));
  const std::vector<double> table = codebooks_->inner_product_table(query);
  return inner_product(query, centroid(it->second.first)) + codebooks_->table_score(table, code);
}

namespace {

std::vector<float> train_centroids(std::size_t dim, std::span<const float> vectors,
                                   std::span<const std::string> ids, const IvfBuildParams& params,
                                   std::size_t& nlist_out) {
  const std::size_t n = ids.size();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "IVF: cannot train on an empty set");
  if (dim == 0 || vectors.size() != n * dim) {
    throw Error(ErrorKind::dimension_mismatch, "IVF: vectors do not match ids x dim");
  }
  const std::size_t nlist = params.nlist == 0 ? default_nlist(n) : params.nlist;
  if (nlist > n) {
    throw Error(ErrorKind::invalid_argument, "IVF: nlist " + std::to_string(nlist) +
                                                 " exceeds the number of vectors " +
                                                 std::to_string(n));
  }
  const KMeansResult km = kmeans(vectors, dim, nlist, params.max_iters, params.seed);
  std::vector<float> centroids(km.centroids.data().begin(), km.centroids.data().end());
  nlist_out = nlist;
  return centroids;
}

}  // namespace

IvfIndex build_ivf(std::size_t dim, std::span<const float> vectors,
                   std::span<const std::string> ids, const IvfBuildParams& params) {
  std::size_t nlist = 0;
  IvfIndex index(dim, train_centroids(dim, vectors, ids, params, nlist), params.seed);
  for (std::size_t i = 0; i < ids.size(); ++i) index.add(ids[i], vectors.subspan(i * dim, dim));
  index.set_trained_on(ids.size());
  return index;
}

IvfIndex build_ivfpq(std::size_t dim, std::span<const float> vectors,
                     std::span<const std::string> ids, const IvfBuildParams& params,
                     const PqParams& pq) {
  std::size_t nlist = 0;
  std::vector<float> centroids = train_centroids(dim, vectors, ids, params, nlist);

  const std::size_t n = ids.size();
  std::vector<float> residuals(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = vectors.subspan(i * dim, dim);
    const std::uint32_t l = nearest_centroid(centroids, dim, x);
    for (std::size_t j = 0; j < dim; ++j) {
      residuals[i * dim + j] = static_cast<float>(static_cast<double>(x[j]) -
                                                  static_cast<double>(centroids[l * dim + j]));
    }
  }
  PqCodebooks books = train_pq(residuals, dim, pq.m, pq.bits, params.seed, params.max_iters);

  IvfIndex index(dim, std::move(centroids), params.seed, std::move(books));
  for (std::size_t i = 0; i < n; ++i) index.add(ids[i], vectors.subspan(i * dim, dim));
  index.set_trained_on(n);
  return index;
}

}  // namespace lkb::vindex
