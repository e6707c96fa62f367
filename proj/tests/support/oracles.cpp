// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lkb/embed.hpp"
#include "lkb/rng.hpp"

namespace lkb::testing {

std::vector<RankedId> brute_force_top_k(const std::vector<float>& data, std::size_t dim,
                                        const std::vector<std::string>& ids,
                                        const float* query, std::size_t k) {
  std::vector<RankedId> all;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      s += static_cast<double>(data[i * dim + d]) * static_cast<double>(query[d]);
    }
    all.push_back({ids[i], s});
  }
  std::sort(all.begin(), all.end(), [](const RankedId& a, const RankedId& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

double oracle_cosine(const std::vector<double>& v, const std::vector<double>& w) {
  double dot = 0.0, vv = 0.0, ww = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += v[i] * w[i];
    vv += v[i] * v[i];
    ww += w[i] * w[i];
  }
  return dot / (std::sqrt(vv) * std::sqrt(ww));
}

Grid oracle_matmul(const Grid& a, const Grid& b) {
  const std::size_t n = a.size(), inner = b.size(), m = b.empty() ? 0 : b[0].size();
  Grid out(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < inner; ++t) s += a[i][t] * b[t][j];
      out[i][j] = s;
    }
  }
  return out;
}

Grid oracle_softmax(const Grid& m) {
  Grid out = m;
  for (auto& row : out) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : row) peak = std::max(peak, v);
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return out;
}

Grid oracle_self_attention(const Grid& x, const Grid& wq, const Grid& wk, const Grid& wv) {
  const Grid q = oracle_matmul(x, wq);
  const Grid k = oracle_matmul(x, wk);
  const Grid v = oracle_matmul(x, wv);
  const double d = static_cast<double>(wq[0].size());
  Grid scores(x.size(), std::vector<double>(x.size(), 0.0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < q[i].size(); ++t) s += q[i][t] * k[j][t];
      scores[i][j] = s / std::sqrt(d);
    }
  }
  return oracle_matmul(oracle_softmax(scores), v);
}

Grid oracle_multi_head(const Grid& x, const std::vector<OracleHead>& heads, const Grid& wo) {
  Grid concat(x.size());
  for (const auto& h : heads) {
    const Grid out = oracle_self_attention(x, h.wq, h.wk, h.wv);
    for (std::size_t r = 0; r < x.size(); ++r) {
      concat[r].insert(concat[r].end(), out[r].begin(), out[r].end());
    }
  }
  return oracle_matmul(concat, wo);
}

std::vector<double> oracle_embed(const std::string& text, std::size_t dim, std::uint32_t vocab,
                                 std::size_t heads, std::uint64_t seed) {
  SeededRng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  const auto draw = [&](std::size_t rows, std::size_t cols) {
    Grid g(rows, std::vector<double>(cols));
    for (auto& row : g) {
      for (double& v : row) v = rng.uniform(-bound, bound);
    }
    return g;
  };
  const std::size_t width = dim / heads;
  const Grid table = draw(vocab, dim);
  std::vector<OracleHead> hs;
  for (std::size_t h = 0; h < heads; ++h) {
    OracleHead head;
    head.wq = draw(dim, width);
    head.wk = draw(dim, width);
    head.wv = draw(dim, width);
    hs.push_back(std::move(head));
  }
  const Grid wo = draw(dim, dim);

  const std::vector<std::uint32_t> tokens = embed::tokenize_hash(text, vocab);
  std::vector<double> out(dim, 0.0);
  if (tokens.empty()) {
    out[0] = 1.0;
    return out;
  }
  Grid x;
  for (std::uint32_t t : tokens) x.push_back(table[t]);
  const Grid enc = oracle_multi_head(x, hs, wo);
  for (const auto& row : enc) {
    for (std::size_t c = 0; c < dim; ++c) out[c] += row[c];
  }
  double sq = 0.0;
  for (double& v : out) {
    v /= static_cast<double>(enc.size());
    sq += v * v;
  }
  for (double& v : out) v /= std::sqrt(sq);
  return out;
}

std::vector<std::size_t> oracle_init_rows(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  for (std::size_t i = 0; i < std::min(k, n); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(std::min(k, n));
  return order;
}

LloydResult oracle_lloyd(const std::vector<float>& data, std::size_t dim,
                         std::vector<std::vector<double>> init, std::size_t max_iters) {
  const std::size_t n = data.size() / dim, k = init.size();
  LloydResult r;
  r.centroids = std::move(init);
  r.assignments.assign(n, 0);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool moved = iter == 0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double d = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
          const double diff = static_cast<double>(data[i * dim + t]) - r.centroids[c][t];
          d += diff * diff;
        }
        if (d < best) {
          best = d;
          arg = static_cast<std::uint32_t>(c);
        }
      }
      moved = moved || r.assignments[i] != arg;
      r.assignments[i] = arg;
      total += best;
    }
    r.objective.push_back(total);
    if (!moved) break;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < dim; ++t) sums[r.assignments[i]][t] += data[i * dim + t];
      counts[r.assignments[i]] += 1.0;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0.0) continue;
      for (std::size_t t = 0; t < dim; ++t) r.centroids[c][t] = sums[c][t] / counts[c];
    }
  }
  return r;
}

}  // namespace lkb::testing
