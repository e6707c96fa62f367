// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "lkb/embed.hpp"
#include "lkb/error.hpp"

namespace lkb::embed {

Matrix softmax_rows(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto in = m.row(r);
    if (in.empty()) continue;
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    auto dst = out.row(r);
    for (std::size_t c = 0; c < in.size(); ++c) {
      dst[c] = std::exp(in[c] - peak);
      total += dst[c];
    }
    for (double& v : dst) v /= total;
  }
  return out;
}

Matrix self_attention(const Matrix& x, const Matrix& wq, const Matrix& wk, const Matrix& wv) {
  if (wq.cols() == 0) {
    throw Error(ErrorKind::dimension_mismatch, "self_attention: head width must be >= 1");
  }
  if (wq.rows() != wk.rows() || wq.rows() != wv.rows() || wq.cols() != wk.cols()) {
    throw Error(ErrorKind::dimension_mismatch,
                "self_attention: W^Q, W^K, W^V shapes disagree (" + std::to_string(wq.rows()) +
                    "x" + std::to_string(wq.cols()) + ", " + std::to_string(wk.rows()) + "x" +
                    std::to_string(wk.cols()) + ", " + std::to_string(wv.rows()) + "x" +
                    std::to_string(wv.cols()) + ")");
  }
  const Matrix q = matmul(x, wq, "self_attention X*W^Q");
  const Matrix k = matmul(x, wk, "self_attention X*W^K");
  const Matrix v = matmul(x, wv, "self_attention X*W^V");

  Matrix scores = matmul_transposed(q, k, "self_attention Q*K^T");
  const double scale = 1.0 / std::sqrt(static_cast<double>(wq.cols()));
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    for (double& s : scores.row(i)) s *= scale;
  }
  return matmul(softmax_rows(scores), v, "self_attention weights*V");
}

Matrix multi_head_attention(const Matrix& x, std::span<const HeadWeights> heads,
                            const Matrix& output_projection) {
  if (heads.empty()) throw Error(ErrorKind::dimension_mismatch, "multi_head_attention: no heads");
  std::size_t width = 0;
  std::vector<Matrix> outputs;
  outputs.reserve(heads.size());
  for (const HeadWeights& h : heads) {
    outputs.push_back(self_attention(x, h.query, h.key, h.value));
    width += outputs.back().cols();
  }
  Matrix concat(x.rows(), width);
  std::size_t offset = 0;
  for (const Matrix& head : outputs) {
    for (std::size_t r = 0; r < head.rows(); ++r) {
      std::copy(head.row(r).begin(), head.row(r).end(), concat.row(r).begin() + offset);
    }
    offset += head.cols();
  }
  return matmul(concat, output_projection, "multi_head_attention Concat*W^H");
}

}  // namespace lkb::embed
