// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lkb/error.hpp"
#include "lkb/rng.hpp"
#include "lkb/vindex/similarity.hpp"
#include "oracles.hpp"

namespace lkb::vindex {
namespace {

std::vector<float> random_vector(SeededRng& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (float& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return v;
}

std::vector<double> widen(const std::vector<float>& v) { return {v.begin(), v.end()}; }

TEST(Cosine, HandComputedValue) {
  const std::vector<float> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_NEAR(cosine(a, b), 32.0 / std::sqrt(1078.0), 1e-15);
}

TEST(Cosine, OrthogonalAndOpposite) {
  const std::vector<float> x{1, 0}, y{0, 2}, z{-3, 0};
  EXPECT_EQ(cosine(x, y), 0.0);
  EXPECT_NEAR(cosine(x, z), -1.0, 1e-15);
}

TEST(Cosine, RejectsZeroAndRaggedInput) {
  const std::vector<float> zero{0, 0, 0}, a{1, 2, 3}, b{1, 2};
  try {
    cosine(zero, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
  try {
    cosine(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
}

TEST(Cosine, TenThousandPairsAgreeWithOracle) {
  SeededRng rng(500);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t dim = 1 + rng.below(128);
    const auto v = random_vector(rng, dim), w = random_vector(rng, dim);
    const double c = cosine(v, w);
    ASSERT_NEAR(c, lkb::testing::oracle_cosine(widen(v), widen(w)), 1e-9);
    ASSERT_NEAR(c, cosine(w, v), 1e-9);
    ASSERT_NEAR(cosine(v, v), 1.0, 1e-9);
    ASSERT_LE(std::abs(c), 1.0 + 1e-12);
  }
}

TEST(Cosine, EmbeddingOverloadIsInnerProductOfUnitVectors) {
  const std::vector<double> a{1, 2, 2}, b{2, 1, 2};
  const auto ea = embed::EmbeddingVector::normalize(std::span<const double>(a));
  const auto eb = embed::EmbeddingVector::normalize(std::span<const double>(b));
  EXPECT_NEAR(cosine(ea, eb), 8.0 / 9.0, 1e-7);
  EXPECT_NEAR(inner_product(ea.values(), eb.values()), cosine(ea, eb), 1e-7);
}

TEST(SquaredL2, MatchesDefinition) {
  const std::vector<float> a{1, 2, 3}, b{4, 6, 3};
  const std::vector<double> bd{4, 6, 3};
  EXPECT_EQ(squared_l2(a, b), 25.0);
  EXPECT_EQ(squared_l2(a, bd), 25.0);
  EXPECT_EQ(inner_product(a, b), 25.0);
}

TEST(SelectTopK, ScoreDescendingThenIdAscending) {
  const std::string a = "a", b = "b", c = "c", d = "d";
  const auto hits = select_top_k({{0.5, &c}, {0.9, &d}, {0.5, &a}, {0.1, &b}}, 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0], (SearchHit{"d", 0.9}));
  EXPECT_EQ(hits[1], (SearchHit{"a", 0.5}));
  EXPECT_EQ(hits[2], (SearchHit{"c", 0.5}));
  EXPECT_EQ(select_top_k({{0.5, &c}}, 10).size(), 1u);
}

}  // namespace
}  // namespace lkb::vindex
