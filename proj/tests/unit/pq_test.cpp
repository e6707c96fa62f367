// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "datasets.hpp"
#include "lkb/error.hpp"
#include "lkb/rng.hpp"
#include "lkb/vindex/pq.hpp"
#include "lkb/vindex/similarity.hpp"
#include "oracles.hpp"

namespace lkb::vindex {
namespace {

using lkb::testing::VectorSet;

std::vector<float> slice_of(const VectorSet& set, std::size_t begin, std::size_t width) {
  std::vector<float> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.insert(out.end(), set.row(i) + begin, set.row(i) + begin + width);
  }
  return out;
}

TEST(TrainPq, EachSliceIsAnIndependentLloydRun) {
  const VectorSet set = lkb::testing::random_unit_vectors(1000, 16, 31);
  const PqCodebooks books = train_pq(set.data, 16, 4, 4, 100, 25);
  ASSERT_EQ(books.subquantizers(), 4u);
  ASSERT_EQ(books.ksub(), 16u);
  ASSERT_EQ(books.subdim(), 4u);
  for (std::size_t s = 0; s < 4; ++s) {
    const std::vector<float> slice = slice_of(set, s * 4, 4);
    std::vector<std::vector<double>> init;
    for (std::size_t r : lkb::testing::oracle_init_rows(1000, 16, 100 + s)) {
      init.emplace_back(slice.begin() + r * 4, slice.begin() + r * 4 + 4);
    }
    const auto want = lkb::testing::oracle_lloyd(slice, 4, init, 25);
    for (std::size_t c = 0; c < 16; ++c) {
      const auto got = books.codeword(s, c);
      for (std::size_t j = 0; j < 4; ++j) {
        ASSERT_NEAR(got[j], want.centroids[c][j], 1e-6) << "slice " << s << " codeword " << c;
      }
    }
  }
}

TEST(PqCodebooks, EncodePicksNearestCodewordPerSlice) {
  const VectorSet set = lkb::testing::random_unit_vectors(400, 16, 32);
  const PqCodebooks books = train_pq(set.data, 16, 4, 4, 1);
  for (std::size_t i = 0; i < 50; ++i) {
    const std::span<const float> v(set.row(i), 16);
    const PqCode code = books.encode(v);
    for (std::size_t s = 0; s < 4; ++s) {
      const double chosen = squared_l2(v.subspan(s * 4, 4), books.codeword(s, code[s]));
      for (std::size_t c = 0; c < books.ksub(); ++c) {
        ASSERT_LE(chosen, squared_l2(v.subspan(s * 4, 4), books.codeword(s, c)));
      }
    }
  }
}

TEST(PqCodebooks, DecodeThenEncodeIsFixedPoint) {
  const VectorSet set = lkb::testing::random_unit_vectors(300, 32, 33);
  const PqCodebooks books = train_pq(set.data, 32, 8, 5, 2);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const PqCode code = books.encode(std::span<const float>(set.row(i), 32));
    const std::vector<float> approx = books.decode(code);
    ASSERT_EQ(books.encode(approx), code);
    ASSERT_EQ(books.decode(books.encode(approx)), approx);
  }
}

TEST(PqCodebooks, AdcTableSumEqualsDotWithDecodedVector) {
  const VectorSet set = lkb::testing::random_unit_vectors(500, 64, 34);
  const VectorSet queries = lkb::testing::random_unit_vectors(20, 64, 35);
  const PqCodebooks books = train_pq(set.data, 64, 8, 6, 3);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const std::span<const float> query(queries.row(q), 64);
    const std::vector<double> table = books.inner_product_table(query);
    ASSERT_EQ(table.size(), 8u * 64u);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const PqCode code = books.encode(std::span<const float>(set.row(i), 64));
      const std::vector<float> decoded = books.decode(code);
      ASSERT_NEAR(books.table_score(table, code), inner_product(query, decoded), 1e-9);
    }
  }
}

TEST(PqCodebooks, EnoughCodewordsReproduceRowsExactly) {
  // 200 distinct rows and 256 codewords per slice: every slice gets its own
  // codeword, so reconstruction is exact.
  const VectorSet set = lkb::testing::random_unit_vectors(200, 16, 36);
  const PqCodebooks books = train_pq(set.data, 16, 4, 8, 4);
  EXPECT_TRUE(books.duplicated_codewords());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::span<const float> v(set.row(i), 16);
    const std::vector<float> back = books.decode(books.encode(v));
    ASSERT_TRUE(std::equal(back.begin(), back.end(), v.begin())) << "row " << i;
  }
}

TEST(PqCodebooks, RejectsBadShapes) {
  const VectorSet set = lkb::testing::random_unit_vectors(50, 12, 37);
  EXPECT_THROW(train_pq(set.data, 12, 5, 4, 0), Error);
  EXPECT_THROW(train_pq(set.data, 12, 4, 0, 0), Error);
  EXPECT_THROW(train_pq(set.data, 12, 4, 17, 0), Error);
  EXPECT_THROW(train_pq({}, 12, 4, 4, 0), Error);
  const PqCodebooks books = train_pq(set.data, 12, 4, 2, 0);
  EXPECT_THROW(books.decode(PqCode{0, 1, 2, 4}), Error);
  EXPECT_THROW(books.decode(PqCode{0, 1}), Error);
  const std::vector<float> narrow(8, 0.5f);
  EXPECT_THROW(books.encode(narrow), Error);
  EXPECT_THROW(PqCodebooks(12, 4, 2, 0, std::vector<float>(10)), Error);
}

TEST(TrainPq, Deterministic) {
  const VectorSet set = lkb::testing::random_unit_vectors(300, 16, 38);
  const PqCodebooks a = train_pq(set.data, 16, 4, 4, 9), b = train_pq(set.data, 16, 4, 4, 9);
  EXPECT_TRUE(std::equal(a.all_codewords().begin(), a.all_codewords().end(),
                         b.all_codewords().begin(), b.all_codewords().end()));
}

}  // namespace
}  // namespace lkb::vindex
