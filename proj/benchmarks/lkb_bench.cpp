// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "lkb/embed.hpp"
#include "lkb/rng.hpp"
#include "lkb/vindex.hpp"

namespace {

using namespace lkb;

struct Dataset {
  std::size_t dim = 64;
  std::vector<float> data;
  std::vector<std::string> ids;
};

Dataset unit_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  SeededRng rng(seed);
  Dataset d;
  d.dim = dim;
  d.data.resize(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = rng.normal();
      d.data[i * dim + j] = static_cast<float>(v);
      norm += v * v;
    }
    for (std::size_t j = 0; j < dim; ++j) d.data[i * dim + j] /= static_cast<float>(std::sqrt(norm));
    d.ids.push_back("v" + std::to_string(i));
  }
  return d;
}

const Dataset& base() {
  static const Dataset d = unit_vectors(10000, 64, 1);
  return d;
}

const Dataset& queries() {
  static const Dataset d = unit_vectors(64, 64, 2);
  return d;
}

std::span<const float> query(std::size_t i) {
  const Dataset& q = queries();
  return {q.data.data() + (i % q.ids.size()) * q.dim, q.dim};
}

void BM_FlatSearch(benchmark::State& state) {
  const vindex::FlatIndex index = vindex::build_flat(64, base().data, base().ids);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(index.search(query(i++), 10));
}
BENCHMARK(BM_FlatSearch);

void BM_IvfSearch(benchmark::State& state) {
  vindex::IvfBuildParams p;
  p.nlist = 100;
  static const vindex::IvfIndex index = vindex::build_ivf(64, base().data, base().ids, p);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(query(i++), 10, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_IvfSearch)->Arg(1)->Arg(10)->Arg(100);

void BM_IvfPqSearch(benchmark::State& state) {
  vindex::IvfBuildParams p;
  p.nlist = 100;
  static const vindex::IvfIndex index = vindex::build_ivfpq(64, base().data, base().ids, p, {8, 8});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(query(i++), 10, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_IvfPqSearch)->Arg(1)->Arg(10)->Arg(100);

void BM_KMeans(benchmark::State& state) {
  const Dataset d = unit_vectors(static_cast<std::size_t>(state.range(0)), 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(vindex::kmeans(d.data, 64, 32, 10, 7));
}
BENCHMARK(BM_KMeans)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ReferenceEmbed(benchmark::State& state) {
  const embed::ReferenceEmbedder embedder(embed::ReferenceEmbedderParams::generate());
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "bearing" + std::to_string(i % 50) + " ";
  for (auto _ : state) benchmark::DoNotOptimize(embedder.embed(text));
}
BENCHMARK(BM_ReferenceEmbed)->Arg(8)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
