// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace lkb {

// Portable seeded random source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// conversions below are spelled out here and are the only ones used for
// anything that ends up in a golden value:
//
//   uniform01()  = (next_u64() >> 11) * 2^-53           in [0, 1)
//   uniform(a,b) = a + (b - a) * uniform01()
//   below(n)     = next_u64() % n
//   normal()     = Box-Muller on two uniform01() draws (cosine branch)
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace lkb
