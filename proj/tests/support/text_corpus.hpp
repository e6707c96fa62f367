// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace lkb::testing {

/// Deterministic UTF-8 text of at least `min_bytes` bytes: paragraphs,
/// line breaks, sentences, tabs, runs of spaces and multi-byte characters.
std::string mixed_separator_text(std::size_t min_bytes, std::uint64_t seed);

}  // namespace lkb::testing
