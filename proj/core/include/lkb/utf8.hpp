// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lkb::utf8 {

/// Byte offset of the first ill-formed sequence, or nullopt if `bytes` is
/// well-formed UTF-8 (no overlongs, no surrogates, nothing above U+10FFFF).
std::optional<std::size_t> find_invalid(std::string_view bytes) noexcept;

/// Decodes well-formed UTF-8 into scalar values. Behaviour is unspecified for
/// ill-formed input; validate first.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view scalars);

std::size_t length(std::string_view bytes) noexcept;

/// Unicode White_Space property.
bool is_space(char32_t c) noexcept;

// Scalar-value position to byte offset map for slicing UTF-8 text by character span.
class OffsetTable {
 public:
  explicit OffsetTable(std::string_view text);

  /// Number of scalar values.
  std::size_t size() const noexcept { return offsets_.size() - 1; }

  /// Byte offset of character `index`; `index == size()` yields the length.
  std::size_t byte_offset(std::size_t index) const { return offsets_.at(index); }

  std::string_view slice(std::string_view text, std::size_t begin,
                         std::size_t end) const;

 private:
  std::vector<std::size_t> offsets_;
};

}  // namespace lkb::utf8
