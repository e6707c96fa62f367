// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lkb/vindex/flat_index.hpp"
#include "lkb/vindex/ivf_index.hpp"

namespace lkb::vindex {

enum class IndexKind : std::uint8_t { flat = 0, ivf = 1, ivfpq = 2 };

std::string_view to_string(IndexKind kind) noexcept;
IndexKind parse_index_kind(std::string_view name);

using AnyIndex = std::variant<FlatIndex, IvfIndex>;

IndexKind kind_of(const AnyIndex& index) noexcept;

inline constexpr char kIndexMagic[8] = {'L', 'K', 'B', 'I', 'D', 'X', '1', '\0'};
inline constexpr std::uint32_t kIndexFormatVersion = 1;

// Layout, all integers little-endian:
//
//   magic "LKBIDX1\0" | u32 version | u8 kind | u32 dim | u64 count
//   parameters   ivf:   u32 nlist, u64 seed
//                ivfpq: u32 nlist, u32 M, u32 bits, u64 seed
//   centroids    ivf/ivfpq: nlist × dim f32
//   codebooks    ivfpq: M × 2^bits × (dim/M) f32
//   postings     flat: one list; ivf/ivfpq: nlist lists. Each list is a u32
//                length then per entry: u16 id length, id bytes, payload
//                (dim f32 for flat/ivf, M codes of ceil(bits/8) bytes for
//                ivfpq)
//   u32 CRC-32 of every preceding byte
//
// Tombstoned IVF entries are not written.
std::vector<std::uint8_t> save_index(const FlatIndex& index);
std::vector<std::uint8_t> save_index(const IvfIndex& index);
std::vector<std::uint8_t> save_index(const AnyIndex& index);

/// Throws bad_magic, unsupported_version, truncated or checksum_mismatch.
AnyIndex load_index(std::span<const std::uint8_t> bytes);

void write_index_file(const std::filesystem::path& path, const AnyIndex& index);
AnyIndex read_index_file(const std::filesystem::path& path);

}  // namespace lkb::vindex
