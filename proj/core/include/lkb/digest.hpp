// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace lkb {

/// Lowercase hex SHA-256 of `data` (64 characters).
std::string sha256_hex(std::string_view data);

/// Standard CRC-32 (IEEE 802.3, reflected, init/xorout 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> data);

}  // namespace lkb
