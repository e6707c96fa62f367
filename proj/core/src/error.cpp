// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/error.hpp"

namespace lkb {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::decode: return "decode_error";
    case ErrorKind::empty_document: return "empty_document";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::duplicate_id: return "duplicate_id";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::empty_index: return "empty_index";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::busy: return "busy";
    case ErrorKind::bad_magic: return "bad_magic";
    case ErrorKind::unsupported_version: return "unsupported_version";
    case ErrorKind::truncated: return "truncated";
    case ErrorKind::checksum_mismatch: return "checksum_mismatch";
    case ErrorKind::transport: return "transport_error";
    case ErrorKind::timeout: return "timeout";
    case ErrorKind::malformed_response: return "malformed_response";
    case ErrorKind::unavailable: return "unavailable";
    case ErrorKind::io: return "io_error";
  }
  return "unknown";
}

}  // namespace lkb
