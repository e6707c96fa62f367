// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lkb {

enum class ErrorKind {
  invalid_argument,
  decode,
  empty_document,
  dimension_mismatch,
  non_finite,
  duplicate_id,
  not_found,
  empty_index,
  conflict,
  busy,
  bad_magic,
  unsupported_version,
  truncated,
  checksum_mismatch,
  transport,
  timeout,
  malformed_response,
  unavailable,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library is an lkb::Error carrying a kind that
// callers (HTTP handlers, the CLI) can dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lkb
