// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "httplib.h"

namespace lkb::detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // always starts with '/'
};

SplitUrl split_url(std::string_view url);

void apply_timeouts(httplib::Client& client, int timeout_ms);

/// True when the failure looks like the configured deadline elapsing.
bool is_timeout(httplib::Error err, std::chrono::steady_clock::duration elapsed,
                int timeout_ms) noexcept;

}  // namespace lkb::detail
