// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

#include "lkb/service/config.hpp"

namespace lkb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one `lkb` invocation. Environment lookups go through `env` so tests
/// can pin them.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const service::EnvLookup& env = service::process_env);

}  // namespace lkb::cli
