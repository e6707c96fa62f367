// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lkb/vindex/flat_index.hpp"
#include "lkb/vindex/index_io.hpp"
#include "lkb/vindex/ivf_index.hpp"
#include "lkb/vindex/kmeans.hpp"
#include "lkb/vindex/pq.hpp"
#include "lkb/vindex/similarity.hpp"
