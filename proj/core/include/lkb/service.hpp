// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lkb/service/api.hpp"
#include "lkb/service/config.hpp"
#include "lkb/service/http_server.hpp"
#include "lkb/service/knowledge_base.hpp"
#include "lkb/service/store.hpp"
