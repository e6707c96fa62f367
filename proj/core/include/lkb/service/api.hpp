// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lkb/error.hpp"
#include "lkb/service/knowledge_base.hpp"

namespace lkb::service {

// JSON bodies shared by the HTTP endpoints and `lkb --json`, so both
// surfaces serialise through exactly one code path.

nlohmann::json to_json(const IngestResult& result);
nlohmann::json hits_json(const retrieve::RetrievalResult& result);
nlohmann::json query_response(const retrieve::RetrievalResult& result);
nlohmann::json ask_response(const AskResult& result);
nlohmann::json to_json(const Health& health);
nlohmann::json to_json(const IndexStats& stats);
nlohmann::json error_body(ErrorKind kind, std::string_view message);

/// HTTP status for an error kind.
int http_status(ErrorKind kind) noexcept;

IngestRequest parse_ingest_request(const nlohmann::json& body);
QueryRequest parse_query_request(const nlohmann::json& body);
AskRequest parse_ask_request(const nlohmann::json& body);
RebuildRequest parse_rebuild_request(const nlohmann::json& body);

struct ApiResponse {
  int status = 200;
  std::string body;
};

/// Transport-free router: dispatches one request to the knowledge base and
/// renders the JSON body (or the error envelope).
ApiResponse handle_request(KnowledgeBase& kb, std::string_view method,
                           std::string_view path, std::string_view body);

}  // namespace lkb::service
