// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/service/api.hpp"

#include <algorithm>
#include <limits>

namespace lkb::service {

using nlohmann::json;

namespace {

json hit_json(const retrieve::RetrievedChunk& hit) {
  return {{"chunk_id", hit.chunk.chunk_id},
          {"doc_id", hit.chunk.doc_id},
          {"score", hit.score},
          {"text", hit.chunk.text}};
}

[[noreturn]] void bad_field(std::string_view field, std::string_view expected) {
  throw Error(ErrorKind::invalid_argument,
              "field '" + std::string(field) + "' must be " + std::string(expected));
}

void require_object(const json& body) {
  if (!body.is_object()) throw Error(ErrorKind::invalid_argument, "request body must be a JSON object");
}

std::string required_string(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end()) throw Error(ErrorKind::invalid_argument, "missing field '" + std::string(field) + "'");
  if (!it->is_string()) bad_field(field, "a string");
  return it->get<std::string>();
}

template <typename T>
std::optional<T> optional_count(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) bad_field(field, "a non-negative integer");
  const auto v = it->get<std::uint64_t>();
  if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) bad_field(field, "in range");
  return static_cast<T>(v);
}

std::optional<vindex::IndexKind> optional_mode(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_field(field, "one of flat, ivf, ivfpq");
  return vindex::parse_index_kind(it->get<std::string>());
}

ApiResponse ok(const json& body) { return {200, body.dump()}; }

ApiResponse failure(int status, ErrorKind kind, std::string_view message) {
  // Messages may quote undecodable client bytes.
  return {status, error_body(kind, message).dump(-1, ' ', false, json::error_handler_t::replace)};
}

}  // namespace

json to_json(const IngestResult& result) {
  return {{"doc_id", result.doc_id}, {"chunk_count", result.chunk_count}};
}

json hits_json(const retrieve::RetrievalResult& result) {
  json hits = json::array();
  for (const auto& h : result.hits) hits.push_back(hit_json(h));
  return hits;
}

json query_response(const retrieve::RetrievalResult& result) {
  return {{"hits", hits_json(result)}};
}

json ask_response(const AskResult& result) {
  // Evidence is the hits that made it into the prompt, in rank order.
  json hits = json::array();
  const auto& used = result.prompt.included_chunk_ids;
  for (const auto& h : result.retrieval.hits) {
    if (std::find(used.begin(), used.end(), h.chunk.chunk_id) != used.end()) {
      hits.push_back(hit_json(h));
    }
  }
  return {{"answer", result.answer.text},
          {"model_id", result.answer.model_id},
          {"hits", std::move(hits)},
          {"prompt_chars", result.answer.prompt_chars},
          {"truncated", result.prompt.truncated}};
}

json to_json(const Health& health) {
  return {{"status", "ok"},
          {"index_kind", std::string(vindex::to_string(health.index_kind))},
          {"vectors", health.vectors},
          {"docs", health.docs}};
}

json to_json(const IndexStats& stats) {
  return {{"index_kind", std::string(vindex::to_string(stats.index_kind))},
          {"vectors", stats.vectors},
          {"docs", stats.docs},
          {"chunks", stats.chunks},
          {"nlist", stats.nlist},
          {"m", stats.pq_m},
          {"bits", stats.pq_bits},
          {"list_sizes", stats.list_sizes}};
}

json error_body(ErrorKind kind, std::string_view message) {
  return {{"error", {{"code", std::string(to_string(kind))}, {"message", std::string(message)}}}};
}

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::decode:
    case ErrorKind::empty_document:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::non_finite:
      return 400;
    case ErrorKind::duplicate_id:
    case ErrorKind::empty_index:
    case ErrorKind::conflict:
    case ErrorKind::busy:
      return 409;
    case ErrorKind::transport:
    case ErrorKind::timeout:
    case ErrorKind::malformed_response:
      return 502;
    case ErrorKind::unavailable:
      return 503;
    case ErrorKind::not_found:
    case ErrorKind::bad_magic:
    case ErrorKind::unsupported_version:
    case ErrorKind::truncated:
    case ErrorKind::checksum_mismatch:
    case ErrorKind::io:
      return 500;
  }
  return 500;
}

IngestRequest parse_ingest_request(const json& body) {
  require_object(body);
  IngestRequest req;
  req.source = required_string(body, "source");
  req.content = required_string(body, "content");
  if (const auto it = body.find("format"); it != body.end() && !it->is_null()) {
    if (!it->is_string()) bad_field("format", "one of plain-text, markdown, csv");
    req.format = corpus::parse_format(it->get<std::string>());
  }
  return req;
}

QueryRequest parse_query_request(const json& body) {
  require_object(body);
  QueryRequest req;
  req.query = required_string(body, "query");
  req.k = optional_count<std::size_t>(body, "k");
  req.mode = optional_mode(body, "mode");
  req.nprobe = optional_count<std::size_t>(body, "nprobe");
  return req;
}

AskRequest parse_ask_request(const json& body) {
  require_object(body);
  AskRequest req;
  req.query = required_string(body, "query");
  req.k = optional_count<std::size_t>(body, "k");
  req.budget = optional_count<std::size_t>(body, "budget");
  return req;
}

RebuildRequest parse_rebuild_request(const json& body) {
  if (body.is_null()) return {};
  require_object(body);
  RebuildRequest req;
  req.mode = optional_mode(body, "mode");
  if (const auto it = body.find("params"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) bad_field("params", "an object");
    req.nlist = optional_count<std::size_t>(*it, "nlist");
    req.m = optional_count<std::size_t>(*it, "m");
    req.bits = optional_count<unsigned>(*it, "bits");
    req.seed = optional_count<std::uint64_t>(*it, "seed");
  }
  return req;
}

ApiResponse handle_request(KnowledgeBase& kb, std::string_view method, std::string_view path,
                           std::string_view body) {
  struct Route {
    std::string_view method;
    std::string_view path;
  };
  static constexpr Route kRoutes[] = {
      {"POST", "/v1/documents"}, {"POST", "/v1/query"},         {"POST", "/v1/ask"},
      {"GET", "/v1/health"},     {"GET", "/v1/index/stats"},    {"POST", "/v1/index/rebuild"},
  };
  const auto known = std::find_if(std::begin(kRoutes), std::end(kRoutes),
                                  [&](const Route& r) { return r.path == path; });
  if (known == std::end(kRoutes)) {
    return failure(404, ErrorKind::not_found, "no route for " + std::string(path));
  }
  if (known->method != method) {
    return failure(405, ErrorKind::invalid_argument,
                   std::string(path) + " expects " + std::string(known->method));
  }

  try {
    const auto parsed = [&] {
      if (body.empty()) return json();
      try {
        return json::parse(body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::decode, std::string("request body is not valid JSON: ") + e.what());
      }
    };
    if (path == "/v1/documents") return ok(to_json(kb.ingest(parse_ingest_request(parsed()))));
    if (path == "/v1/query") return ok(query_response(kb.query(parse_query_request(parsed()))));
    if (path == "/v1/ask") return ok(ask_response(kb.ask(parse_ask_request(parsed()))));
    if (path == "/v1/health") return ok(to_json(kb.health()));
    if (path == "/v1/index/stats") return ok(to_json(kb.stats()));
    return ok(to_json(kb.rebuild(parse_rebuild_request(parsed()))));
  } catch (const Error& e) {
    return failure(http_status(e.kind()), e.kind(), e.what());
  } catch (const json::exception& e) {
    return failure(400, ErrorKind::invalid_argument, e.what());
  } catch (const std::exception& e) {
    return failure(500, ErrorKind::io, e.what());
  }
}

}  // namespace lkb::service
