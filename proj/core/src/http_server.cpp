// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/service/http_server.hpp"

#include <thread>

#include "httplib.h"
#include "lkb/error.hpp"
#include "lkb/service/api.hpp"

namespace lkb::service {

struct HttpServer::Impl {
  KnowledgeBase& kb;
  httplib::Server server;
  std::thread worker;

  explicit Impl(KnowledgeBase& base) : kb(base) {
    const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      const ApiResponse out = handle_request(kb, req.method, req.path, req.body);
      res.status = out.status;
      res.set_content(out.body, "application/json");
    };
    for (const char* path : {"/v1/documents", "/v1/query", "/v1/ask", "/v1/index/rebuild",
                             "/v1/health", "/v1/index/stats"}) {
      server.Get(path, handler);
      server.Post(path, handler);
    }
    // Unknown paths still answer with the JSON error envelope.
    server.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (res.status != 404 || !res.body.empty()) return;
      const ApiResponse out = handle_request(kb, req.method, req.path, req.body);
      res.status = out.status;
      res.set_content(out.body, "application/json");
    });
  }
};

HttpServer::HttpServer(KnowledgeBase& kb) : impl_(std::make_unique<Impl>(kb)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorKind::io, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  impl_->worker = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace lkb::service
