// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "lkb/service/knowledge_base.hpp"

namespace lkb::service {

// HTTP/1.1 JSON front end over handle_request(). Requests are served
// concurrently from a worker pool.
class HttpServer {
 public:
  explicit HttpServer(KnowledgeBase& kb);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws io on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void serve();
  /// bind() + serve() on a background thread.
  int start(const std::string& host, int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lkb::service
