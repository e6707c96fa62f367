// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "http_util.hpp"

#include "lkb/error.hpp"

namespace lkb::detail {

SplitUrl split_url(std::string_view url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorKind::invalid_argument, "URL '" + std::string(url) + "' has no scheme");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
    out.path = "/";
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.path = std::string(url.substr(path_start));
  }
  return out;
}

void apply_timeouts(httplib::Client& client, int timeout_ms) {
  const auto ms = std::chrono::milliseconds(timeout_ms);
  client.set_connection_timeout(ms);
  client.set_read_timeout(ms);
  client.set_write_timeout(ms);
}

bool is_timeout(httplib::Error err, std::chrono::steady_clock::duration elapsed,
                int timeout_ms) noexcept {
  if (err == httplib::Error::ConnectionTimeout) return true;
  return (err == httplib::Error::Read || err == httplib::Error::Write) &&
         elapsed >= std::chrono::milliseconds(timeout_ms) * 9 / 10;
}

}  // namespace lkb::detail
