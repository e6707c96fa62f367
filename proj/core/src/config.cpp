// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lkb/error.hpp"

namespace lkb::service {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::invalid_argument, "config " + std::string(key) + "='" +
                                               std::string(value) + "': " + std::string(why));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "not a valid number");
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used != value.size()) bad_value(key, value, "not a valid number");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value, "not a valid number");
  }
}

// Separators are '|'-delimited with C escapes (\n, \t, \\, \|), so the
// default list reads `\n\n|\n|. | |`.
std::vector<std::string> parse_separators(std::string_view key, std::string_view value) {
  std::vector<std::string> out(1);
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (c == '|') {
      out.emplace_back();
    } else if (c == '\\') {
      if (++i == value.size()) bad_value(key, value, "dangling escape");
      switch (value[i]) {
        case 'n': out.back().push_back('\n'); break;
        case 't': out.back().push_back('\t'); break;
        case '\\': out.back().push_back('\\'); break;
        case '|': out.back().push_back('|'); break;
        default: bad_value(key, value, "unknown escape");
      }
    } else {
      out.back().push_back(c);
    }
  }
  return out;
}

}  // namespace

void ServiceConfig::validate() const {
  const auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorKind::invalid_argument, "config " + key + ": " + why);
  };
  if (listen_port < 0 || listen_port > 65535) fail("listen.port", "must be in [0, 65535]");
  try {
    splitter.validate();
  } catch (const Error& e) {
    fail("splitter", e.what());
  }
  if (embed_dim == 0) fail("embedder.dim", "must be >= 1");
  if (embedder == EmbedderKind::reference) {
    if (embed_vocab == 0) fail("embedder.vocab", "must be >= 1");
    if (embed_heads == 0 || embed_dim % embed_heads != 0) {
      fail("embedder.heads", "must divide embedder.dim");
    }
  } else {
    if (embed_url.empty()) fail("embedder.url", "required for the remote embedder");
    if (embed_timeout_ms <= 0) fail("embedder.timeout_ms", "must be > 0");
  }
  if (nlist > 4096) fail("index.nlist", "must be in [0, 4096]");
  if (nprobe == 0) fail("index.nprobe", "must be >= 1");
  if (pq_m == 0 || embed_dim % pq_m != 0) fail("index.m", "must divide embedder.dim");
  if (pq_bits < 1 || pq_bits > 16) fail("index.bits", "must be in [1, 16]");
  if (kmeans_iters == 0) fail("index.iters", "must be >= 1");
  if (top_k == 0) fail("retrieval.k", "must be >= 1");
  if (budget == 0) fail("retrieval.budget", "must be >= 1");
  if (llm == LlmKind::remote) {
    try {
      llm_endpoint.validate();
    } catch (const Error& e) {
      fail("llm", e.what());
    }
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "listen.host",        "listen.port",        "data.dir",
      "splitter.strategy",  "splitter.chunk_size", "splitter.overlap",
      "splitter.separators", "embedder.kind",     "embedder.dim",
      "embedder.vocab",     "embedder.heads",     "embedder.seed",
      "embedder.url",       "embedder.timeout_ms", "index.mode",
      "index.nlist",        "index.nprobe",       "index.m",
      "index.bits",         "index.seed",         "index.iters",
      "retrieval.k",        "retrieval.budget",   "llm.kind",
      "llm.base_url",       "llm.model",          "llm.timeout_ms",
      "llm.max_retries",    "llm.temperature",    "llm.retry_backoff_ms",
  };
  return keys;
}

std::string env_var_for(std::string_view key) {
  std::string out = "LKB_";
  for (char c : key) {
    if (c == '.') {
      out.push_back('_');
    } else if (c >= 'a' && c <= 'z') {
      out.push_back(static_cast<char>(c - 'a' + 'A'));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::invalid_argument,
                  "config line " + std::to_string(lineno) + ": expected key=value");
    }
    out[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

void apply_setting(ServiceConfig& cfg, std::string_view key, std::string_view value) {
  const auto size = [&] { return parse_number<std::size_t>(key, value); };
  const auto integer = [&] { return parse_number<int>(key, value); };

  if (key == "listen.host") {
    cfg.listen_host = std::string(value);
  } else if (key == "listen.port") {
    cfg.listen_port = integer();
  } else if (key == "data.dir") {
    cfg.data_dir = std::string(value);
  } else if (key == "splitter.strategy") {
    cfg.splitter.strategy = corpus::parse_strategy(value);
  } else if (key == "splitter.chunk_size") {
    cfg.splitter.chunk_size = size();
  } else if (key == "splitter.overlap") {
    cfg.splitter.overlap = size();
  } else if (key == "splitter.separators") {
    cfg.splitter.separators = parse_separators(key, value);
  } else if (key == "embedder.kind") {
    if (value == "reference") {
      cfg.embedder = EmbedderKind::reference;
    } else if (value == "remote") {
      cfg.embedder = EmbedderKind::remote;
    } else {
      bad_value(key, value, "expected reference or remote");
    }
  } else if (key == "embedder.dim") {
    cfg.embed_dim = size();
  } else if (key == "embedder.vocab") {
    cfg.embed_vocab = parse_number<std::uint32_t>(key, value);
  } else if (key == "embedder.heads") {
    cfg.embed_heads = size();
  } else if (key == "embedder.seed") {
    cfg.embed_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "embedder.url") {
    cfg.embed_url = std::string(value);
  } else if (key == "embedder.timeout_ms") {
    cfg.embed_timeout_ms = integer();
  } else if (key == "index.mode") {
    cfg.index_mode = vindex::parse_index_kind(value);
  } else if (key == "index.nlist") {
    cfg.nlist = size();
  } else if (key == "index.nprobe") {
    cfg.nprobe = size();
  } else if (key == "index.m") {
    cfg.pq_m = size();
  } else if (key == "index.bits") {
    cfg.pq_bits = parse_number<unsigned>(key, value);
  } else if (key == "index.seed") {
    cfg.index_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "index.iters") {
    cfg.kmeans_iters = size();
  } else if (key == "retrieval.k") {
    cfg.top_k = size();
  } else if (key == "retrieval.budget") {
    cfg.budget = size();
  } else if (key == "llm.kind") {
    if (value == "mock") {
      cfg.llm = LlmKind::mock;
    } else if (value == "remote") {
      cfg.llm = LlmKind::remote;
    } else {
      bad_value(key, value, "expected mock or remote");
    }
  } else if (key == "llm.base_url") {
    cfg.llm_endpoint.base_url = std::string(value);
  } else if (key == "llm.model") {
    cfg.llm_endpoint.model = std::string(value);
  } else if (key == "llm.timeout_ms") {
    cfg.llm_endpoint.timeout_ms = integer();
  } else if (key == "llm.max_retries") {
    cfg.llm_endpoint.max_retries = integer();
  } else if (key == "llm.temperature") {
    cfg.llm_endpoint.temperature = parse_double(key, value);
  } else if (key == "llm.retry_backoff_ms") {
    cfg.llm_endpoint.retry_backoff_ms = integer();
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown config key '" + std::string(key) + "'");
  }
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env,
                          const std::map<std::string, std::string>& overrides) {
  ServiceConfig cfg;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw Error(ErrorKind::io, "cannot read config file " + file->string());
    std::stringstream buf;
    buf << in.rdbuf();
    for (const auto& [k, v] : parse_key_values(buf.str())) apply_setting(cfg, k, v);
  }
  if (env) {
    for (const std::string& key : config_keys()) {
      if (const auto v = env(env_var_for(key))) apply_setting(cfg, key, *v);
    }
  }
  for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

std::unique_ptr<embed::Embedder> make_embedder(const ServiceConfig& cfg) {
  if (cfg.embedder == EmbedderKind::remote) {
    return std::make_unique<embed::RemoteEmbedder>(
        embed::RemoteEmbedderConfig{cfg.embed_url, cfg.embed_dim, cfg.embed_timeout_ms});
  }
  return std::make_unique<embed::ReferenceEmbedder>(embed::ReferenceEmbedderParams::generate(
      cfg.embed_dim, cfg.embed_vocab, cfg.embed_heads, cfg.embed_seed));
}

std::unique_ptr<llm::LanguageModel> make_language_model(const ServiceConfig& cfg) {
  if (cfg.llm == LlmKind::remote) return std::make_unique<llm::HttpLanguageModel>(cfg.llm_endpoint);
  return std::make_unique<llm::MockLanguageModel>();
}

}  // namespace lkb::service
