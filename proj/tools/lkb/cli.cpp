// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <signal.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lkb/error.hpp"
#include "lkb/service.hpp"
#include "lkb/utf8.hpp"

namespace lkb::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config_file;
  std::string data_dir;
  bool as_json = false;

  std::vector<std::string> paths;
  std::string format;
  std::optional<std::size_t> chunk_size;
  std::optional<std::size_t> overlap;

  std::string query;
  std::optional<std::size_t> k;
  std::string mode;
  std::optional<std::size_t> nprobe;
  std::optional<std::size_t> budget;
  bool mock_llm = false;

  std::optional<std::size_t> nlist;
  std::optional<std::size_t> m;
  std::optional<unsigned> bits;
  std::optional<std::uint64_t> seed;
};

std::optional<vindex::IndexKind> mode_of(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return vindex::parse_index_kind(name);
}

corpus::Format format_for(const std::string& flag, const std::filesystem::path& path) {
  if (!flag.empty()) return corpus::parse_format(flag);
  const std::string ext = path.extension().string();
  if (ext == ".csv") return corpus::Format::csv;
  if (ext == ".md" || ext == ".markdown") return corpus::Format::markdown;
  return corpus::Format::plain_text;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string snippet(std::string_view text, std::size_t max_chars) {
  std::string flat(text);
  for (char& c : flat) {
    if (c == '\n' || c == '\t') c = ' ';
  }
  if (utf8::length(flat) <= max_chars) return flat;
  const utf8::OffsetTable offsets(flat);
  return std::string(offsets.slice(flat, 0, max_chars)) + "...";
}

void print_hits(std::ostream& out, const std::vector<retrieve::RetrievedChunk>& hits) {
  out << "rank  score      chunk_id\n";
  for (std::size_t i = 0; i < hits.size(); ++i) {
    out << std::left << std::setw(6) << i + 1 << std::setw(11) << std::fixed
        << std::setprecision(6) << hits[i].score << hits[i].chunk.chunk_id << "\n"
        << "      " << snippet(hits[i].chunk.text, 72) << "\n";
  }
  out.unsetf(std::ios::floatfield);
}

void print_stats(std::ostream& out, const service::IndexStats& s) {
  out << "index_kind  " << vindex::to_string(s.index_kind) << "\n"
      << "vectors     " << s.vectors << "\n"
      << "docs        " << s.docs << "\n"
      << "chunks      " << s.chunks << "\n";
  if (s.index_kind != vindex::IndexKind::flat) {
    out << "nlist       " << s.nlist << "\n";
    if (s.index_kind == vindex::IndexKind::ivfpq) {
      out << "m           " << s.pq_m << "\n"
          << "bits        " << s.pq_bits << "\n";
    }
    std::size_t lo = s.list_sizes.empty() ? 0 : s.list_sizes.front(), hi = lo;
    for (std::size_t n : s.list_sizes) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    out << "list sizes  min " << lo << ", max " << hi << "\n";
  }
}

service::ServiceConfig make_config(const Options& o, const service::EnvLookup& env) {
  std::map<std::string, std::string> overrides;
  if (!o.data_dir.empty()) overrides["data.dir"] = o.data_dir;
  if (o.chunk_size) overrides["splitter.chunk_size"] = std::to_string(*o.chunk_size);
  if (o.overlap) overrides["splitter.overlap"] = std::to_string(*o.overlap);
  if (o.mock_llm) overrides["llm.kind"] = "mock";
  std::optional<std::filesystem::path> file;
  if (!o.config_file.empty()) file = o.config_file;
  return service::load_config(file, env, overrides);
}

int cmd_ingest(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  auto kb = service::KnowledgeBase::open(make_config(o, env));
  json results = json::array();
  for (const std::string& path : o.paths) {
    service::IngestRequest req;
    req.source = path;
    req.format = format_for(o.format, path);
    req.content = read_input(path);
    service::IngestResult r;
    try {
      r = kb->ingest(req);
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
    if (o.as_json) {
      results.push_back(service::to_json(r));
    } else {
      out << r.doc_id << "  " << r.chunk_count << " chunks"
          << (r.created ? "" : " (unchanged)") << "\n";
    }
  }
  if (o.as_json) out << results.dump() << "\n";
  return kExitOk;
}

int cmd_search(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  auto kb = service::KnowledgeBase::open(make_config(o, env));
  service::QueryRequest req{o.query, o.k, mode_of(o.mode), o.nprobe};
  const retrieve::RetrievalResult result = kb->query(req);
  if (o.as_json) {
    out << service::query_response(result).dump() << "\n";
  } else {
    print_hits(out, result.hits);
  }
  return kExitOk;
}

int cmd_ask(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  auto kb = service::KnowledgeBase::open(make_config(o, env));
  const service::AskResult result = kb->ask({o.query, o.k, o.budget});
  if (o.as_json) {
    out << service::ask_response(result).dump() << "\n";
    return kExitOk;
  }
  out << result.answer.text << "\n";
  if (!result.prompt.included_chunk_ids.empty()) {
    out << "\nevidence";
    if (result.prompt.truncated) out << " (context truncated)";
    out << ":\n";
    print_hits(out, result.retrieval.hits);
  }
  return kExitOk;
}

int cmd_rebuild(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  auto kb = service::KnowledgeBase::open(make_config(o, env));
  const service::IndexStats stats = kb->rebuild({mode_of(o.mode), o.nlist, o.m, o.bits, o.seed});
  if (o.as_json) {
    out << service::to_json(stats).dump() << "\n";
  } else {
    print_stats(out, stats);
  }
  return kExitOk;
}

int cmd_stats(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  auto kb = service::KnowledgeBase::open(make_config(o, env));
  if (o.as_json) {
    out << service::to_json(kb->stats()).dump() << "\n";
  } else {
    print_stats(out, kb->stats());
  }
  return kExitOk;
}

int cmd_serve(const Options& o, const service::EnvLookup& env, std::ostream& out) {
  const service::ServiceConfig cfg = make_config(o, env);
  auto kb = service::KnowledgeBase::open(cfg);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::HttpServer server(*kb);
  const int port = server.start(cfg.listen_host, cfg.listen_port);
  out << "lkb listening on http://" << cfg.listen_host << ":" << port << " (data "
      << cfg.data_dir.string() << ")" << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const service::EnvLookup& env) {
  Options o;
  CLI::App app{"Offline local knowledge base: ingest, search and ask", "lkb"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_file, "key=value config file");
  app.add_option("--data-dir", o.data_dir, "Knowledge base directory");
  app.add_flag("--json", o.as_json, "Print machine-readable JSON");

  auto* ingest = app.add_subcommand("ingest", "Load, split, embed and store documents");
  ingest->add_option("paths", o.paths, "Files to ingest")->required();
  ingest->add_option("--format", o.format, "plain-text, markdown or csv (default: by extension)");
  ingest->add_option("--chunk-size", o.chunk_size, "Splitter chunk size");
  ingest->add_option("--overlap", o.overlap, "Splitter overlap");

  auto* search = app.add_subcommand("search", "Retrieve the top-k chunks for a query");
  search->add_option("query", o.query, "Query text")->required();
  search->add_option("--k", o.k, "Number of hits");
  search->add_option("--mode", o.mode, "flat, ivf or ivfpq (default: active index)");
  search->add_option("--nprobe", o.nprobe, "Partitions to probe");

  auto* ask = app.add_subcommand("ask", "Answer a question from retrieved knowledge");
  ask->add_option("query", o.query, "Question text")->required();
  ask->add_option("--k", o.k, "Number of knowledge entries in the prompt");
  ask->add_option("--budget", o.budget, "Context budget in characters");
  ask->add_flag("--mock-llm", o.mock_llm, "Use the deterministic mock model");

  auto* index = app.add_subcommand("index", "Inspect or rebuild the search index");
  index->require_subcommand(1);
  auto* rebuild = index->add_subcommand("rebuild", "Retrain the index from stored vectors");
  rebuild->add_option("--mode", o.mode, "flat, ivf or ivfpq");
  rebuild->add_option("--nlist", o.nlist, "Number of partitions");
  rebuild->add_option("--m", o.m, "PQ subquantizers");
  rebuild->add_option("--bits", o.bits, "PQ bits per code");
  rebuild->add_option("--seed", o.seed, "Training seed");
  auto* stats = index->add_subcommand("stats", "Print index statistics");

  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON service");
  serve->add_option("--config", o.config_file, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << "\n" << app.help();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o, env, out);
    if (*search) return cmd_search(o, env, out);
    if (*ask) return cmd_ask(o, env, out);
    if (*rebuild) return cmd_rebuild(o, env, out);
    if (*stats) return cmd_stats(o, env, out);
    if (*serve) return cmd_serve(o, env, out);
  } catch (const Error& e) {
    err << "lkb: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "lkb: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace lkb::cli
