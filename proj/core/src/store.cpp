// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/service/store.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"

namespace lkb::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;
constexpr const char* kManifest = "manifest.json";
constexpr const char* kChunks = "chunks.jsonl";
constexpr const char* kVectors = "vectors.bin";
constexpr const char* kIndex = "index.bin";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string as_string(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string checked_read(const fs::path& root, const std::string& name, const json& files) {
  const std::string bytes = read_file(root / name);
  const auto it = files.find(name);
  if (it == files.end()) throw Error(ErrorKind::io, "manifest lists no digest for " + name);
  if (sha256_hex(bytes) != it->get<std::string>()) {
    throw Error(ErrorKind::checksum_mismatch, name + " does not match its manifest digest");
  }
  return bytes;
}

std::int64_t to_millis(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

}  // namespace

vindex::IndexKind Snapshot::active_kind() const noexcept {
  if (!approximate) return vindex::IndexKind::flat;
  return approximate->quantized() ? vindex::IndexKind::ivfpq : vindex::IndexKind::ivf;
}

Snapshot CorpusStore::load(std::size_t dim) const {
  Snapshot snap;
  snap.vectors = vindex::FlatIndex(dim);
  if (!fs::exists(root_ / kManifest)) return snap;

  json manifest;
  try {
    manifest = json::parse(read_file(root_ / kManifest));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, "unreadable manifest: " + std::string(e.what()));
  }
  try {
    if (manifest.at("version").get<int>() != kManifestVersion) {
      throw Error(ErrorKind::unsupported_version, "unsupported store manifest version");
    }
    if (manifest.at("dim").get<std::size_t>() != dim) {
      throw Error(ErrorKind::dimension_mismatch,
                  "store holds " + std::to_string(manifest.at("dim").get<std::size_t>()) +
                      "-d vectors but the embedder produces " + std::to_string(dim));
    }
    snap.generation = manifest.at("generation").get<std::uint64_t>();
    const json& files = manifest.at("files");

    for (const json& d : manifest.at("documents")) {
      StoredDocument stored;
      stored.document.doc_id = d.at("doc_id").get<std::string>();
      stored.document.source = d.at("source").get<std::string>();
      stored.document.format = corpus::parse_format(d.at("format").get<std::string>());
      stored.document.ingested_at = std::chrono::system_clock::time_point(
          std::chrono::milliseconds(d.at("ingested_at_ms").get<std::int64_t>()));
      stored.sha256 = d.at("sha256").get<std::string>();
      stored.chunk_count = d.at("chunk_count").get<std::size_t>();
      stored.document.text = read_file(root_ / "docs" / (stored.document.doc_id + ".txt"));
      if (sha256_hex(stored.document.text) != stored.sha256) {
        throw Error(ErrorKind::checksum_mismatch,
                    "document " + stored.document.doc_id + " does not match its manifest digest");
      }
      const std::string id = stored.document.doc_id;
      snap.documents.emplace(id, std::move(stored));
    }

    std::istringstream lines(checked_read(root_, kChunks, files));
    for (std::string line; std::getline(lines, line);) {
      if (line.empty()) continue;
      const json c = json::parse(line);
      corpus::Chunk chunk;
      chunk.chunk_id = c.at("chunk_id").get<std::string>();
      chunk.doc_id = c.at("doc_id").get<std::string>();
      chunk.ordinal = c.at("ordinal").get<std::size_t>();
      chunk.char_span = {c.at("start").get<std::size_t>(), c.at("end").get<std::size_t>()};
      chunk.text = c.at("text").get<std::string>();
      const std::string id = chunk.chunk_id;
      snap.chunks.emplace(id, std::move(chunk));
    }

    auto vectors = vindex::load_index(as_bytes(checked_read(root_, kVectors, files)));
    auto* flat = std::get_if<vindex::FlatIndex>(&vectors);
    if (!flat) throw Error(ErrorKind::io, "vectors.bin must hold a flat index");
    snap.vectors = std::move(*flat);

    auto active = vindex::load_index(as_bytes(checked_read(root_, kIndex, files)));
    if (auto* ivf = std::get_if<vindex::IvfIndex>(&active)) snap.approximate = std::move(*ivf);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, "malformed store metadata: " + std::string(e.what()));
  }

  for (const std::string& id : snap.vectors.ids()) {
    if (!snap.chunks.contains(id)) {
      throw Error(ErrorKind::io, "indexed id " + id + " has no stored chunk");
    }
  }
  if (snap.approximate && snap.approximate->size() != snap.vectors.size()) {
    throw Error(ErrorKind::io, "index.bin and vectors.bin disagree on the vector count");
  }
  return snap;
}

void CorpusStore::save(const Snapshot& snap) const {
  std::error_code ec;
  fs::create_directories(root_ / "docs", ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + (root_ / "docs").string());

  json documents = json::array();
  for (const auto& [id, stored] : snap.documents) {
    const fs::path doc_path = root_ / "docs" / (id + ".txt");
    if (!fs::exists(doc_path)) write_atomic(doc_path, stored.document.text);
    documents.push_back({{"doc_id", id},
                         {"source", stored.document.source},
                         {"format", std::string(corpus::to_string(stored.document.format))},
                         {"sha256", stored.sha256},
                         {"chunk_count", stored.chunk_count},
                         {"ingested_at_ms", to_millis(stored.document.ingested_at)}});
  }

  std::string chunk_lines;
  for (const auto& [id, c] : snap.chunks) {
    chunk_lines += json{{"chunk_id", c.chunk_id},
                        {"doc_id", c.doc_id},
                        {"ordinal", c.ordinal},
                        {"start", c.char_span.begin},
                        {"end", c.char_span.end},
                        {"text", c.text}}
                       .dump();
    chunk_lines.push_back('\n');
  }
  const std::string vectors = as_string(vindex::save_index(snap.vectors));

  json files;
  write_atomic(root_ / kChunks, chunk_lines);
  files[kChunks] = sha256_hex(chunk_lines);
  write_atomic(root_ / kVectors, vectors);
  files[kVectors] = sha256_hex(vectors);
  const std::string index =
      snap.approximate ? as_string(vindex::save_index(*snap.approximate)) : vectors;
  write_atomic(root_ / kIndex, index);
  files[kIndex] = sha256_hex(index);

  const json manifest = {{"version", kManifestVersion},
                         {"dim", snap.vectors.dim()},
                         {"generation", snap.generation},
                         {"index_kind", std::string(vindex::to_string(snap.active_kind()))},
                         {"documents", std::move(documents)},
                         {"files", std::move(files)}};
  write_atomic(root_ / kManifest, manifest.dump(2) + "\n");
}

}  // namespace lkb::service
