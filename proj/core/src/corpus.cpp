// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"
#include "lkb/utf8.hpp"

namespace lkb::corpus {

std::string_view to_string(Format format) noexcept {
  switch (format) {
    case Format::plain_text: return "plain-text";
    case Format::markdown: return "markdown";
    case Format::csv: return "csv";
  }
  return "plain-text";
}

Format parse_format(std::string_view name) {
  if (name == "plain-text" || name == "txt" || name == "text") return Format::plain_text;
  if (name == "markdown" || name == "md") return Format::markdown;
  if (name == "csv") return Format::csv;
  throw Error(ErrorKind::invalid_argument, "unknown document format '" + std::string(name) +
                                               "' (expected plain-text, markdown or csv)");
}

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::fixed: return "fixed";
    case Strategy::recursive: return "recursive";
    case Strategy::token: return "token";
  }
  return "recursive";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "fixed") return Strategy::fixed;
  if (name == "recursive") return Strategy::recursive;
  if (name == "token") return Strategy::token;
  throw Error(ErrorKind::invalid_argument, "unknown splitter strategy '" + std::string(name) + "'");
}

void SplitterConfig::validate() const {
  if (chunk_size < 1) throw Error(ErrorKind::invalid_argument, "chunk_size must be >= 1");
  if (overlap >= chunk_size) {
    throw Error(ErrorKind::invalid_argument, "overlap must be smaller than chunk_size");
  }
  if (strategy == Strategy::recursive) {
    if (separators.empty() || !separators.back().empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "recursive separators must be non-empty and end with \"\"");
    }
  }
}

namespace {

std::string normalize_newlines(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == '\r' && i + 1 < in.size() && in[i + 1] == '\n') continue;
    out.push_back(in[i]);
  }
  return out;
}

std::string sanitize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("doc") : out;
}

}  // namespace

std::string flatten_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;

  const auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
  };
  const auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    row_has_content = true;
    if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      end_cell();
    } else if (c == '\n') {
      end_row();
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorKind::decode, "unterminated quoted CSV field");
  if (row_has_content || !row.empty()) end_row();

  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) out.push_back('\n');
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0) out.append(kCsvCellSeparator);
      out.append(rows[r][c]);
    }
  }
  return out;
}

std::string make_doc_id(std::string_view source, std::string_view text) {
  const std::string base =
      sanitize_name(std::filesystem::path(std::string(source)).filename().string());
  return base + "-" + sha256_hex(text).substr(0, 12);
}

std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "#%06zu", ordinal);
  return std::string(doc_id) + buf;
}

Document load_document(std::string_view bytes, Format format, std::string_view source) {
  if (bytes.empty()) {
    throw Error(ErrorKind::empty_document, "document '" + std::string(source) + "' is empty");
  }
  if (const auto bad = utf8::find_invalid(bytes)) {
    throw Error(ErrorKind::decode, "invalid UTF-8 in '" + std::string(source) +
                                       "' at byte offset " + std::to_string(*bad));
  }
  std::string text = normalize_newlines(bytes);
  if (format == Format::csv) text = flatten_csv(text);
  if (text.empty()) {
    throw Error(ErrorKind::empty_document, "document '" + std::string(source) + "' is empty");
  }

  Document doc;
  doc.doc_id = make_doc_id(source, text);
  doc.source = std::string(source);
  doc.format = format;
  doc.text = std::move(text);
  doc.ingested_at = std::chrono::system_clock::now();
  return doc;
}

// ---------------------------------------------------------------------------
// Splitting

std::vector<CharSpan> token_spans(std::u32string_view text) {
  std::vector<CharSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && utf8::is_space(text[i])) ++i;
    if (i == text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && !utf8::is_space(text[i])) ++i;
    out.push_back({start, i});
  }
  return out;
}

std::vector<CharSpan> split_fixed_spans(std::string_view text, const SplitterConfig& cfg) {
  cfg.validate();
  const std::size_t n = utf8::length(text);
  const std::size_t stride = cfg.chunk_size - cfg.overlap;
  std::vector<CharSpan> spans;
  for (std::size_t start = 0; start < n; start += stride) {
    const std::size_t end = std::min(start + cfg.chunk_size, n);
    spans.push_back({start, end});
    if (end == n) break;
  }
  return spans;
}

namespace {

class RecursiveSplitter {
 public:
  RecursiveSplitter(std::u32string_view text, const SplitterConfig& cfg)
      : text_(text), size_(cfg.chunk_size) {
    for (const auto& s : cfg.separators) seps_.push_back(utf8::decode(s));
  }

  std::vector<CharSpan> run() {
    std::vector<CharSpan> out;
    split(0, text_.size(), 0, out);
    return out;
  }

 private:
  bool occurs(std::size_t a, std::size_t b, const std::u32string& sep) const {
    if (sep.empty()) return true;
    return text_.substr(a, b - a).find(sep) != std::u32string_view::npos;
  }

  std::vector<CharSpan> pieces(std::size_t a, std::size_t b, const std::u32string& sep) const {
    std::vector<CharSpan> out;
    if (sep.empty()) {
      for (std::size_t i = a; i < b; ++i) out.push_back({i, i + 1});
      return out;
    }
    const std::u32string_view range = text_.substr(a, b - a);
    std::size_t pos = 0;
    while (pos <= range.size()) {
      const std::size_t hit = range.find(sep, pos);
      const std::size_t stop = hit == std::u32string_view::npos ? range.size() : hit;
      if (stop > pos) out.push_back({a + pos, a + stop});
      if (hit == std::u32string_view::npos) break;
      pos = hit + sep.size();
    }
    return out;
  }

  void split(std::size_t a, std::size_t b, std::size_t level, std::vector<CharSpan>& out) {
    if (b <= a) return;
    if (b - a <= size_) {
      out.push_back({a, b});
      return;
    }
    std::size_t s = level;
    while (s + 1 < seps_.size() && !occurs(a, b, seps_[s])) ++s;

    std::optional<CharSpan> current;
    const auto flush = [&] {
      if (current) out.push_back(*current);
      current.reset();
    };
    for (const CharSpan& p : pieces(a, b, seps_[s])) {
      if (p.length() > size_) {
        flush();
        split(p.begin, p.end, s + 1, out);
      } else if (!current) {
        current = p;
      } else if (p.end - current->begin <= size_) {
        current->end = p.end;
      } else {
        flush();
        current = p;
      }
    }
    flush();
  }

  std::u32string_view text_;
  std::size_t size_;
  std::vector<std::u32string> seps_;
};

}  // namespace

std::vector<CharSpan> split_recursive_spans(std::string_view text, const SplitterConfig& cfg) {
  cfg.validate();
  const std::u32string scalars = utf8::decode(text);
  std::vector<CharSpan> spans = RecursiveSplitter(scalars, cfg).run();
  if (cfg.overlap == 0) return spans;

  // Extend each chunk backwards into the text preceding it, bounded by the
  // size limit and by the previous chunk's start.
  for (std::size_t i = spans.size(); i-- > 1;) {
    CharSpan& span = spans[i];
    const std::size_t room = cfg.chunk_size - span.length();
    const std::size_t reach = span.begin - spans[i - 1].begin;
    span.begin -= std::min({cfg.overlap, room, reach});
  }
  return spans;
}

std::vector<CharSpan> split_token_spans(std::string_view text, const SplitterConfig& cfg) {
  cfg.validate();
  const std::vector<CharSpan> tokens = token_spans(utf8::decode(text));
  const std::size_t stride = cfg.chunk_size - cfg.overlap;
  std::vector<CharSpan> spans;
  for (std::size_t first = 0; first < tokens.size(); first += stride) {
    const std::size_t last = std::min(first + cfg.chunk_size, tokens.size());
    spans.push_back({tokens[first].begin, tokens[last - 1].end});
    if (last == tokens.size()) break;
  }
  return spans;
}

std::vector<Chunk> make_chunks(std::string_view doc_id, std::string_view text,
                               const std::vector<CharSpan>& spans) {
  const utf8::OffsetTable offsets(text);
  std::vector<Chunk> chunks;
  chunks.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Chunk c;
    c.chunk_id = make_chunk_id(doc_id, i);
    c.doc_id = std::string(doc_id);
    c.text = std::string(offsets.slice(text, spans[i].begin, spans[i].end));
    c.char_span = spans[i];
    c.ordinal = i;
    chunks.push_back(std::move(c));
  }
  return chunks;
}

std::vector<Chunk> split_fixed(std::string_view doc_id, std::string_view text,
                               const SplitterConfig& cfg) {
  return make_chunks(doc_id, text, split_fixed_spans(text, cfg));
}

std::vector<Chunk> split_recursive(std::string_view doc_id, std::string_view text,
                                   const SplitterConfig& cfg) {
  return make_chunks(doc_id, text, split_recursive_spans(text, cfg));
}

std::vector<Chunk> split_tokens(std::string_view doc_id, std::string_view text,
                                const SplitterConfig& cfg) {
  return make_chunks(doc_id, text, split_token_spans(text, cfg));
}

std::vector<Chunk> split(const Document& doc, const SplitterConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::fixed: return split_fixed(doc.doc_id, doc.text, cfg);
    case Strategy::recursive: return split_recursive(doc.doc_id, doc.text, cfg);
    case Strategy::token: return split_tokens(doc.doc_id, doc.text, cfg);
  }
  return {};
}

}  // namespace lkb::corpus
