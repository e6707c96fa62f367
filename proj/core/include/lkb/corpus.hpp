// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lkb::corpus {

enum class Format { plain_text, markdown, csv };

std::string_view to_string(Format format) noexcept;
/// Accepts "plain-text", "markdown", "csv" (and the aliases "txt", "md").
Format parse_format(std::string_view name);

struct Document {
  std::string doc_id;
  std::string source;
  Format format = Format::plain_text;
  std::string text;
  std::chrono::system_clock::time_point ingested_at;
};

/// Half-open range of Unicode scalar values.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - begin; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  std::string text;
  CharSpan char_span;
  std::size_t ordinal = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

enum class Strategy { fixed, recursive, token };

std::string_view to_string(Strategy strategy) noexcept;
Strategy parse_strategy(std::string_view name);

struct SplitterConfig {
  Strategy strategy = Strategy::recursive;
  /// Characters for fixed/recursive, tokens for token.
  std::size_t chunk_size = 500;
  std::size_t overlap = 50;
  std::vector<std::string> separators = {"\n\n", "\n", ". ", " ", ""};

  /// Throws Error{invalid_argument} when the invariants do not hold.
  void validate() const;
};

inline constexpr std::string_view kCsvCellSeparator = " | ";

/// Validates UTF-8, normalises CRLF to LF, flattens CSV row-wise, and derives
/// the doc_id as `<basename(source)>-<first 12 hex of sha256(text)>`.
Document load_document(std::string_view bytes, Format format,
                       std::string_view source);

/// Flattens RFC 4180 CSV: cells joined by " | ", rows by "\n". Quoted cells
/// may contain separators, doubled quotes and newlines.
std::string flatten_csv(std::string_view csv);

std::string make_doc_id(std::string_view source, std::string_view text);
std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal);

// Splitters return spans only; make_chunks() materialises them. All spans
// are in scalar values of `text`.
std::vector<CharSpan> split_fixed_spans(std::string_view text,
                                        const SplitterConfig& cfg);
std::vector<CharSpan> split_recursive_spans(std::string_view text,
                                            const SplitterConfig& cfg);
std::vector<CharSpan> split_token_spans(std::string_view text,
                                        const SplitterConfig& cfg);

std::vector<Chunk> make_chunks(std::string_view doc_id, std::string_view text,
                               const std::vector<CharSpan>& spans);

std::vector<Chunk> split_fixed(std::string_view doc_id, std::string_view text,
                               const SplitterConfig& cfg);
std::vector<Chunk> split_recursive(std::string_view doc_id,
                                   std::string_view text,
                                   const SplitterConfig& cfg);
std::vector<Chunk> split_tokens(std::string_view doc_id, std::string_view text,
                                const SplitterConfig& cfg);

/// Dispatches on cfg.strategy.
std::vector<Chunk> split(const Document& doc, const SplitterConfig& cfg);

/// Spans of maximal runs of non-whitespace scalar values.
std::vector<CharSpan> token_spans(std::u32string_view text);

}  // namespace lkb::corpus
