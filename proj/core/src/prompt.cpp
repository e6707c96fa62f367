// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "lkb/error.hpp"
#include "lkb/retrieve.hpp"
#include "lkb/utf8.hpp"

namespace lkb::retrieve {

namespace {

constexpr std::string_view kContextSlot = "{context}";
constexpr std::string_view kQuerySlot = "{query}";

std::size_t count_of(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// Longest prefix of `text` of at most `budget` scalars, cut at the last
// whitespace inside it when there is one.
std::string trim_to_budget(std::string_view text, std::size_t budget) {
  const std::u32string scalars = utf8::decode(text);
  if (scalars.size() <= budget) return std::string(text);
  std::size_t cut = budget;
  for (std::size_t i = budget + 1; i-- > 0;) {
    if (i < scalars.size() && utf8::is_space(scalars[i])) {
      cut = i;
      break;
    }
  }
  if (cut == 0) cut = budget;
  return utf8::encode(std::u32string_view(scalars).substr(0, cut));
}

}  // namespace

std::string render_template(std::string_view tmpl, std::string_view context,
                            std::string_view query) {
  if (count_of(tmpl, kContextSlot) != 1 || count_of(tmpl, kQuerySlot) != 1) {
    throw Error(ErrorKind::invalid_argument,
                "prompt template must contain {context} and {query} exactly once each");
  }
  std::string out;
  out.reserve(tmpl.size() + context.size() + query.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl.compare(pos, kContextSlot.size(), kContextSlot) == 0) {
      out.append(context);
      pos += kContextSlot.size();
    } else if (tmpl.compare(pos, kQuerySlot.size(), kQuerySlot) == 0) {
      out.append(query);
      pos += kQuerySlot.size();
    } else {
      out.push_back(tmpl[pos++]);
    }
  }
  return out;
}

PromptBundle assemble_prompt(const RetrievalResult& result, std::size_t budget,
                             const PromptTemplate& tmpl) {
  if (budget == 0) throw Error(ErrorKind::invalid_argument, "context budget must be >= 1");

  PromptBundle bundle;
  bundle.template_id = tmpl.id;
  if (result.hits.empty()) {
    bundle.prompt_text = render_template(tmpl.text, kNoKnowledgeSentinel, result.query_text);
    return bundle;
  }

  const std::size_t sep_chars = utf8::length(kContextSeparator);
  std::size_t keep = result.hits.size();
  std::size_t joined = 0;
  for (std::size_t i = 0; i < keep; ++i) {
    joined += utf8::length(result.hits[i].chunk.text) + (i > 0 ? sep_chars : 0);
  }
  while (joined > budget && keep > 1) {
    joined -= utf8::length(result.hits[keep - 1].chunk.text) + sep_chars;
    --keep;
  }
  bundle.truncated = keep < result.hits.size();

  std::string context;
  for (std::size_t i = 0; i < keep; ++i) {
    if (i > 0) context.append(kContextSeparator);
    context.append(result.hits[i].chunk.text);
    bundle.included_chunk_ids.push_back(result.hits[i].chunk.chunk_id);
  }
  if (joined > budget) {
    // Only one hit is left and it alone exceeds the budget.
    context = trim_to_budget(context, budget);
    bundle.truncated = true;
  }
  bundle.context_chars = utf8::length(context);
  bundle.prompt_text = render_template(tmpl.text, context, result.query_text);
  return bundle;
}

}  // namespace lkb::retrieve
