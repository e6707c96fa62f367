// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/corpus.hpp"

#include <functional>

#include <gtest/gtest.h>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"

namespace lkb::corpus {
namespace {

ErrorKind kind_of_failure(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected lkb::Error";
  return ErrorKind::io;
}

TEST(LoadDocument, NormalisesCrlf) {
  const Document d = load_document("abc\r\ndef", Format::plain_text, "a.txt");
  EXPECT_EQ(d.text, "abc\ndef");
  EXPECT_EQ(d.source, "a.txt");
  EXPECT_EQ(d.format, Format::plain_text);
}

TEST(LoadDocument, LoneCarriageReturnIsKept) {
  EXPECT_EQ(load_document("a\rb", Format::plain_text, "x").text, "a\rb");
}

TEST(LoadDocument, FlattensCsvRowWise) {
  EXPECT_EQ(load_document("a,b\nc,d", Format::csv, "t.csv").text, "a | b\nc | d");
  EXPECT_EQ(load_document("a,b\r\nc,d\r\n", Format::csv, "t.csv").text, "a | b\nc | d");
}

TEST(LoadDocument, EmptyInputIsRejected) {
  EXPECT_EQ(kind_of_failure([] { load_document("", Format::plain_text, "e.txt"); }),
            ErrorKind::empty_document);
}

TEST(LoadDocument, InvalidUtf8NamesByteOffset) {
  try {
    load_document("ok\xFFnot", Format::plain_text, "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::decode);
    EXPECT_NE(std::string(e.what()).find("byte offset 2"), std::string::npos) << e.what();
  }
}

TEST(LoadDocument, DocIdIsBasenamePlusContentDigest) {
  const Document d = load_document("hello world", Format::plain_text, "/srv/manuals/hst guide.txt");
  EXPECT_EQ(d.doc_id, "hst_guide.txt-" + sha256_hex("hello world").substr(0, 12));
  const Document again = load_document("hello world", Format::plain_text, "/srv/manuals/hst guide.txt");
  EXPECT_EQ(d.doc_id, again.doc_id);
  const Document other = load_document("hello world!", Format::plain_text, "/srv/manuals/hst guide.txt");
  EXPECT_NE(d.doc_id, other.doc_id);
}

TEST(LoadDocument, DigestIsTakenAfterNormalisation) {
  EXPECT_EQ(load_document("a\r\nb", Format::plain_text, "x").doc_id,
            load_document("a\nb", Format::plain_text, "x").doc_id);
}

TEST(FlattenCsv, QuotedFields) {
  EXPECT_EQ(flatten_csv("\"a,1\",\"say \"\"hi\"\"\"\n\"multi\nline\",z"),
            "a,1 | say \"hi\"\nmulti\nline | z");
  EXPECT_EQ(flatten_csv("h1,h2\n,\n"), "h1 | h2\n | ");
}

TEST(FlattenCsv, UnterminatedQuoteIsDecodeError) {
  EXPECT_EQ(kind_of_failure([] { flatten_csv("\"open,x"); }), ErrorKind::decode);
}

TEST(Format, NamesRoundTrip) {
  for (Format f : {Format::plain_text, Format::markdown, Format::csv}) {
    EXPECT_EQ(parse_format(to_string(f)), f);
  }
  EXPECT_EQ(parse_format("md"), Format::markdown);
  EXPECT_EQ(kind_of_failure([] { parse_format("pdf"); }), ErrorKind::invalid_argument);
}

TEST(ChunkId, OrdinalIsZeroPadded) {
  EXPECT_EQ(make_chunk_id("d-1", 7), "d-1#000007");
  EXPECT_EQ(make_chunk_id("d-1", 1234567), "d-1#1234567");
}

}  // namespace
}  // namespace lkb::corpus
