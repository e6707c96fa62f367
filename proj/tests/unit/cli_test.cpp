// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "lkb/service.hpp"
#include "temp_dir.hpp"
#include "toy_corpus.hpp"

namespace lkb::cli {
namespace {

using nlohmann::json;
using lkb::testing::TempDir;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  Outcome lkb(std::vector<std::string> args) {
    args.insert(args.begin(), {"lkb", "--data-dir", (dir_ / "kb").string()});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err, no_env);
    return {code, out.str(), err.str()};
  }

  std::vector<std::string> write_toys() {
    std::vector<std::string> paths;
    for (const auto& d : lkb::testing::toy_documents()) {
      const auto path = dir_ / d.source;
      std::ofstream(path, std::ios::binary) << d.content;
      paths.push_back(path.string());
    }
    return paths;
  }

  service::ServiceConfig same_config() const {
    return service::load_config(std::nullopt, no_env, {{"data.dir", (dir_ / "kb").string()}});
  }

  static std::optional<std::string> no_env(const std::string&) { return std::nullopt; }

  TempDir dir_;
};

TEST_F(CliTest, IngestSearchAskRoundTrip) {
  std::vector<std::string> args{"--json", "ingest"};
  for (const auto& p : write_toys()) args.push_back(p);
  const Outcome ingest = lkb(args);
  ASSERT_EQ(ingest.code, 0) << ingest.err;
  const json ingested = json::parse(ingest.out);
  ASSERT_EQ(ingested.size(), 3u);

  const Outcome search = lkb({"--json", "search", "gearbox oil temperature", "--k", "3"});
  ASSERT_EQ(search.code, 0) << search.err;
  auto kb = service::KnowledgeBase::open(same_config());
  const std::string api =
      service::handle_request(*kb, "POST", "/v1/query", R"({"query":"gearbox oil temperature","k":3})").body;
  EXPECT_EQ(json::parse(search.out), json::parse(api));

  const Outcome ask = lkb({"--json", "ask", "gearbox oil temperature", "--k", "2", "--mock-llm"});
  ASSERT_EQ(ask.code, 0) << ask.err;
  const std::string api_ask =
      service::handle_request(*kb, "POST", "/v1/ask", R"({"query":"gearbox oil temperature","k":2})").body;
  EXPECT_EQ(json::parse(ask.out), json::parse(api_ask));
}

TEST_F(CliTest, HumanReadableOutput) {
  std::vector<std::string> args{"ingest"};
  for (const auto& p : write_toys()) args.push_back(p);
  const Outcome ingest = lkb(args);
  ASSERT_EQ(ingest.code, 0) << ingest.err;
  EXPECT_NE(ingest.out.find(" chunks"), std::string::npos);
  EXPECT_NE(lkb(args).out.find("(unchanged)"), std::string::npos);

  const Outcome search = lkb({"search", "slip ring"});
  ASSERT_EQ(search.code, 0);
  EXPECT_EQ(search.out.rfind("rank  score", 0), 0u);

  const Outcome ask = lkb({"ask", "slip ring", "--mock-llm"});
  ASSERT_EQ(ask.code, 0);
  EXPECT_EQ(ask.out.rfind("MOCK-ANSWER sha=", 0), 0u);
  EXPECT_NE(ask.out.find("evidence"), std::string::npos);
}

TEST_F(CliTest, IndexRebuildAndStats) {
  std::vector<std::string> args{"ingest"};
  for (const auto& p : write_toys()) args.push_back(p);
  ASSERT_EQ(lkb(args).code, 0);
  const Outcome rebuilt = lkb({"--json", "index", "rebuild", "--mode", "ivf", "--nlist", "3"});
  ASSERT_EQ(rebuilt.code, 0) << rebuilt.err;
  EXPECT_EQ(json::parse(rebuilt.out)["index_kind"], "ivf");
  const Outcome stats = lkb({"--json", "index", "stats"});
  EXPECT_EQ(json::parse(stats.out), json::parse(rebuilt.out));
  const Outcome text = lkb({"index", "stats"});
  EXPECT_NE(text.out.find("nlist       3"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  const Outcome missing = lkb({"ingest", (dir_ / "nope.txt").string()});
  EXPECT_EQ(missing.code, kExitRuntime);
  EXPECT_NE(missing.err.find("nope.txt"), std::string::npos);

  EXPECT_EQ(lkb({"search", "x", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(lkb({}).code, kExitUsage);
  EXPECT_EQ(lkb({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(lkb({"search"}).code, kExitUsage);
  EXPECT_EQ(lkb({"search", "x"}).code, kExitRuntime);  // empty knowledge base
  EXPECT_EQ(lkb({"ingest", "--format", "pdf", write_toys()[0]}).code, kExitRuntime);
  EXPECT_EQ(lkb({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace lkb::cli
