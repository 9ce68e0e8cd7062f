#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include "pmr/evaluation.hpp"
#include "test_support.hpp"

using pmr::testing::fixture_path;
using pmr::testing::read_file;
using pmr::testing::TempDir;
using pmr::testing::write_file;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result pmr_cli(const std::string& args, bool merge_stderr = true) {
  const std::string command = std::string(PMR_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string synthetic_flags(const TempDir& dir) {
  return "--corpus " + quoted(fixture_path("synthetic/corpus.ndjson")) + " --ontology " +
         quoted(fixture_path("synthetic/ontology")) + " --topics " + quoted(fixture_path("synthetic/topics.json")) +
         " --index " + quoted(dir / "index.snap") + " --no-labeler";
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(pmr_cli("--help").code, 0);
  EXPECT_EQ(pmr_cli("").code, 2);
  EXPECT_EQ(pmr_cli("frobnicate").code, 2);
  EXPECT_EQ(pmr_cli("--k -3 run").code, 2);
}

TEST(Cli, MissingInputsExitTwo) {
  TempDir dir;
  auto r = pmr_cli("index --corpus " + quoted(dir / "none.ndjson") + " --index " + quoted(dir / "i.snap"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("none.ndjson"), std::string::npos) << r.output;

  r = pmr_cli("--config " + quoted(dir / "missing.json") + " run");
  EXPECT_EQ(r.code, 2);
  r = pmr_cli("evaluate --qrels " + quoted(dir / "q.txt") + " --run " + quoted(fixture_path("metrics/case01.run")));
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, BadConfigExitsTwo) {
  TempDir dir;
  write_file(dir / "bad.json", R"({"ranking": {"kay": 3}})");
  const auto r = pmr_cli("--config " + quoted(dir / "bad.json") + " run");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("kay"), std::string::npos) << r.output;
}

TEST(Cli, IndexRunEvaluateFlow) {
  TempDir dir;
  const auto flags = synthetic_flags(dir);
  auto r = pmr_cli(flags + " index");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("N=145"), std::string::npos) << r.output;

  r = pmr_cli(flags + " --run " + quoted(dir / "run.txt") + " --tag clitest run");
  ASSERT_EQ(r.code, 0) << r.output;
  std::istringstream run_in(read_file(dir / "run.txt"));
  const auto run = pmr::read_run(run_in);
  EXPECT_TRUE(run.issues.empty());
  ASSERT_FALSE(run.run.topics.empty());
  EXPECT_EQ(run.run.topics.begin()->second.front().tag, "clitest");

  // Judge every retrieved article of topic 1 relevant.
  std::string qrels;
  for (const auto& e : run.run.topics.at("1")) qrels += "1 0 " + e.pmid + " 2\n";
  write_file(dir / "qrels.txt", qrels);
  r = pmr_cli("evaluate --qrels " + quoted(dir / "qrels.txt") + " --run " + quoted(dir / "run.txt") + " --report " +
              quoted(dir / "report.txt"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(read_file(dir / "report.txt").find("ndcg\tall\t1.0000"), std::string::npos) << read_file(dir / "report.txt");

  r = pmr_cli(flags + " --tag clitest run", false);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.output, read_file(dir / "run.txt"));
}

TEST(Cli, ParallelRunIsByteIdentical) {
  TempDir dir;
  const auto flags = synthetic_flags(dir);
  ASSERT_EQ(pmr_cli(flags + " index").code, 0);
  ASSERT_EQ(pmr_cli(flags + " --jobs 1 --run " + quoted(dir / "a.txt") + " run").code, 0);
  ASSERT_EQ(pmr_cli(flags + " --jobs 4 --run " + quoted(dir / "b.txt") + " run").code, 0);
  EXPECT_EQ(read_file(dir / "a.txt"), read_file(dir / "b.txt"));
  EXPECT_FALSE(read_file(dir / "a.txt").empty());
}

TEST(Cli, SearchAndExpand) {
  TempDir dir;
  const auto flags = synthetic_flags(dir);
  ASSERT_EQ(pmr_cli(flags + " index").code, 0);
  auto r = pmr_cli(flags + " search --topic 1 --limit 2 --explain");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("query:"), std::string::npos);
  r = pmr_cli(flags + " search --profile '{\"disease\": \"Melanoma\", \"genes\": [\"BRAF\"]}'");
  EXPECT_EQ(r.code, 0) << r.output;
  r = pmr_cli(flags + " search");
  EXPECT_EQ(r.code, 2);
  r = pmr_cli(flags + " expand");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("\"disease_terms\""), std::string::npos);
}

TEST(Cli, ConfigFileWithOverrides) {
  TempDir dir;
  write_file(dir / "pmr.json", "{\"paths\": {\"corpus\": \"" + fixture_path("synthetic/corpus.ndjson").string() +
                                   "\", \"index\": \"idx.snap\"}}");
  const auto r = pmr_cli("--config " + quoted(dir / "pmr.json") + " index");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "idx.snap"));
}

}  // namespace
