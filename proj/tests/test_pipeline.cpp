#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mathcast/cli.hpp"
#include "mathcast/pipeline.hpp"
#include "mathcast/reporting.hpp"
#include "support.hpp"

namespace mathcast {
namespace {

using testing::registry;

BackendFactory builtin() {
  return [] { return std::make_unique<BuiltinBackend>(registry()); };
}

std::vector<CaseResult> run(const std::vector<CorpusLine>& lines, std::size_t parallelism = 1) {
  PipelineOptions o;
  o.parallelism = parallelism;
  return run_pipeline(lines, registry(), o, builtin());
}

std::string jsonl(const std::vector<CaseResult>& rs) {
  std::string out;
  for (const CaseResult& r : rs) out += case_to_json(r).dump() + "\n";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Pipeline, EmptyCorpus) {
  RunSummary s = summarize(0, run({}));
  EXPECT_TRUE(s.violations().empty());
  EXPECT_EQ(summary_to_json(s)["cases_after_split"], 0);
  EXPECT_EQ(s.translated + s.filtered + s.translation_errors, 0u);
}

TEST(Pipeline, PlainRelationIsFiltered) {
  CorpusLine l;
  l.id = "zx";
  l.latex = "z = x";
  std::vector<CaseResult> rs = run({l});
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].status, CaseStatus::kSkipped);
  RunSummary s = summarize(1, rs);
  EXPECT_EQ(s.filtered, 1u);
  EXPECT_EQ(s.filtered_by_reason.at("no-semantic-math"), 1u);
  EXPECT_EQ(s.lines_skipped, 1u);
}

TEST(Pipeline, ErrorBuckets) {
  std::vector<CorpusLine> lines = load_corpus(MATHCAST_SOURCE_DIR "/tests/data/error_cases.jsonl");
  std::vector<CaseResult> rs = run(lines);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].status, CaseStatus::kTranslationError);
  EXPECT_EQ(rs[0].bucket, ErrorBucket::kMissingMacro);
  // definitions that never reach a fixpoint reject the case
  EXPECT_EQ(rs[1].status, CaseStatus::kTranslationError);
  EXPECT_EQ(rs[1].bucket, ErrorBucket::kParseFailure);
  EXPECT_TRUE(summarize(lines.size(), rs).violations().empty());
}

TEST(Pipeline, ConservationOverFixtures) {
  std::vector<CaseResult> rs = run(testing::fixtures());
  RunSummary s = summarize(testing::fixtures().size(), rs);
  EXPECT_TRUE(s.violations().empty());
  EXPECT_EQ(s.lines_in, s.lines_kept + s.lines_skipped);
  EXPECT_GE(s.cases_after_split, s.lines_in);
  EXPECT_EQ(s.filtered + s.translated + s.translation_errors, s.cases_after_split);
  EXPECT_EQ(s.numeric_verified + s.partial + s.total_fail + s.timeout + s.error + s.skipped_numeric,
            s.cases_after_split);
}

TEST(Pipeline, GoldenSummary) {
  std::vector<CaseResult> rs = run(testing::fixtures());
  nlohmann::json got = summary_to_json(summarize(testing::fixtures().size(), rs));
  nlohmann::json want = nlohmann::json::parse(slurp(MATHCAST_SOURCE_DIR "/tests/data/golden_summary.json"));
  EXPECT_EQ(got, want) << got.dump(2);
}

TEST(Pipeline, SkippedCasesKeepTranslations) {
  std::vector<CaseResult> rs = run({testing::fixture("chain-no-macro")});
  ASSERT_EQ(rs.size(), 2u);
  for (const CaseResult& r : rs) {
    ASSERT_TRUE(r.translations.count("mathematica"));
    EXPECT_TRUE(r.translations.at("mathematica").output.has_value());
  }
}

TEST(Pipeline, ParallelRunsMatchSerial) {
  std::string serial = jsonl(run(testing::fixtures(), 1));
  EXPECT_EQ(jsonl(run(testing::fixtures(), 3)), serial);
  EXPECT_EQ(jsonl(run(testing::fixtures(), 1)), serial);
}

TEST(Pipeline, CoverageOfFixtures) {
  CoverageReport c = check_coverage(testing::fixtures(), registry(), {"maple", "mathematica"});
  EXPECT_DOUBLE_EQ(c.percent, 100.0);
  EXPECT_TRUE(c.unknown.empty());
  std::vector<CorpusLine> bad = load_corpus(MATHCAST_SOURCE_DIR "/tests/data/error_cases.jsonl");
  CoverageReport u = check_coverage(bad, registry(), {"mathematica"});
  ASSERT_TRUE(u.unknown.count("\\LambertW"));
  EXPECT_LT(u.percent, 100.0);
}

TEST(Reports, FilesWritten) {
  std::filesystem::path dir = std::filesystem::path(::testing::TempDir()) / "mathcast-reports";
  std::filesystem::remove_all(dir);
  std::vector<CaseResult> rs = run({testing::fixture("jacobi-sum")});
  write_reports(dir.string(), rs, summarize(1, rs));
  std::string cases = slurp(dir / "cases.jsonl");
  nlohmann::json j = nlohmann::json::parse(cases.substr(0, cases.find('\n')));
  EXPECT_EQ(j["id"], "jacobi-sum#0");
  EXPECT_EQ(j["status"], "verified");
  EXPECT_EQ(j["schema"], "1");
  EXPECT_NE(slurp(dir / "summary.txt").find("numeric_verified"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "summary.json"))["numeric_verified"], 1);
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::vector<const char*> argv = {"mathcast"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

TEST(Cli, TranslateGolden) {
  std::string out;
  EXPECT_EQ(cli({"translate", "--expr", "\\Hurwitzzeta'@{s^2}{a}", "--cas", "maple"}, &out), 0);
  EXPECT_EQ(nlohmann::json::parse(out)["text"],
            "subs(temp=(s)^(2),diff(Zeta(0,temp,a),temp$(1)))");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"translate", "--expr", "\\LambertW@{x}"}), 1);
  EXPECT_EQ(cli({"translate", "--expr", "x", "--registry", "/nonexistent/registry.txt"}), 2);
  EXPECT_EQ(cli({"verify", "--corpus", testing::fixtures_path(), "--cap", "0"}), 2);
  EXPECT_EQ(cli({"verify", "--no-such-flag"}), 2);
  std::string out_dir = ::testing::TempDir() + "mathcast-cli-out";
  EXPECT_EQ(cli({"verify", "--corpus", testing::fixtures_path(), "--backend",
                 "bridge:/nonexistent/cas", "--out", out_dir}),
            3);
  EXPECT_EQ(cli({"check-coverage", "--corpus", testing::fixtures_path()}), 0);
  EXPECT_EQ(cli({"check-coverage", "--corpus", MATHCAST_SOURCE_DIR "/tests/data/error_cases.jsonl"}), 1);
}

TEST(Cli, VerifyWritesReports) {
  std::string dir = ::testing::TempDir() + "mathcast-cli-verify";
  std::filesystem::remove_all(dir);
  std::string out;
  EXPECT_EQ(cli({"verify", "--corpus", testing::fixtures_path(), "--out", dir, "--parallelism", "1"}, &out), 0);
  EXPECT_NE(out.find("cases_after_split"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / "cases.jsonl"));
}

}  // namespace
}  // namespace mathcast
