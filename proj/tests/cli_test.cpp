// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <json.hpp>

#include "test_util.hpp"

namespace msbn {
namespace {

using testing::data_path;
using testing::fixture_path;
using testing::fixtures_in;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kFig6 = data_path("fig6.msbn");

TEST(Cli, ValidateFig6) {
  Outcome r = run({"validate", kFig6});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "msbn-report 1\ncommand validate\ninput " + kFig6 + "\n");
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ExitCodesPerErrorClass) {
  const std::pair<const char*, int> cases[] = {
      {"invalid/cycle.msbn", 1},       {"invalid/dsepset.msbn", 1},
      {"invalid/unnormalized.msbn", 1}, {"invalid/missing_cpt.msbn", 1},
      {"invalid/not_tree.msbn", 1},    {"invalid/syntax.msbn", 3},
      {"invalid/cpt_count.msbn", 3},
  };
  for (const auto& [file, code] : cases) {
    Outcome r = run({"validate", fixture_path(file)});
    EXPECT_EQ(r.code, code) << file << ": " << r.err;
    EXPECT_TRUE(r.out.empty()) << file;
    EXPECT_FALSE(r.err.empty()) << file;
    // Other commands refuse the same input with the same code.
    EXPECT_EQ(run({"stats", fixture_path(file)}).code, code) << file;
  }
  EXPECT_EQ(run({"validate", fixture_path("invalid/absent.msbn")}).code, 3);
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"query", kFig6, "--engine", "magic", "--var", "a"}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, InferenceErrors) {
  const std::string contradictory = fixture_path("evidence/contradictory.ev");
  Outcome r = run({"query", kFig6, "--engine", "ext-lazy", "--var", "a", "--evidence", contradictory});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ImpossibleEvidence"), std::string::npos);
  EXPECT_EQ(run({"query", kFig6, "--engine", "ext-ss", "--var", "zz"}).code, 2);
  EXPECT_EQ(run({"query", kFig6, "--engine", "ss", "--var", "a", "--subnet", "G1"}).code, 2);
  EXPECT_EQ(run({"query", kFig6, "--engine", "ext-ss", "--var", "a", "--subnet", "G3"}).code, 2);
  EXPECT_EQ(run({"query", kFig6, "--engine", "ss", "--var", "a", "--budget", "4"}).code, 2);
  EXPECT_EQ(run({"query", kFig6, "--engine", "ss", "--var", "a", "--evidence",
                 fixture_path("evidence/unknown_variable.ev")})
                .code,
            3);
}

TEST(Cli, QueryPosteriorsNormalizedAndEnginesAgree) {
  const std::string ev = fixture_path("evidence/fig6.ev");
  std::vector<std::vector<double>> first;
  for (const char* engine : {"ss", "lazy", "ext-ss", "ext-lazy"}) {
    Outcome r = run({"query", kFig6, "--engine", engine, "--evidence", ev, "--var", "a", "--var",
                 "j", "--var", "m", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["engine"], engine);
    ASSERT_EQ(j["posteriors"].size(), 3u);
    std::vector<std::vector<double>> dists;
    for (const auto& p : j["posteriors"]) {
      const auto d = p["distribution"].get<std::vector<double>>();
      double sum = 0.0;
      for (double x : d) sum += x;
      EXPECT_NEAR(sum, 1.0, 1e-9);
      dists.push_back(d);
    }
    if (first.empty()) first = dists;
    for (std::size_t k = 0; k < dists.size(); ++k) {
      for (std::size_t s = 0; s < dists[k].size(); ++s) {
        EXPECT_NEAR(dists[k][s], first[k][s], 1e-12) << engine;
      }
    }
  }
}

TEST(Cli, RenderingIsDeterministic) {
  const std::vector<std::string> args{"query", kFig6, "--engine", "ext-lazy", "--var", "q",
                                      "--evidence", fixture_path("evidence/fig6.ev")};
  Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"compile", kFig6, "--emit", "-"}).out, run({"compile", kFig6, "--emit", "-"}).out);
}

TEST(Report, HeaderOnlyWithoutQueries) {
  RunReport r;
  r.command = "query";
  EXPECT_EQ(emit_report(r, ReportFormat::kText), "msbn-report 1\ncommand query\n");
  EXPECT_EQ(emit_report(r, ReportFormat::kMachine),
            "{\n  \"format\": \"msbn-report\",\n  \"version\": 1,\n  \"command\": \"query\",\n"
            "  \"posteriors\": []\n}\n");
}

TEST(Report, TextLayout) {
  RunReport r;
  r.command = "query";
  r.input = "x.msbn";
  r.engine = "ext-ss";
  r.evidence_probability = 0.5;
  r.posteriors.push_back({"w", std::string("A"), {"lo", "hi"}, {0.25, 0.75}});
  r.storage = StorageStats{1, 2, 3};
  EXPECT_EQ(emit_report(r, ReportFormat::kText),
            "msbn-report 1\ncommand query\ninput x.msbn\nengine ext-ss\n"
            "evidence-probability 0.5\nposterior w @ A: lo=0.25 hi=0.75\n"
            "storage lazy=1 full=2 hugin=3\n");
}

TEST(Cli, CompileEmitsForestAndStats) {
  Outcome r = run({"compile", kFig6, "--emit", "-"});
  ASSERT_EQ(r.code, 0);
  const Msbn m = testing::fig6();
  EXPECT_EQ(r.out, to_text(m, compile(m)));

  Outcome s = run({"stats", kFig6});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("storage lazy=44 full=88 hugin=120\n"), std::string::npos);

  Outcome d = run({"compile", kFig6, "--dot", "-"});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("graph \"G1*\" {"), std::string::npos);
  EXPECT_NE(d.out.find("[tag=\"fill-in\", style=dashed]"), std::string::npos);
}

TEST(Cli, OracleCheckOnFixtures) {
  const auto files = fixtures_in("random");
  for (std::size_t k = 0; k < 100; ++k) {
    Outcome r = run({"oracle-check", files[k], "--format", "json"});
    ASSERT_EQ(r.code, 0) << files[k] << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LE(j["max_deviation"].get<double>(), 1e-9);
  }
  Outcome strict = run({"oracle-check", kFig6, "--evidence", fixture_path("evidence/fig6.ev"),
                    "--tol", "1e-300"});
  EXPECT_EQ(strict.code, 1);
  EXPECT_NE(strict.err.find("exceeds tolerance"), std::string::npos);
}

TEST(Cli, GenerateReproducesFixtures) {
  Outcome r = run({"generate", "--seed", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, cli::read_file(fixture_path("random/r001.msbn")));
  EXPECT_EQ(run({"generate", "--seed", "1", "--min-vars", "9", "--max-vars", "3"}).code, 3);
}

}  // namespace
}  // namespace msbn
