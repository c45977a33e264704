/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "agl/audio.hpp"
#include "agl/io.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace agl::cli {
namespace {

namespace fs = std::filesystem;
using agl::testing::ReadText;
using agl::testing::TempDir;
using agl::testing::WriteText;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome Agl(std::vector<std::string> args) {
  std::ostringstream out, err;
  auto parsed = ParseArgs(args, out, err);
  if (!parsed.command) return {parsed.exit_code, out.str(), err.str()};
  const int code = Execute(*parsed.command, out, err);
  return {code, out.str(), err.str()};
}

std::string P(const fs::path& p) { return p.string(); }

// Writes fractions, judges and errors for the 12-sample fixture.
void WriteLocInputs(const TempDir& dir) {
  std::string fr, js, er;
  for (const auto& f : agl::testing::LocFractions()) fr += tags::FractionsToJson(f) + "\n";
  for (const auto& j : agl::testing::LocJudges()) {
    nlohmann::ordered_json o;
    o["sample_id"] = j.sample_id;
    o["judge_id"] = j.judge_id;
    o["scores"] = j.scores;
    js += o.dump() + "\n";
  }
  for (const auto& [id, e] : agl::testing::LocErrors()) {
    nlohmann::ordered_json o;
    o["sample_id"] = id;
    o["distance_error_km"] = e;
    er += o.dump() + "\n";
  }
  WriteText(dir / "fractions.jsonl", fr);
  WriteText(dir / "judges.jsonl", js);
  WriteText(dir / "errors.jsonl", er);
}

TEST(ParseArgsTest, Examples) {
  std::ostringstream out, err;
  auto ev = ParseArgs({"evaluate", "--manifest", "m.jsonl", "--predictions", "p.jsonl", "--out", "r"},
                      out, err);
  ASSERT_TRUE(ev.command);
  const auto& e = std::get<EvaluateCmd>(ev.command->verb);
  EXPECT_EQ(e.manifest, "m.jsonl");
  EXPECT_EQ(e.predictions, "p.jsonl");
  EXPECT_EQ(e.out, "r");
  EXPECT_EQ(e.tau_km, (std::vector<double>{1, 10, 500}));

  auto bad = ParseArgs({"frobnicate"}, out, err);
  EXPECT_FALSE(bad.command);
  EXPECT_EQ(bad.exit_code, kExitUsage);

  auto at = ParseArgs({"attribute", "--alpha", "0.3333", "--gamma-km", "1000", "--theta", "1"}, out, err);
  ASSERT_TRUE(at.command);
  const auto& a = std::get<AttributeCmd>(at.command->verb);
  EXPECT_EQ(*a.alpha, 0.3333);
  EXPECT_EQ(*a.gamma_km, 1000.0);
  EXPECT_EQ(*a.theta, 1.0);

  EXPECT_EQ(ParseArgs({"evaluate", "--bogus"}, out, err).exit_code, kExitUsage);
  EXPECT_EQ(ParseArgs({}, out, err).exit_code, kExitUsage);
}

TEST(ParseArgsTest, GreekTauList) {
  std::ostringstream out, err;
  auto r = ParseArgs({"evaluate", "--\xCF\x84-list", "1", "100", "1000"}, out, err);
  ASSERT_TRUE(r.command);
  EXPECT_EQ(std::get<EvaluateCmd>(r.command->verb).tau_km, (std::vector<double>{1, 100, 1000}));
}

TEST(ParseArgsTest, HelpExitsZero) {
  const auto r = Agl({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* verb : {"filter", "fractions", "attribute", "score", "select", "evaluate",
                           "baseline", "report", "serve"}) {
    EXPECT_NE(r.out.find(verb), std::string::npos) << verb;
  }
}

TEST(ParseArgsTest, ConfigFileWithCommandLinePrecedence) {
  TempDir dir;
  WriteText(dir / "cfg.json",
            R"({"model": "from-config", "evaluate": {"tau_list": [2, 20], "manifest": "cfg.jsonl"}, "report": {"format": "csv"}})");
  std::ostringstream out, err;
  auto r = ParseArgs({"evaluate", "--config", P(dir / "cfg.json"), "--manifest", "cli.jsonl"}, out, err);
  ASSERT_TRUE(r.command) << err.str();
  const auto& e = std::get<EvaluateCmd>(r.command->verb);
  EXPECT_EQ(e.manifest, "cli.jsonl");
  EXPECT_EQ(e.model, "from-config");
  EXPECT_EQ(e.tau_km, (std::vector<double>{2, 20}));

  WriteText(dir / "bad.json", R"({"bogus": 1})");
  EXPECT_EQ(ParseArgs({"evaluate", "--config", P(dir / "bad.json")}, out, err).exit_code, kExitUsage);
  EXPECT_EQ(ParseArgs({"evaluate", "--config", P(dir / "none.json")}, out, err).exit_code, kExitUsage);
}

TEST(ExecuteTest, MissingInputIsUsageError) {
  TempDir dir;
  const auto r = Agl({"evaluate", "--manifest", P(dir / "none.jsonl"), "--predictions",
                      P(dir / "none.jsonl"), "--out", P(dir / "out")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_EQ(Agl({"attribute"}).code, kExitUsage);
}

TEST(ExecuteTest, RuntimeErrorsCarryCodes) {
  TempDir dir;
  WriteText(dir / "m.jsonl", "{not json\n");
  WriteText(dir / "p.jsonl", "");
  const auto r = Agl({"evaluate", "--manifest", P(dir / "m.jsonl"), "--predictions",
                      P(dir / "p.jsonl"), "--out", P(dir / "out")});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_EQ(r.err.rfind("error[11] ", 0), 0u) << r.err;
  EXPECT_FALSE(fs::exists(dir / "out" / "summary.json"));
}

TEST(ExecuteTest, FilterOverFixtureDirectory) {
  TempDir dir;
  fs::create_directories(dir / "wav" / "nested");
  for (const auto& fx : agl::testing::FilterFixtureSet()) {
    audio::WriteWavFile(dir / "wav" / (fx.name == "chirp" ? "nested/chirp.wav" : fx.name + ".wav"), fx.clip);
  }
  const auto r = Agl({"filter", "--input", P(dir / "wav"), "--out", P(dir / "filters.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto lines = io::SplitLines(ReadText(dir / "filters.jsonl"));
  ASSERT_EQ(lines.size(), 5u);
  for (const auto& l : lines) {
    const auto j = nlohmann::json::parse(l.text);
    const bool is_chirp = j["file"].get<std::string>().find("chirp") != std::string::npos;
    EXPECT_EQ(j["passed"]["overall"].get<bool>(), is_chirp) << l.text;
  }
  const auto again = Agl({"filter", "--input", P(dir / "wav"), "--out", P(dir / "filters2.jsonl")});
  EXPECT_EQ(ReadText(dir / "filters.jsonl"), ReadText(dir / "filters2.jsonl"));
  EXPECT_EQ(Agl({"filter", "--input", P(dir / "wav"), "--out", P(dir / "x.jsonl"), "--sf-max", "2"}).code,
            kExitUsage);
}

TEST(ExecuteTest, FractionsFromTagTracks) {
  TempDir dir;
  fs::create_directories(dir / "tags");
  WriteText(dir / "manifest.jsonl",
            R"({"sample_id":"a","latitude":1,"longitude":2,"city":"Accra","country":"Ghana","continent":"Africa","has_speech":true,"audio_path":"a.wav","duration_s":10})"
            "\n");
  WriteText(dir / "tags" / "a.jsonl",
            "{\"category\":\"Speech\",\"start_s\":0,\"end_s\":6}\n{\"category\":\"Speech\",\"start_s\":4,\"end_s\":10}\n"
            "{\"category\":\"Wind\",\"start_s\":0,\"end_s\":2.5}\n");
  const auto r = Agl({"fractions", "--manifest", P(dir / "manifest.jsonl"), "--tags-dir",
                      P(dir / "tags"), "--out", P(dir / "fr.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto fr = tags::LoadFractions(dir / "fr.jsonl");
  ASSERT_EQ(fr.size(), 1u);
  EXPECT_EQ(fr[0].at("Speech"), 1.0);
  EXPECT_EQ(fr[0].at("Wind"), 0.25);
}

TEST(ExecuteTest, AttributeScoreSelectMatchesOracle) {
  TempDir dir;
  WriteLocInputs(dir);
  auto r = Agl({"attribute", "--fractions", P(dir / "fractions.jsonl"), "--judges",
                P(dir / "judges.jsonl"), "--errors", P(dir / "errors.jsonl"), "--out",
                P(dir / "attr.jsonl"), "--consistency-out", P(dir / "consistency.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto attrs = loc::LoadAttributions(dir / "attr.jsonl");
  ASSERT_EQ(attrs.size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "consistency.json"));
  r = Agl({"score", "--fractions", P(dir / "fractions.jsonl"), "--attribution", P(dir / "attr.jsonl"),
           "--out", P(dir / "scores.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = Agl({"select", "--scores", P(dir / "scores.jsonl"), "--out", P(dir / "selected.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadText(dir / "selected.txt"), "s08\ns12\n");
  r = Agl({"select", "--scores", P(dir / "scores.jsonl"), "--out", P(dir / "sel0.txt"), "--theta", "0.3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadText(dir / "sel0.txt"), "s01\ns03\ns08\ns10\ns12\n");
}

TEST(ExecuteTest, EvaluateWithMissingPredictionWarns) {
  TempDir dir;
  auto fx = agl::testing::TwentySampleFixture();
  WriteText(dir / "m.jsonl", fx.manifest_jsonl);
  const auto lines = io::SplitLines(fx.predictions_jsonl);
  std::string preds;
  for (std::size_t i = 1; i < lines.size(); ++i) preds += lines[i].text + "\n";
  WriteText(dir / "p.jsonl", preds);
  const auto r = Agl({"evaluate", "--manifest", P(dir / "m.jsonl"), "--predictions", P(dir / "p.jsonl"),
                      "--out", P(dir / "out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.err.find("e01"), std::string::npos);
  for (const char* f : {"records.jsonl", "summary.json", "report.csv", "report.md", "percentiles.csv",
                        "confusion.csv", "confusion.md"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const auto s = eval::ParseSummaryJson(ReadText(dir / "out" / "summary.json"));
  EXPECT_EQ(s.reject_rate, 0.2);
}

TEST(ExecuteTest, BaselineThenReport) {
  TempDir dir;
  WriteText(dir / "m.jsonl", agl::testing::TwentySampleFixture().manifest_jsonl);
  ASSERT_EQ(Agl({"baseline", "--manifest", P(dir / "m.jsonl"), "--out", P(dir / "b1.jsonl"), "--seed", "7"}).code,
            kExitOk);
  ASSERT_EQ(Agl({"baseline", "--manifest", P(dir / "m.jsonl"), "--out", P(dir / "b2.jsonl"), "--seed", "7"}).code,
            kExitOk);
  EXPECT_EQ(ReadText(dir / "b1.jsonl"), ReadText(dir / "b2.jsonl"));
  ASSERT_EQ(Agl({"evaluate", "--manifest", P(dir / "m.jsonl"), "--predictions", P(dir / "b1.jsonl"),
                 "--out", P(dir / "out"), "--model", "RANDOM"})
                .code,
            kExitOk);
  const auto md = Agl({"report", "--summary", P(dir / "out" / "summary.json"), "--model", "RANDOM"});
  ASSERT_EQ(md.code, kExitOk) << md.err;
  EXPECT_NE(md.out.find("| RANDOM |"), std::string::npos) << md.out;
  EXPECT_EQ(Agl({"report", "--summary", P(dir / "out" / "summary.json"), "--format", "xml"}).code,
            kExitRuntime);
  const auto pct = Agl({"report", "--summary", P(dir / "out" / "summary.json"), "--table", "percentiles",
                        "--format", "csv", "--out", P(dir / "pct.csv")});
  ASSERT_EQ(pct.code, kExitOk) << pct.err;
  EXPECT_TRUE(fs::exists(dir / "pct.csv"));
}

TEST(ExecuteTest, FailedCommitLeavesNoPartialOutputs) {
  TempDir dir;
  auto fx = agl::testing::TwentySampleFixture();
  WriteText(dir / "m.jsonl", fx.manifest_jsonl);
  WriteText(dir / "p.jsonl", fx.predictions_jsonl);
  // A directory where the last output file should go makes its rename fail.
  fs::create_directories(dir / "out" / "confusion.md" / "blocker");
  const auto r = Agl({"evaluate", "--manifest", P(dir / "m.jsonl"), "--predictions", P(dir / "p.jsonl"),
                      "--out", P(dir / "out")});
  EXPECT_NE(r.code, kExitOk);
  for (const auto& e : fs::directory_iterator(dir / "out")) {
    EXPECT_EQ(e.path().filename(), "confusion.md") << e.path();
  }
}

TEST(ExecuteTest, VerbsAreIdempotent) {
  TempDir dir;
  WriteLocInputs(dir);
  auto fx = agl::testing::TwentySampleFixture();
  WriteText(dir / "m.jsonl", fx.manifest_jsonl);
  WriteText(dir / "p.jsonl", fx.predictions_jsonl);
  for (const char* run : {"1", "2"}) {
    const std::string r = run;
    ASSERT_EQ(Agl({"attribute", "--fractions", P(dir / "fractions.jsonl"), "--judges", P(dir / "judges.jsonl"),
                   "--errors", P(dir / "errors.jsonl"), "--out", P(dir / ("attr" + r))})
                  .code,
              kExitOk);
    ASSERT_EQ(Agl({"evaluate", "--manifest", P(dir / "m.jsonl"), "--predictions", P(dir / "p.jsonl"),
                   "--out", P(dir / ("ev" + r))})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(ReadText(dir / "attr1"), ReadText(dir / "attr2"));
  for (const auto& e : fs::directory_iterator(dir / "ev1")) {
    EXPECT_EQ(ReadText(e.path()), ReadText(dir / "ev2" / e.path().filename())) << e.path();
  }
}

}  // namespace
}  // namespace agl::cli
