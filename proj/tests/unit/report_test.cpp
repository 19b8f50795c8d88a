/*
 * Copyright 2026 The Singulock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "json.hpp"
#include "singulock/corpus.hpp"
#include "singulock/report.hpp"
#include "support.hpp"

namespace singulock {
namespace {

using Json = nlohmann::json;
using testing::corpus_dir;

Analysis analyze_fixture(const char* name, AnalysisOptions opt = {}) {
  return analyze(load_fixture(name, corpus_dir()).program, opt);
}

TEST(ExitCode, CorpusValues) {
  EXPECT_EQ(exit_code(analyze_fixture("FX-DIAMOND")), kExitClean);
  EXPECT_EQ(exit_code(analyze_fixture("FX-PING")), kExitLivelock);
  EXPECT_EQ(exit_code(analyze_fixture("FX-PHIL2")), kExitDeadlock);
  EXPECT_EQ(exit_code(analyze_fixture("FX-RETRY")), kExitBoth);
  EXPECT_EQ(exit_code(analyze_fixture("FX-CHOICE")), kExitClean);
}

TEST(ExitCode, FaultOnly) {
  Program p = testing::parse_or_die("res r; main = skip || (release(r); skip)");
  EXPECT_EQ(exit_code(analyze(p, {})), kExitFaultOnly);
}

TEST(ExitCode, TruncationWins) {
  AnalysisOptions opt;
  opt.bounds.max_states = 5;
  EXPECT_EQ(exit_code(analyze_fixture("FX-PHIL2", opt)), kExitBound);
}

TEST(Analyze, KmaxDefaultsToDeepestVertex) {
  EXPECT_EQ(analyze_fixture("FX-DIAMOND").k_max, 2u);
  AnalysisOptions opt;
  opt.k_max = 1;
  Analysis a = analyze_fixture("FX-DIAMOND", opt);
  EXPECT_EQ(a.k_max, 1u);
  EXPECT_TRUE(a.persistence.empty());
}

TEST(Analyze, FuturesFromRootAndAttractors) {
  Analysis a = analyze_fixture("FX-PHIL2");
  ASSERT_EQ(a.futures.size(), 2u);
  EXPECT_EQ(a.futures[0].origin, a.graph.root());
  ASSERT_TRUE(a.futures[1].classes.has_value());
  EXPECT_TRUE(a.futures[1].classes->collapse_in_attractor);
}

TEST(ReportJson, SectionsAndExitSoundness) {
  for (const auto& name : testing::corpus_names()) {
    SCOPED_TRACE(name);
    AnalysisOptions opt;
    opt.input_name = name;
    Analysis a = analyze(load_fixture(name, corpus_dir()).program, opt);
    Json r = Json::parse(report_json(a, opt));
    EXPECT_EQ(r["format"], "singulock-report");
    EXPECT_EQ(r["version"], kReportVersion);
    EXPECT_EQ(r["header"]["input"], name);
    EXPECT_TRUE(r["header"]["seed"].is_null());
    for (const char* key : {"graph-stats", "attractors", "basins", "fault-traps", "fair-analysis",
                            "homology", "fair-homology", "persistence", "future-classes",
                            "severity", "caveats", "exit_code"})
      EXPECT_TRUE(r.contains(key)) << key;

    const int code = r["exit_code"];
    EXPECT_EQ(code, exit_code(a));
    std::size_t stuck = 0;
    for (const auto& at : r["attractors"]) stuck += at["kind"] == "stuck";
    const bool live = r["fair-homology"]["livelock_present"];
    EXPECT_EQ(code == kExitDeadlock || code == kExitBoth, stuck > 0);
    EXPECT_EQ(code == kExitLivelock || code == kExitBoth, live);
    EXPECT_EQ(r["fair-homology"]["witnesses"].size(), a.livelocks.witnesses.size());
  }
}

TEST(ReportJson, PhilosophersNamesOneStuckAttractor) {
  AnalysisOptions opt;
  Analysis a = analyze_fixture("FX-PHIL2", opt);
  Json r = Json::parse(report_json(a, opt));
  ASSERT_EQ(r["attractors"].size(), 1u);
  EXPECT_EQ(r["attractors"][0]["kind"], "stuck");
  EXPECT_EQ(r["basins"][0]["fraction"], "1/23");
}

TEST(ReportJson, SeedIsRecorded) {
  AnalysisOptions opt;
  opt.seed = "42";
  Json r = Json::parse(report_json(analyze_fixture("FX-CHOICE", opt), opt));
  EXPECT_EQ(r["header"]["seed"], "42");
}

TEST(ReportJson, Deterministic) {
  for (const auto& name : testing::corpus_names()) {
    AnalysisOptions opt;
    Program p = load_fixture(name, corpus_dir()).program;
    EXPECT_EQ(report_json(analyze(p, opt), opt), report_json(analyze(p, opt), opt)) << name;
  }
}

TEST(ReportText, MentionsAttractorAndExit) {
  AnalysisOptions opt;
  std::string text = report_text(analyze_fixture("FX-PHIL2", opt), opt);
  EXPECT_NE(text.find("stuck"), std::string::npos);
  EXPECT_NE(text.find("10"), std::string::npos);
}

TEST(GraphJson, ShapeMatchesGraph) {
  Analysis a = analyze_fixture("FX-DIAMOND");
  Json g = Json::parse(graph_json(a.graph));
  EXPECT_EQ(g["version"], kGraphVersion);
  EXPECT_EQ(g["vertices"].size(), 4u);
  EXPECT_EQ(g["edges"].size(), 4u);
  Json k = Json::parse(complex_json(a.complex));
  EXPECT_EQ(k["cells"].size(), 1u);
}

TEST(GraphDot, HasEveryEdge) {
  Analysis a = analyze_fixture("FX-DIAMOND");
  std::string dot = graph_dot(a.graph);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  std::size_t arrows = 0;
  for (std::size_t i = dot.find("->"); i != std::string::npos; i = dot.find("->", i + 2)) ++arrows;
  EXPECT_EQ(arrows, 4u);
}

TEST(DescribeState, ShowsLocksAndStore) {
  Analysis a = analyze_fixture("FX-PING");
  std::string s = describe_state(a.graph.vertex(1).state);
  EXPECT_NE(s.find("x"), std::string::npos) << s;
}

}  // namespace
}  // namespace singulock
