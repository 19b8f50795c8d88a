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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

namespace singulock {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* file) { return (testing::corpus_dir() / file).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("singulock-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, PhilosophersDeadlock) {
  CliResult r = invoke({"analyze", fixture("phil2.ccs")});
  EXPECT_EQ(r.code, 10);
  EXPECT_NE(r.out.find("\"kind\": \"stuck\""), std::string::npos);
}

TEST_F(CliTest, DiamondClean) { EXPECT_EQ(invoke({"analyze", fixture("diamond.ccs")}).code, 0); }

TEST_F(CliTest, PingLivelock) { EXPECT_EQ(invoke({"analyze", fixture("ping.ccs")}).code, 11); }

TEST_F(CliTest, RetryBoth) { EXPECT_EQ(invoke({"analyze", fixture("retry.ccs")}).code, 12); }

TEST_F(CliTest, MissingFile) {
  CliResult r = invoke({"analyze", (dir_ / "missing.ccs").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, ParseErrorReportsLocation) {
  fs::path bad = dir_ / "bad.ccs";
  std::ofstream(bad) << "main = a!;\n";
  CliResult r = invoke({"analyze", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":1:"), std::string::npos) << r.err;
}

TEST_F(CliTest, FaultOnly) {
  fs::path p = dir_ / "fault.ccs";
  std::ofstream(p) << "res r; main = skip || (release(r); skip)\n";
  EXPECT_EQ(invoke({"analyze", p.string()}).code, 13);
}

TEST_F(CliTest, BoundRefusal) {
  CliResult r = invoke({"analyze", "--max-states", "4", fixture("phil2.ccs")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, BadFlagValues) {
  EXPECT_EQ(invoke({"analyze", "--fairness", "sometimes", fixture("ping.ccs")}).code, 2);
  EXPECT_EQ(invoke({"analyze", "--cells", "hexagons", fixture("ping.ccs")}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  CliResult v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
}

TEST_F(CliTest, ArtifactsWritten) {
  fs::path out = dir_ / "r.json", dot = dir_ / "g.dot", csv = dir_ / "p.csv";
  CliResult r = invoke({"analyze", fixture("ping.ccs"), "-o", out.string(), "--dot", dot.string(), "--csv",
               csv.string()});
  EXPECT_EQ(r.code, 11);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(slurp(out).find("singulock-report"), std::string::npos);
  EXPECT_EQ(slurp(dot).rfind("digraph", 0), 0u);
  EXPECT_EQ(slurp(csv), "birth,death,edges\n1,inf,1\n");
}

TEST_F(CliTest, TextFormat) {
  CliResult r = invoke({"analyze", "--format", "text", fixture("phil2.ccs")});
  EXPECT_EQ(r.code, 10);
  EXPECT_NE(r.out.front(), '{');
  EXPECT_EQ(r.out.find("\"format\""), std::string::npos);
  EXPECT_NE(r.out.find("stuck"), std::string::npos);
}

TEST_F(CliTest, OtherSubcommands) {
  CliResult e = invoke({"explore", fixture("diamond.ccs")});
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("singulock-graph"), std::string::npos);
  CliResult f = invoke({"filtration", "--cells", "squares", fixture("diamond.ccs")});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(f.out, "birth,death,edges\n2,2,0;1;2;3\n");
  CliResult d = invoke({"export-dot", fixture("diamond.ccs")});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out.rfind("digraph", 0), 0u);
}

TEST_F(CliTest, Deterministic) {
  for (const char* f : {"diamond.ccs", "ping.ccs", "phil2.ccs", "retry.ccs", "choice.ccs", "phil3.ccs"}) {
    CliResult a = invoke({"analyze", fixture(f)});
    CliResult b = invoke({"analyze", fixture(f)});
    EXPECT_EQ(a.out, b.out) << f;
    EXPECT_EQ(a.code, b.code) << f;
  }
}

TEST_F(CliTest, SeedRecorded) {
  ::setenv("SINGULOCK_SEED", "1234", 1);
  CliResult r = invoke({"analyze", fixture("choice.ccs")});
  ::unsetenv("SINGULOCK_SEED");
  EXPECT_NE(r.out.find("\"seed\": \"1234\""), std::string::npos);
}

}  // namespace
}  // namespace singulock
