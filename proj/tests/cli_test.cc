// Copyright 2026 The mulmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the mulmin binary end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "mulmin/tensor.h"
#include "test_util.h"

namespace mulmin {
namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(MULMIN_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string FixturePath(const std::string& name) {
  return std::string(MULMIN_FIXTURE_DIR) + "/" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("mulmin_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::string Write(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
    return Path(name);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenIsDeterministicAndParses) {
  RunResult a = RunCli("gen --shape 2,3 --seed 5");
  RunResult b = RunCli("gen --shape 2,3 --seed 5");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  PayoffTensor t = LoadGame(a.out);
  EXPECT_EQ(t.shape(), GameShape({2, 3}));
  EXPECT_EQ(t, RandomGame(GameShape({2, 3}), 5, -1, 1));
}

TEST_F(CliTest, SolveMachineReport) {
  RunResult r = RunCli("solve " + FixturePath("prisoners_dilemma.mmg") +
                    " --format machine");
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "mulmin.report/1");
  EXPECT_NEAR(j["solution"]["value"].get<double>(), 3.0, 1e-10);
}

TEST_F(CliTest, SolveHumanMentionsValue) {
  RunResult r = RunCli("solve " + FixturePath("matching_pennies.mmg"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("value"), std::string::npos);
}

TEST_F(CliTest, LpDumpWritesBothPrograms) {
  RunResult r = RunCli("solve " + FixturePath("matching_pennies.mmg") +
                    " --lp-dump " + Path("mp"));
  ASSERT_EQ(r.status, 0);
  const std::string primal = testing::ReadFile(Path("mp.primal.lp"));
  const std::string dual = testing::ReadFile(Path("mp.dual.lp"));
  EXPECT_EQ(primal.rfind("Minimize", 0), 0u);
  EXPECT_EQ(dual.rfind("Maximize", 0), 0u);
}

TEST_F(CliTest, ParseErrorExitsTwo) {
  const std::string bad = Write("bad.mmg", "players 1\nshape 2\npayoffs 1\n1 x\n");
  EXPECT_EQ(RunCli("solve " + bad).status, 2);
  EXPECT_EQ(RunCli("solve " + Path("missing.mmg")).status, 2);
}

TEST_F(CliTest, VerifyExitCodes) {
  EXPECT_EQ(RunCli("verify " + FixturePath("prisoners_dilemma.mmg")).status, 0);
  // The product of q* marginals misses the value in the battle of the sexes.
  RunResult r = RunCli("verify " + FixturePath("battle_of_sexes.mmg") +
                    " --format machine");
  EXPECT_EQ(r.status, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["passed"].get<bool>());
}

TEST_F(CliTest, NashMapCsv) {
  RunResult r = RunCli("nashmap " + FixturePath("matching_pennies.mmg") +
                    " --start \"1,0;1,0\" --iters 3");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("iteration,residual,c1,c2\n0,2,0,2\n", 0), 0u)
      << r.out;
}

TEST_F(CliTest, ScaleCsv) {
  RunResult r = RunCli("scale " + FixturePath("prisoners_dilemma.mmg") +
                    " --d0 0.5,0.5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("iter,d1,d2,sigma,value,dprime1,dprime2,bound_rhs,t,"
                        "eps,stop_reason\n",
                        0),
            0u)
      << r.out;
  RunResult multi = RunCli("scale " + FixturePath("prisoners_dilemma.mmg") +
                        " --random-d 3 --traces 2");
  ASSERT_EQ(multi.status, 0);
  EXPECT_EQ(multi.out.rfind("trace,iter,", 0), 0u);
}

TEST_F(CliTest, EnsembleByteIdentical) {
  const std::string args = "ensemble --shape 2,2,2 --count 10 --seed 9";
  RunResult a = RunCli(args);
  RunResult b = RunCli(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind(
                "game,seed,value,t,t_defined,eps,support_size,duality_gap\n", 0),
            0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 11);
  RunResult s = RunCli(args + " --mode scale");
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(s.out, RunCli(args + " --mode scale").out);
}

TEST_F(CliTest, BadArgumentsRejected) {
  EXPECT_NE(RunCli("gen").status, 0);
  EXPECT_NE(RunCli("ensemble --shape 2,2 --mode nope").status, 0);
}

}  // namespace
}  // namespace mulmin
