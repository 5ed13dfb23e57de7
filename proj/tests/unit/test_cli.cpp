// Copyright 2026 The ITT Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "itt/harness/trainer.hpp"

namespace itt {
namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ITT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("itt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    write_text(p, body);
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, TrainThenEvalSucceeds) {
  const std::string cfg = write_config(
      "c.ini", "[env]\nid = cartpole\n[es]\niterations = 2\n[run]\neval_episodes = 1\nout_dir = " +
                   (dir_ / "run").string() + "\n");
  EXPECT_EQ(run_cli("train " + cfg), 0);
  const fs::path ckpt = dir_ / "run" / "seed_0" / "checkpoint.json";
  ASSERT_TRUE(fs::exists(ckpt));
  EXPECT_EQ(run_cli("eval " + ckpt.string() + " --episodes 2 --seed 3 --out " + (dir_ / "e.json").string()), 0);
  const auto j = nlohmann::json::parse(read_text(dir_ / "e.json"));
  EXPECT_EQ(j.at("episodes").size(), 2u);
}

TEST_F(CliTest, ConfigErrorsExitOne) {
  EXPECT_EQ(run_cli("train " + write_config("bad.ini", "[env]\nid = cartpole\nbogus = 3\n")), 1);
  EXPECT_EQ(run_cli("train " + (dir_ / "missing.ini").string()), 1);
  EXPECT_EQ(run_cli("train"), 1);
  EXPECT_EQ(run_cli("no-such-command"), 1);
  EXPECT_EQ(run_cli("eval x --episodes 0"), 1);
}

TEST_F(CliTest, RuntimeFailuresExitTwo) {
  EXPECT_EQ(run_cli("eval " + (dir_ / "missing.json").string()), 2);
  write_text(dir_ / "broken.json", "{\"format_version\": 1");
  EXPECT_EQ(run_cli("eval " + (dir_ / "broken.json").string()), 2);
  write_text(dir_ / "a.csv", "seed,score\n0,1\n1,2\n");
  write_text(dir_ / "b.csv", "seed,score\n0,1\n2,2\n");
  EXPECT_EQ(run_cli("ttest " + (dir_ / "a.csv").string() + " " + (dir_ / "b.csv").string()), 2);
}

TEST_F(CliTest, TTestOnScoreFiles) {
  write_text(dir_ / "a.csv", "seed,score\n0,3\n1,5\n2,4\n");
  write_text(dir_ / "b.csv", "seed,score\n0,1\n1,2\n2,2\n");
  const std::string out = (dir_ / "out.txt").string();
  const std::string cmd = std::string(ITT_CLI_PATH) + " ttest " + (dir_ / "a.csv").string() + " " +
                          (dir_ / "b.csv").string() + " > " + out;
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(read_text(out).substr(0, 4), "t,p\n");
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run_cli("--help"), 0); }

}  // namespace
}  // namespace itt
