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

#include <atomic>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "itt/harness/parallel.hpp"
#include "itt/harness/trainer.hpp"

namespace itt {
namespace {

TrainConfig quick_cartpole(std::size_t iterations) {
  TrainConfig c = parse_config(
      "[env]\nid = cartpole\n[es]\niterations = " + std::to_string(iterations) +
      "\n[run]\neval_episodes = 2\ntiming = false\nworkers = 1\n");
  return c;
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(97, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error("boom " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom 7");
  }
}

TEST(TrainSeed, DeterministicWithoutTiming) {
  const TrainConfig c = quick_cartpole(6);
  const SeedResult a = train_seed(c, 11);
  const SeedResult b = train_seed(c, 11);
  EXPECT_EQ(run_log_csv(a.log), run_log_csv(b.log));
  EXPECT_EQ(checkpoint_to_json(a.checkpoint).dump(), checkpoint_to_json(b.checkpoint).dump());
  const SeedResult other = train_seed(c, 12);
  EXPECT_NE(checkpoint_to_json(a.checkpoint).dump(), checkpoint_to_json(other.checkpoint).dump());
}

TEST(TrainSeed, WorkerCountDoesNotChangeResults) {
  TrainConfig c = parse_config(
      "[env]\nid = mountaincar_continuous\n[actions]\nresample = per_iter_shared\nnum_samples = 50\n"
      "[es]\niterations = 4\n[run]\ntiming = false\neval_episodes = 1\nworkers = 1\n");
  const SeedResult one = train_seed(c, 5);
  c.run.workers = 3;
  const SeedResult three = train_seed(c, 5);
  EXPECT_EQ(run_log_csv(one.log), run_log_csv(three.log));
  EXPECT_EQ(one.checkpoint.theta, three.checkpoint.theta);
}

TEST(TrainSeed, LogInvariants) {
  const SeedResult r = train_seed(quick_cartpole(8), 0);
  ASSERT_EQ(r.log.records.size(), 8u);
  for (std::size_t i = 0; i < r.log.records.size(); ++i) {
    const auto& rec = r.log.records[i];
    EXPECT_EQ(rec.iteration, i);
    EXPECT_LE(rec.reward_p10, rec.reward_mean);
    EXPECT_LE(rec.reward_mean, rec.reward_p90);
    EXPECT_EQ(rec.wall_ms, 0.0);
    EXPECT_TRUE(rec.tower_updated);
  }
  EXPECT_EQ(r.checkpoint.iteration, 8u);
  EXPECT_EQ(r.checkpoint.seed, 0u);
  const std::string csv = run_log_csv(r.log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,reward_mean,reward_p10,reward_p90,wall_ms,tower_updated");
}

TEST(TrainSeed, LazyModeBuildsSharedArtifactsOncePerFrozenBlock) {
  TrainConfig c = quick_cartpole(20);
  c.es.lazy_period = 5;
  const SeedResult r = train_seed(c, 2);
  EXPECT_EQ(r.log.shared_artifact_builds, 4u);
  std::size_t active = 0;
  for (const auto& rec : r.log.records) {
    EXPECT_EQ(rec.tower_updated, rec.iteration % 5 == 0);
    active += rec.tower_updated ? 1 : 0;
  }
  EXPECT_EQ(active, 4u);
  // Frozen iterations reuse the shared build; active ones build per rollout.
  EXPECT_EQ(r.log.rollout_artifact_builds, active * 2 * 16);
}

TEST(TrainSeed, LazyFrozenIterationsKeepActionTower) {
  TrainConfig c = quick_cartpole(5);
  c.es.lazy_period = 5;
  c.run.eval_episodes = 1;
  TrainConfig one = c;
  one.es.iterations = 1;
  const Architecture arch = resolve_architecture(c);
  const SeedResult a = train_seed(one, 4);
  const SeedResult b = train_seed(c, 4);
  for (std::size_t j = arch.state_params; j < arch.dim(); ++j) {
    EXPECT_EQ(a.checkpoint.theta[j], b.checkpoint.theta[j]) << j;
  }
}

TEST(TrainSeed, StopRewardEndsEarly) {
  TrainConfig c = quick_cartpole(50);
  c.run.eval_every = 1;
  c.run.stop_reward = -1.0;  // any evaluation satisfies it
  const SeedResult r = train_seed(c, 0);
  ASSERT_TRUE(r.log.first_iteration_reaching_stop.has_value());
  EXPECT_EQ(*r.log.first_iteration_reaching_stop, 1u);
  EXPECT_EQ(r.log.records.size(), 1u);
  EXPECT_EQ(r.checkpoint.iteration, 1u);
}

TEST(TrainSeed, WorkerFailureNamesIterationAndWorker) {
  TrainConfig c = quick_cartpole(2);
  c.es.sigma = 1e300;
  try {
    train_seed(c, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0, worker 0"), std::string::npos) << e.what();
  }
}

TEST(TrainSeed, FastModesRun) {
  for (const char* mode : {"srp", "rft"}) {
    const TrainConfig c = parse_config(
        std::string("[env]\nid = mountaincar_continuous\n[actions]\nnum_samples = 64\n"
                    "resample = per_iter_shared\n[fast]\nmode = ") +
        mode + "\nrft_features = 16\n[es]\niterations = 3\n[run]\ntiming = false\neval_episodes = 1\n");
    const SeedResult a = train_seed(c, 1);
    const SeedResult b = train_seed(c, 1);
    EXPECT_EQ(run_log_csv(a.log), run_log_csv(b.log)) << mode;
    EXPECT_EQ(a.log.records.size(), 3u);
  }
}

TEST(Evaluate, ZeroPolicyOnMountainCarNeverReachesGoal) {
  for (const char* kind : {"itt", "iot"}) {
    const TrainConfig c = parse_config(std::string("[env]\nid = mountaincar\n[policy]\nkind = ") + kind + "\n");
    const Vector theta(resolve_architecture(c).dim(), 0.0);
    const EvalSummary s = evaluate(c, theta, 3, 9);
    EXPECT_EQ(s.mean, -200.0) << kind;
    EXPECT_EQ(s.std, 0.0);
  }
}

TEST(Evaluate, SingleEpisodeHasZeroStd) {
  const TrainConfig c = quick_cartpole(1);
  const Vector theta(resolve_architecture(c).dim(), 0.3);
  const EvalSummary s = evaluate(c, theta, 1, 4);
  ASSERT_EQ(s.episodes.size(), 1u);
  EXPECT_EQ(s.std, 0.0);
  EXPECT_EQ(s.mean, s.episodes[0]);
}

TEST(Evaluate, RejectsWrongParameterCount) {
  const TrainConfig c = quick_cartpole(1);
  EXPECT_THROW(evaluate(c, Vector(3, 0.0), 1, 0), Error);
  EXPECT_THROW(evaluate(c, Vector(16, 0.0), 0, 0), Error);
}

TEST(Checkpoint, RoundTripPreservesEvaluation) {
  const TrainConfig c = quick_cartpole(4);
  const SeedResult r = train_seed(c, 3);
  const auto path = std::filesystem::temp_directory_path() / "itt_ckpt_roundtrip" / "checkpoint.json";
  save_checkpoint(r.checkpoint, path);
  const Checkpoint back = load_checkpoint(path);
  EXPECT_EQ(back.theta, r.checkpoint.theta);
  EXPECT_EQ(back.iteration, r.checkpoint.iteration);
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(to_ini(back.config), to_ini(c));
  EXPECT_EQ(eval_summary_json(evaluate(back, 5, 17)), eval_summary_json(evaluate(r.checkpoint, 5, 17)));
  const auto j = nlohmann::json::parse(read_text(path));
  EXPECT_EQ(j.at("format_version"), Checkpoint::kFormatVersion);
  std::filesystem::remove_all(path.parent_path());
}

TEST(Checkpoint, RejectsMalformedDocuments) {
  EXPECT_THROW(checkpoint_from_json(nlohmann::json::parse("{}")), std::exception);
  auto j = nlohmann::json::parse(R"({"format_version": 99})");
  EXPECT_THROW(checkpoint_from_json(j), std::exception);
}

TEST(Train, WritesRunDirectory) {
  TrainConfig c = quick_cartpole(3);
  c.run.seeds = {0, 1};
  const auto dir = std::filesystem::temp_directory_path() / "itt_train_dir";
  std::filesystem::remove_all(dir);
  c.run.out_dir = dir.string();
  const TrainResult r = train(c);
  ASSERT_EQ(r.seeds.size(), 2u);
  for (const char* f : {"config.ini", "scores.csv", "seed_0/log.csv", "seed_0/eval.csv", "seed_0/checkpoint.json",
                        "seed_1/checkpoint.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(to_ini(load_config(dir / "config.ini")), to_ini(c));
  EXPECT_EQ(read_text(dir / "scores.csv").substr(0, 11), "seed,score\n");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace itt
