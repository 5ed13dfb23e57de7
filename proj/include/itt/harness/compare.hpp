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

#ifndef ITT_HARNESS_COMPARE_HPP
#define ITT_HARNESS_COMPARE_HPP

#include <map>
#include <string>
#include <vector>

#include "itt/harness/config.hpp"
#include "itt/harness/stats.hpp"
#include "itt/harness/trainer.hpp"

namespace itt {

/// Short architecture label, e.g. "itt", "itt-srp", "itt-lazy5", "iot".
inline std::string arch_label(const TrainConfig& cfg) {
  std::string s(to_string(cfg.policy.kind));
  if (cfg.fast.mode != FastMode::kNone) s += "-" + std::string(to_string(cfg.fast.mode));
  if (cfg.es.lazy_period > 1) s += "-lazy" + std::to_string(cfg.es.lazy_period);
  return s;
}

struct CompareEntry {
  std::string task;
  std::string arch;
  std::vector<std::uint64_t> seeds;
  Vector scores;  // final score per seed, in seed order
  double mean = 0.0;
  double std = 0.0;
};

struct PairwiseTest {
  std::string arch_a;
  std::string arch_b;
  TTestResult result;
};

struct CompareResult {
  std::vector<CompareEntry> entries;
  std::vector<PairwiseTest> tests;
};

/// Paired t-tests for every (i < j) pair of entries; pairs are matched by seed.
inline std::vector<PairwiseTest> pairwise_tests(const std::vector<CompareEntry>& entries) {
  std::vector<PairwiseTest> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      out.push_back({entries[i].arch, entries[j].arch, paired_t_test(entries[i].scores, entries[j].scores)});
    }
  }
  return out;
}

/// Makes labels unique by appending "#k" to repeats.
inline void dedupe_labels(std::vector<CompareEntry>& entries) {
  std::map<std::string, std::size_t> seen;
  for (auto& e : entries) {
    const std::size_t k = seen[e.arch]++;
    if (k > 0) e.arch += "#" + std::to_string(k + 1);
  }
}

/// Trains every config over the shared seed list and tabulates final scores.
inline CompareResult compare(const std::vector<TrainConfig>& configs, bool write_files = true) {
  if (configs.size() < 2) throw ConfigError("compare: need at least two configs");
  for (const auto& c : configs) {
    if (c.env.id != configs.front().env.id) throw ConfigError("compare: configs use different environments");
    if (c.run.seeds != configs.front().run.seeds) throw ConfigError("compare: configs use different seed lists");
  }
  CompareResult res;
  for (const auto& c : configs) {
    const TrainResult tr = train(c, write_files);
    CompareEntry e;
    e.task = std::string(to_string(c.env.id));
    e.arch = arch_label(c);
    e.seeds = c.run.seeds;
    for (const auto& s : tr.seeds) e.scores.push_back(s.final_eval.mean);
    e.mean = mean(e.scores);
    e.std = stddev(e.scores);
    res.entries.push_back(std::move(e));
  }
  dedupe_labels(res.entries);
  res.tests = pairwise_tests(res.entries);
  return res;
}

inline std::string compare_csv(const CompareResult& r) {
  std::string out = "task,arch,mean,std,seeds\n";
  for (const auto& e : r.entries) {
    out += e.task + "," + e.arch + "," + format_real(e.mean) + "," + format_real(e.std) + "," +
           std::to_string(e.seeds.size()) + "\n";
  }
  return out;
}

inline std::string pairwise_csv(const CompareResult& r) {
  std::string out = "arch_a,arch_b,t,p\n";
  for (const auto& t : r.tests) {
    out += t.arch_a + "," + t.arch_b + "," + format_real(t.result.t) + "," + format_real(t.result.p) + "\n";
  }
  return out;
}

}  // namespace itt

#endif  // ITT_HARNESS_COMPARE_HPP
