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

#include <string>

#include <gtest/gtest.h>

#include "itt/harness/compare.hpp"

namespace itt {
namespace {

TrainConfig small(const std::string& extra) {
  return parse_config("[env]\nid = cartpole\n" + extra +
                      "[es]\niterations = 3\n[run]\nseeds = 0, 1, 2\neval_episodes = 2\ntiming = false\n");
}

TEST(Compare, IdenticalConfigsGivePOne) {
  const CompareResult r = compare({small(""), small("")}, false);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].arch, "itt");
  EXPECT_EQ(r.entries[1].arch, "itt#2");
  EXPECT_EQ(r.entries[0].scores, r.entries[1].scores);
  ASSERT_EQ(r.tests.size(), 1u);
  EXPECT_EQ(r.tests[0].result.p, 1.0);
  const std::string csv = compare_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "task,arch,mean,std,seeds");
  EXPECT_NE(csv.find("cartpole,itt,"), std::string::npos);
}

TEST(Compare, LabelsByArchitecture) {
  EXPECT_EQ(arch_label(small("")), "itt");
  EXPECT_EQ(arch_label(small("[policy]\nkind = iot\n")), "iot");
  TrainConfig lazy = small("");
  lazy.es.lazy_period = 5;
  EXPECT_EQ(arch_label(lazy), "itt-lazy5");
}

TEST(Compare, RejectsMismatchedRuns) {
  EXPECT_THROW(compare({small("")}, false), ConfigError);
  TrainConfig other = parse_config("[env]\nid = mountaincar\n[run]\nseeds = 0, 1, 2\n");
  EXPECT_THROW(compare({small(""), other}, false), ConfigError);
  TrainConfig seeds = small("");
  seeds.run.seeds = {0, 1};
  EXPECT_THROW(compare({small(""), seeds}, false), ConfigError);
}

}  // namespace
}  // namespace itt
