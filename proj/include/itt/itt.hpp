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

#ifndef ITT_ITT_HPP
#define ITT_ITT_HPP

#include "itt/envs.hpp"
#include "itt/es_opt.hpp"
#include "itt/harness/agent.hpp"
#include "itt/harness/bench.hpp"
#include "itt/harness/compare.hpp"
#include "itt/harness/config.hpp"
#include "itt/harness/parallel.hpp"
#include "itt/harness/stats.hpp"
#include "itt/harness/trainer.hpp"
#include "itt/numerics.hpp"
#include "itt/policy.hpp"
#include "itt/rft.hpp"
#include "itt/srp_index.hpp"
#include "itt/towers.hpp"

#endif  // ITT_ITT_HPP
