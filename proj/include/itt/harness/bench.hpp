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

#ifndef ITT_HARNESS_BENCH_HPP
#define ITT_HARNESS_BENCH_HPP

#include <bit>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "itt/harness/config.hpp"
#include "itt/harness/trainer.hpp"
#include "itt/policy.hpp"
#include "itt/srp_index.hpp"

namespace itt {

struct BenchOptions {
  std::vector<std::size_t> n_list;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  /// 0 = use fast.srp_budget (itself 0 = N / 8).
  std::size_t budget = 0;
  /// 0 = use fast.srp_m; ignored when auto_m is set.
  std::size_t srp_m = 0;
  /// Picks m = ceil(log2(N / budget)) + 1 per N.
  bool auto_m = false;
  /// Replaces the env's action space with [-1, 1]^action_dim when nonzero.
  std::size_t action_dim = 0;
};

struct BenchRow {
  std::string backend;  // itt_brute | itt_srp | iot
  std::size_t n = 0;
  double mean_candidates = 0.0;
  double mean_wall_us = 0.0;
  /// Fraction of queries whose index equals the brute-force argmax (SRP only).
  std::optional<double> exact_match;
};

/// Projection count that keeps buckets near budget / 2 members.
inline std::size_t auto_srp_m(std::size_t n, std::size_t budget) {
  if (budget == 0) throw Error("auto_srp_m: budget must be >= 1");
  std::size_t m = 1;
  while (m < 64 && (std::size_t{1} << (m - 1)) * budget < n) ++m;
  return m;
}

/// Times brute-force ITT, ITT-SRP and IOT-style per-pair selection on the same
/// random states and action sets. Towers use N(0, 1) weights; SRP index
/// construction is excluded from per-query time.
inline std::vector<BenchRow> bench_select(const TrainConfig& base, const BenchOptions& opt) {
  if (opt.n_list.empty()) throw Error("bench_select: empty N list");
  if (opt.trials == 0) throw Error("bench_select: trials must be >= 1");
  TrainConfig cfg = base;
  if (opt.action_dim != 0) {
    cfg.env.action_space = ActionSpace::box(Vector(opt.action_dim, -1.0), Vector(opt.action_dim, 1.0));
  }
  if (cfg.env.action_space.is_discrete()) {
    throw Error("bench_select: needs a continuous action space (set --action-dim)");
  }
  TrainConfig itt_cfg = cfg;
  itt_cfg.policy.kind = PolicyKind::kItt;
  TrainConfig iot_cfg = cfg;
  iot_cfg.policy.kind = PolicyKind::kIot;
  const auto defaults = env_defaults(cfg.env.id);
  if (itt_cfg.policy.state_layers == 0) itt_cfg.policy.state_layers = defaults.state_layers;
  if (itt_cfg.policy.action_layers == 0) itt_cfg.policy.action_layers = defaults.action_layers;
  if (iot_cfg.policy.net_layers == 0) iot_cfg.policy.net_layers = defaults.net_layers;
  const Architecture itt_arch = resolve_architecture(itt_cfg);
  const Architecture iot_arch = resolve_architecture(iot_cfg);

  Rng wrng = derive(opt.seed, tag("bench_weights"));
  Vector itt_theta(itt_arch.dim());
  for (double& v : itt_theta) v = wrng.normal();
  Vector iot_theta(iot_arch.dim());
  for (double& v : iot_theta) v = wrng.normal();
  auto [theta1, theta2] = split_params(itt_theta, itt_arch.state_tower, itt_arch.action_tower);

  using Clock = std::chrono::steady_clock;
  const auto us = [](Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); };

  std::vector<BenchRow> rows;
  ForwardWorkspace ws;
  for (std::size_t n : opt.n_list) {
    if (n == 0) throw Error("bench_select: N must be >= 1");
    Rng arng = derive(opt.seed, tag("bench_actions"), n);
    const ActionSet set = sample_actions(cfg.env.action_space, n, arng);
    const Matrix latents = action_latents(itt_arch.action_tower, theta2, set);
    const std::size_t budget = opt.budget != 0 ? opt.budget : srp_budget(cfg.fast, n);
    const std::size_t m = opt.auto_m ? auto_srp_m(n, budget) : (opt.srp_m != 0 ? opt.srp_m : cfg.fast.srp_m);
    Rng irng = derive(opt.seed, tag("bench_index"), n);
    const SrpIndex index = SrpIndex::build(latents, m, cfg.fast.median_shift, irng);

    Rng srng = derive(opt.seed, tag("bench_states"), n);
    Matrix states(opt.trials, cfg.env.obs_dim);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      for (double& v : states.row(t)) v = srng.normal();
    }

    BenchRow brute{"itt_brute", n, static_cast<double>(n), 0.0, std::nullopt};
    BenchRow srp{"itt_srp", n, 0.0, 0.0, 0.0};
    BenchRow iot{"iot", n, static_cast<double>(n), 0.0, std::nullopt};
    Vector state_latent(itt_arch.state_tower.output_dim());
    Vector concat;
    std::vector<std::size_t> brute_idx(opt.trials);
    std::size_t sink = 0;

    auto t0 = Clock::now();
    for (std::size_t t = 0; t < opt.trials; ++t) {
      forward_into(itt_arch.state_tower, theta1, states.row(t), state_latent, ws);
      brute_idx[t] = mip_argmax(latents, state_latent);
    }
    brute.mean_wall_us = us(Clock::now() - t0) / static_cast<double>(opt.trials);

    std::size_t matches = 0;
    double cand = 0.0;
    t0 = Clock::now();
    for (std::size_t t = 0; t < opt.trials; ++t) {
      forward_into(itt_arch.state_tower, theta1, states.row(t), state_latent, ws);
      const SrpQueryResult r = index.query(state_latent, budget);
      cand += static_cast<double>(r.candidates_examined);
      matches += r.index == brute_idx[t] ? 1 : 0;
    }
    srp.mean_wall_us = us(Clock::now() - t0) / static_cast<double>(opt.trials);
    srp.mean_candidates = cand / static_cast<double>(opt.trials);
    srp.exact_match = static_cast<double>(matches) / static_cast<double>(opt.trials);

    t0 = Clock::now();
    for (std::size_t t = 0; t < opt.trials; ++t) {
      sink += iot_argmin(states.row(t), iot_arch.net, iot_theta, set.actions, concat, ws);
    }
    iot.mean_wall_us = us(Clock::now() - t0) / static_cast<double>(opt.trials);
    if (sink == static_cast<std::size_t>(-1)) throw Error("unreachable");

    rows.push_back(brute);
    rows.push_back(srp);
    rows.push_back(iot);
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "backend,N,mean_candidates,mean_wall_us,exact_match\n";
  for (const auto& r : rows) {
    out += r.backend + "," + std::to_string(r.n) + "," + format_real(r.mean_candidates) + "," +
           format_real(r.mean_wall_us) + "," + (r.exact_match ? format_real(*r.exact_match) : "") + "\n";
  }
  return out;
}

/// Least-squares slope of log(wall time) against log(N) for one backend.
inline double log_log_slope(const std::vector<BenchRow>& rows, const std::string& backend) {
  Vector xs, ys;
  for (const auto& r : rows) {
    if (r.backend != backend) continue;
    if (!(r.mean_wall_us > 0.0)) throw Error("log_log_slope: non-positive wall time");
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(r.mean_wall_us));
  }
  if (xs.size() < 2) throw Error("log_log_slope: need at least two N values");
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace itt

#endif  // ITT_HARNESS_BENCH_HPP
