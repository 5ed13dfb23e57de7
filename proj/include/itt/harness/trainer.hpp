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

#ifndef ITT_HARNESS_TRAINER_HPP
#define ITT_HARNESS_TRAINER_HPP

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "itt/envs.hpp"
#include "itt/es_opt.hpp"
#include "itt/harness/agent.hpp"
#include "itt/harness/config.hpp"
#include "itt/harness/parallel.hpp"

namespace itt {

/// Shortest round-trip decimal rendering; identical bytes for identical values.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_real: conversion failed");
  return std::string(buf, ptr);
}

struct IterationRecord {
  std::size_t iteration = 0;
  double reward_mean = 0.0;
  double reward_p10 = 0.0;
  double reward_p90 = 0.0;
  double wall_ms = 0.0;
  bool tower_updated = true;
};

struct EvalRecord {
  std::size_t iteration = 0;  // number of updates applied before evaluating
  double mean = 0.0;
  double std = 0.0;
};

struct RunLog {
  std::vector<IterationRecord> records;
  std::vector<EvalRecord> evals;
  /// Artifact sets built once per frozen-action-tower block and shared by
  /// every rollout (lazy mode).
  std::size_t shared_artifact_builds = 0;
  /// Artifact sets built privately inside rollouts.
  std::size_t rollout_artifact_builds = 0;
  std::optional<std::size_t> first_iteration_reaching_stop;
};

struct Checkpoint {
  static constexpr int kFormatVersion = 1;
  TrainConfig config;
  Vector theta;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
};

struct EvalSummary {
  double mean = 0.0;
  double std = 0.0;
  Vector episodes;
};

/// Unperturbed-policy returns over `episodes` derived seeds.
inline EvalSummary evaluate(const TrainConfig& cfg, std::span<const double> theta,
                            std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) throw Error("evaluate: episodes must be >= 1");
  const Architecture arch = resolve_architecture(cfg);
  if (theta.size() != arch.dim()) {
    throw Error("evaluate: checkpoint has " + std::to_string(theta.size()) +
                " parameters but the configured policy needs " + std::to_string(arch.dim()));
  }
  std::shared_ptr<const ActionArtifacts> shared;
  if (arch.kind == PolicyKind::kItt && action_set_shared(cfg)) {
    auto [t1, t2] = split_params(theta, arch.state_tower, arch.action_tower);
    shared = build_shared_artifacts(cfg, arch, t2, derive(seed, tag("eval_action_set")),
                                    derive(seed, tag("eval_artifacts")));
  }
  EvalSummary out;
  out.episodes.resize(episodes);
  auto env = make_env(cfg.env.id, cfg.env.max_steps);
  Agent agent(cfg, arch, theta, shared);
  for (std::size_t e = 0; e < episodes; ++e) {
    const std::uint64_t ep_seed = derive(seed, tag("eval"), e).next_u64();
    std::optional<Rng> set_rng;
    if (cfg.actions.resample == ResampleMode::kPerIterShared) set_rng = derive(seed, tag("eval_action_set"));
    agent.begin_episode(ep_seed, set_rng);
    out.episodes[e] =
        rollout(*env, [&](std::span<const double> o, std::span<double> a) { agent.act(o, a); }, ep_seed)
            .total_reward;
  }
  out.mean = mean(out.episodes);
  out.std = stddev(out.episodes);
  return out;
}

inline EvalSummary evaluate(const Checkpoint& ckpt, std::size_t episodes, std::uint64_t seed) {
  return evaluate(ckpt.config, ckpt.theta, episodes, seed);
}

struct SeedResult {
  RunLog log;
  Checkpoint checkpoint;
  EvalSummary final_eval;
};

/// Antithetic orthogonal ES on one seed, theta initialised to zero.
inline SeedResult train_seed(const TrainConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  const Architecture arch = resolve_architecture(cfg);
  const std::size_t dim = arch.dim();
  const std::size_t m = cfg.es.num_perturbations == 0 ? dim : cfg.es.num_perturbations;
  if (m > dim) throw ConfigError("key 'es.perturbations': M exceeds D");
  const bool itt = arch.kind == PolicyKind::kItt;
  const std::size_t workers = resolve_workers(cfg.run.workers);
  const double sigma = cfg.es.sigma;
  const std::uint64_t eval_seed = derive(seed, tag("eval_seed")).next_u64();

  SeedResult res;
  Vector theta = init_params(dim);
  std::uint64_t theta2_version = 0;
  std::shared_ptr<const ActionArtifacts> cache;
  std::uint64_t cache_version = 0;
  std::uint64_t cache_set_key = 0;

  const std::size_t n_rollouts = 2 * m;
  Vector returns(n_rollouts);
  std::vector<std::size_t> builds(n_rollouts);
  std::size_t done_iterations = 0;

  for (std::size_t it = 0; it < cfg.es.iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool active = !itt || action_tower_active(it, cfg.es.lazy_period);

    Rng ens_rng = derive(seed, tag("ensemble"), it);
    Matrix ens = orthogonal_gaussian_ensemble(m, dim, ens_rng);
    if (itt) ens = lazy_mask(ens, arch.state_params, arch.action_params, it, cfg.es.lazy_period);

    const bool shared_set_iter = cfg.actions.resample == ResampleMode::kPerIterShared &&
                                 !cfg.env.action_space.is_discrete();
    const std::uint64_t set_key = shared_set_iter ? it : 0;
    const Rng iter_set_rng = derive(seed, tag("action_set"), set_key);

    std::shared_ptr<const ActionArtifacts> shared;
    if (itt && !active && action_set_shared(cfg)) {
      if (!cache || cache_version != theta2_version || cache_set_key != set_key) {
        auto [t1, t2] = split_params(theta, arch.state_tower, arch.action_tower);
        cache = build_shared_artifacts(cfg, arch, t2, iter_set_rng, derive(seed, tag("artifacts"), it));
        cache_version = theta2_version;
        cache_set_key = set_key;
        ++res.log.shared_artifact_builds;
      }
      shared = cache;
    }

    try {
      parallel_for(n_rollouts, workers, [&](std::size_t k) {
        const std::size_t i = k / 2;
        const bool plus = k % 2 == 0;
        const double s = plus ? sigma : -sigma;
        Vector perturbed(theta);
        const auto e = ens.row(i);
        for (std::size_t j = 0; j < dim; ++j) perturbed[j] += s * e[j];
        const std::uint64_t env_seed = derive(seed, it, i, plus ? 1 : 0).next_u64();
        auto env = make_env(cfg.env.id, cfg.env.max_steps);
        Agent agent(cfg, arch, perturbed, shared);
        std::optional<Rng> set_rng;
        if (shared_set_iter) set_rng = iter_set_rng;
        try {
          agent.begin_episode(env_seed, set_rng);
          returns[k] = rollout(*env, [&](std::span<const double> o, std::span<double> a) { agent.act(o, a); },
                               env_seed)
                           .total_reward;
        } catch (const std::exception& ex) {
          throw Error("iteration " + std::to_string(it) + ", worker " + std::to_string(i) +
                      (plus ? " (+)" : " (-)") + ": " + ex.what());
        }
        if (!std::isfinite(returns[k])) {
          throw Error("iteration " + std::to_string(it) + ", worker " + std::to_string(i) +
                      ": non-finite return");
        }
        builds[k] = agent.artifact_builds();
      });
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      throw Error("iteration " + std::to_string(it) + ": " + ex.what());
    }

    Vector grad(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double diff = returns[2 * i] - returns[2 * i + 1];
      const auto e = ens.row(i);
      for (std::size_t j = 0; j < dim; ++j) grad[j] += diff * e[j];
    }
    const double scale = 1.0 / (2.0 * sigma * static_cast<double>(m));
    for (double& g : grad) g *= scale;
    theta = es_step(theta, grad, cfg.es.eta);
    if (itt && active) ++theta2_version;
    for (std::size_t b : builds) res.log.rollout_artifact_builds += b;

    IterationRecord rec;
    rec.iteration = it;
    rec.reward_mean = mean(returns);
    rec.reward_p10 = percentile(returns, 10.0);
    rec.reward_p90 = percentile(returns, 90.0);
    rec.tower_updated = active;
    if (cfg.run.timing) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    res.log.records.push_back(rec);
    done_iterations = it + 1;

    if (cfg.run.eval_every != 0 && done_iterations % cfg.run.eval_every == 0) {
      const EvalSummary ev = evaluate(cfg, theta, cfg.run.eval_episodes, eval_seed);
      res.log.evals.push_back({done_iterations, ev.mean, ev.std});
      if (cfg.run.stop_reward && ev.mean >= *cfg.run.stop_reward) {
        res.log.first_iteration_reaching_stop = done_iterations;
        break;
      }
    }
  }

  res.checkpoint = Checkpoint{cfg, theta, done_iterations, seed};
  res.final_eval = evaluate(cfg, theta, cfg.run.eval_episodes, eval_seed);
  return res;
}

inline std::string run_log_csv(const RunLog& log) {
  std::string out = "iter,reward_mean,reward_p10,reward_p90,wall_ms,tower_updated\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.iteration) + "," + format_real(r.reward_mean) + "," + format_real(r.reward_p10) +
           "," + format_real(r.reward_p90) + "," + format_real(r.wall_ms) + "," +
           (r.tower_updated ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string eval_log_csv(const RunLog& log) {
  std::string out = "iter,eval_mean,eval_std\n";
  for (const auto& e : log.evals) {
    out += std::to_string(e.iteration) + "," + format_real(e.mean) + "," + format_real(e.std) + "\n";
  }
  return out;
}

inline nlohmann::json checkpoint_to_json(const Checkpoint& c) {
  nlohmann::json j;
  j["format_version"] = Checkpoint::kFormatVersion;
  j["config"] = to_ini(c.config);
  j["theta"] = c.theta;
  j["iteration"] = c.iteration;
  j["seed"] = c.seed;
  return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != Checkpoint::kFormatVersion) {
      throw Error("unsupported checkpoint format_version");
    }
    Checkpoint c;
    c.config = parse_config(j.at("config").get<std::string>());
    c.theta = j.at("theta").get<Vector>();
    c.iteration = j.at("iteration").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (c.theta.size() != resolve_architecture(c.config).dim()) {
      throw Error("checkpoint theta length does not match its config");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  write_text(path, checkpoint_to_json(c).dump(2) + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed checkpoint '" + path.string() + "': " + e.what());
  }
  return checkpoint_from_json(j);
}

inline std::string eval_summary_json(const EvalSummary& s) {
  nlohmann::json j;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["episodes"] = s.episodes;
  return j.dump(2) + "\n";
}

struct TrainResult {
  std::vector<SeedResult> seeds;
};

/// Trains every configured seed and writes, under run.out_dir:
/// config.ini, scores.csv and seed_<s>/{log.csv, eval.csv, checkpoint.json}.
inline TrainResult train(const TrainConfig& cfg, bool write_files = true) {
  TrainResult out;
  const std::filesystem::path dir(cfg.run.out_dir);
  std::string scores = "seed,score\n";
  for (std::uint64_t seed : cfg.run.seeds) {
    SeedResult r = train_seed(cfg, seed);
    scores += std::to_string(seed) + "," + format_real(r.final_eval.mean) + "\n";
    if (write_files) {
      const auto sd = dir / ("seed_" + std::to_string(seed));
      write_text(sd / "log.csv", run_log_csv(r.log));
      write_text(sd / "eval.csv", eval_log_csv(r.log));
      save_checkpoint(r.checkpoint, sd / "checkpoint.json");
    }
    out.seeds.push_back(std::move(r));
  }
  if (write_files) {
    write_text(dir / "config.ini", to_ini(cfg));
    write_text(dir / "scores.csv", scores);
  }
  return out;
}

}  // namespace itt

#endif  // ITT_HARNESS_TRAINER_HPP
