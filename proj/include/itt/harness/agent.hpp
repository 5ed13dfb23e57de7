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

#ifndef ITT_HARNESS_AGENT_HPP
#define ITT_HARNESS_AGENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "itt/envs.hpp"
#include "itt/harness/config.hpp"
#include "itt/policy.hpp"
#include "itt/rft.hpp"
#include "itt/srp_index.hpp"

namespace itt {

/// Everything derived from (theta_2, A*) that action selection reuses:
/// the action set, its latents and the optional SRP index or RFT sampler.
struct ActionArtifacts {
  ActionSet set;
  std::optional<SrpIndex> srp;
  std::optional<FavorFeatures> features;
  std::optional<RftTree> tree;
};

inline std::size_t srp_budget(const FastConfig& fast, std::size_t n) {
  if (fast.srp_budget != 0) return fast.srp_budget;
  return std::max<std::size_t>(1, n / 8);
}

/// Computes latents (ITT only) and the fast-selection structure for `set`.
inline void build_artifacts(const TrainConfig& cfg, const Architecture& arch,
                            std::span<const double> theta2, ActionArtifacts& art, Rng& rng,
                            ForwardWorkspace& ws) {
  if (arch.kind != PolicyKind::kItt) return;
  if (!art.set.latents) art.set.latents.emplace();
  action_latents_into(arch.action_tower, theta2, art.set.actions, *art.set.latents, ws);
  art.set.latents_stale = false;
  switch (cfg.fast.mode) {
    case FastMode::kNone:
      break;
    case FastMode::kSrp:
      art.srp = SrpIndex::build(*art.set.latents, cfg.fast.srp_m, cfg.fast.median_shift, rng);
      break;
    case FastMode::kRft: {
      art.features = FavorFeatures::draw(cfg.fast.rft_features, art.set.latents->cols(), rng);
      const Matrix psi = favor_psi_rows(*art.features, *art.set.latents);
      art.tree = RftTree::build(psi, rng);
      break;
    }
  }
}

/// Action set for a rollout that does not resample per step.
inline ActionSet initial_action_set(const TrainConfig& cfg, Rng& rng) {
  return sample_actions(cfg.env.action_space, cfg.actions.num_samples, rng);
}

/// True when every rollout of an iteration sees the same A*.
inline bool action_set_shared(const TrainConfig& cfg) {
  return cfg.env.action_space.is_discrete() || cfg.actions.resample == ResampleMode::kPerIterShared;
}

/// Executes one policy (a fixed theta) inside rollouts.
class Agent {
 public:
  /// `shared` may carry prebuilt artifacts; it must match theta_2 of `theta`.
  Agent(const TrainConfig& cfg, const Architecture& arch, std::span<const double> theta,
        std::shared_ptr<const ActionArtifacts> shared = nullptr)
      : cfg_(cfg), arch_(arch), theta_(theta), shared_(std::move(shared)) {
    if (theta.size() != arch.dim()) throw Error("agent: parameter length mismatch");
    if (arch.kind == PolicyKind::kItt) {
      auto [t1, t2] = split_params(theta, arch.state_tower, arch.action_tower);
      theta1_ = t1;
      theta2_ = t2;
      state_latent_.resize(arch.state_tower.output_dim());
    } else {
      net_out_.resize(arch.net.output_dim());
    }
  }

  /// Prepares per-episode state. `action_set_rng` supplies A* when the set is
  /// neither shared nor resampled every step.
  void begin_episode(std::uint64_t episode_seed, std::optional<Rng> action_set_rng = std::nullopt) {
    rng_ = derive(episode_seed, tag("agent"));
    if (shared_) return;
    const bool per_step = !cfg_.env.action_space.is_discrete() &&
                          cfg_.actions.resample == ResampleMode::kPerStep;
    if (per_step) {
      local_.set = initial_action_set(cfg_, rng_);
      return;
    }
    if (local_ready_ && cfg_.env.action_space.is_discrete()) return;
    Rng set_rng = action_set_rng.value_or(derive(episode_seed, tag("action_set")));
    local_ = ActionArtifacts{};
    local_.set = initial_action_set(cfg_, set_rng);
    build_artifacts(cfg_, arch_, theta2_, local_, set_rng, ws_);
    local_ready_ = true;
    ++artifact_builds_;
  }

  void act(std::span<const double> obs, std::span<double> action) {
    if (arch_.kind == PolicyKind::kExplicit) {
      forward_into(arch_.net, theta_, obs, net_out_, ws_);
      explicit_output_to_action(cfg_.env.action_space, net_out_, action);
      return;
    }
    const bool per_step = !shared_ && !cfg_.env.action_space.is_discrete() &&
                          cfg_.actions.resample == ResampleMode::kPerStep;
    if (per_step) {
      resample_box_actions(cfg_.env.action_space.as_box(), local_.set, rng_);
      build_artifacts(cfg_, arch_, theta2_, local_, rng_, ws_);
      ++artifact_builds_;
    }
    const ActionArtifacts& art = shared_ ? *shared_ : local_;
    const std::size_t j = select(obs, art);
    const auto row = art.set.actions.row(j);
    std::copy(row.begin(), row.end(), action.begin());
  }

  /// Number of artifact constructions this agent performed itself.
  std::size_t artifact_builds() const { return artifact_builds_; }

 private:
  std::size_t select(std::span<const double> obs, const ActionArtifacts& art) {
    if (arch_.kind == PolicyKind::kIot) {
      return iot_argmin(obs, arch_.net, theta_, art.set.actions, concat_, ws_);
    }
    forward_into(arch_.state_tower, theta1_, obs, state_latent_, ws_);
    switch (cfg_.fast.mode) {
      case FastMode::kSrp:
        return art.srp->query(state_latent_, srp_budget(cfg_.fast, art.set.size())).index;
      case FastMode::kRft: {
        const Vector psi = favor_psi_shifted(*art.features, state_latent_);
        return sample_action(*art.tree, psi, rng_).index;
      }
      case FastMode::kNone:
        break;
    }
    if (cfg_.policy.selection == SelectionRule::kSoftmax) {
      return itt_softmax_sample(state_latent_, *art.set.latents, rng_);
    }
    return mip_argmax(*art.set.latents, state_latent_);
  }

  const TrainConfig& cfg_;
  const Architecture& arch_;
  std::span<const double> theta_;
  std::span<const double> theta1_;
  std::span<const double> theta2_;
  std::shared_ptr<const ActionArtifacts> shared_;
  ActionArtifacts local_;
  bool local_ready_ = false;
  std::size_t artifact_builds_ = 0;
  Rng rng_;
  ForwardWorkspace ws_;
  Vector state_latent_;
  Vector net_out_;
  Vector concat_;
};

/// Builds the artifacts every rollout of an iteration can share.
inline std::shared_ptr<const ActionArtifacts> build_shared_artifacts(
    const TrainConfig& cfg, const Architecture& arch, std::span<const double> theta2, Rng set_rng,
    Rng build_rng) {
  auto art = std::make_shared<ActionArtifacts>();
  art->set = initial_action_set(cfg, set_rng);
  ForwardWorkspace ws;
  build_artifacts(cfg, arch, theta2, *art, build_rng, ws);
  return art;
}

}  // namespace itt

#endif  // ITT_HARNESS_AGENT_HPP
