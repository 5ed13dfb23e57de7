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

#ifndef ITT_POLICY_HPP
#define ITT_POLICY_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>

#include "itt/numerics.hpp"
#include "itt/towers.hpp"

namespace itt {

struct DiscreteSpace {
  std::size_t k = 2;
};

struct BoxSpace {
  Vector lo;
  Vector hi;
};

class ActionSpace {
 public:
  static ActionSpace discrete(std::size_t k) {
    if (k < 2) throw Error("discrete action space needs k >= 2");
    return ActionSpace(DiscreteSpace{k});
  }

  static ActionSpace box(Vector lo, Vector hi) {
    if (lo.empty() || lo.size() != hi.size()) throw Error("box bounds shape mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i])) {
        throw Error("box bounds must be finite with lo < hi");
      }
    }
    return ActionSpace(BoxSpace{std::move(lo), std::move(hi)});
  }

  bool is_discrete() const { return std::holds_alternative<DiscreteSpace>(kind_); }
  const DiscreteSpace& as_discrete() const { return std::get<DiscreteSpace>(kind_); }
  const BoxSpace& as_box() const { return std::get<BoxSpace>(kind_); }

  /// Width of the action vector fed to networks: k for one-hot, dim for boxes.
  std::size_t vector_dim() const {
    return is_discrete() ? as_discrete().k : as_box().lo.size();
  }

 private:
  explicit ActionSpace(std::variant<DiscreteSpace, BoxSpace> kind) : kind_(std::move(kind)) {}
  std::variant<DiscreteSpace, BoxSpace> kind_;
};

/// Sampled candidate actions A* (one row per action) and, optionally, their
/// action-tower latents.
struct ActionSet {
  Matrix actions;
  std::optional<Matrix> latents;
  /// Set when latents were computed for an older theta_2 (lazy mode only).
  bool latents_stale = false;

  std::size_t size() const { return actions.rows(); }
};

/// Discrete: the k one-hot vectors (A* = A). Box: N iid uniform rows.
inline ActionSet sample_actions(const ActionSpace& space, std::size_t n, Rng& rng) {
  ActionSet set;
  if (space.is_discrete()) {
    const std::size_t k = space.as_discrete().k;
    set.actions = Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) set.actions(i, i) = 1.0;
    return set;
  }
  if (n == 0) throw Error("sample_actions: N must be >= 1");
  const auto& box = space.as_box();
  set.actions = Matrix(n, box.lo.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto row = set.actions.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = rng.uniform(box.lo[j], box.hi[j]);
  }
  return set;
}

/// Resamples into an existing set without reallocating (box spaces only).
inline void resample_box_actions(const BoxSpace& box, ActionSet& set, Rng& rng) {
  for (std::size_t i = 0; i < set.actions.rows(); ++i) {
    auto row = set.actions.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = rng.uniform(box.lo[j], box.hi[j]);
  }
  set.latents.reset();
}

inline void action_latents_into(const TowerSpec& action_spec, std::span<const double> theta2,
                                const Matrix& actions, Matrix& out, ForwardWorkspace& ws) {
  if (actions.cols() != action_spec.input_dim()) throw Error("action_latents: action width mismatch");
  if (out.rows() != actions.rows() || out.cols() != action_spec.output_dim()) {
    out = Matrix(actions.rows(), action_spec.output_dim());
  }
  for (std::size_t i = 0; i < actions.rows(); ++i) {
    forward_into(action_spec, theta2, actions.row(i), out.row(i), ws);
  }
}

/// Row i = l_A(a_i).
inline Matrix action_latents(const TowerSpec& action_spec, std::span<const double> theta2,
                             const ActionSet& set) {
  Matrix out(set.size(), action_spec.output_dim());
  ForwardWorkspace ws;
  action_latents_into(action_spec, theta2, set.actions, out, ws);
  return out;
}

/// argmax_i <latents_i, state_latent>, ties to the lowest index.
inline std::size_t mip_argmax(const Matrix& latents, std::span<const double> state_latent) {
  if (latents.rows() == 0) throw Error("empty action set");
  if (latents.cols() != state_latent.size()) throw Error("latent dimension mismatch");
  std::size_t best = 0;
  double best_score = dot(latents.row(0), state_latent);
  if (!std::isfinite(best_score)) throw Error("non-finite score");
  for (std::size_t i = 1; i < latents.rows(); ++i) {
    const double s = dot(latents.row(i), state_latent);
    if (!std::isfinite(s)) throw Error("non-finite score");
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

struct Selection {
  Vector action;
  std::size_t index = 0;
};

/// Two-tower action selection: one state-tower pass plus one N x d product.
inline Selection itt_select(std::span<const double> state, const TowerSpec& state_spec,
                            std::span<const double> theta1, const Matrix& latents,
                            const ActionSet& set) {
  if (set.size() == 0) throw Error("itt_select: empty action set");
  if (latents.rows() != set.size()) throw Error("itt_select: latents do not match action set");
  const Vector z = forward(state_spec, theta1, state);
  const std::size_t j = mip_argmax(latents, z);
  const auto row = set.actions.row(j);
  return {Vector(row.begin(), row.end()), j};
}

/// Samples i with probability softmax(latents . state_latent)_i.
inline std::size_t itt_softmax_sample(std::span<const double> state_latent, const Matrix& latents,
                                      Rng& rng) {
  const std::size_t n = latents.rows();
  if (n == 0) throw Error("itt_softmax_sample: empty action set");
  Vector z(n);
  double zmax = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = dot(latents.row(i), state_latent);
    if (!std::isfinite(z[i])) throw Error("itt_softmax_sample: non-finite score");
    zmax = std::max(zmax, z[i]);
  }
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < n; ++i) {
    u -= z[i];
    if (u < 0.0) return i;
  }
  // Rounding left u marginally non-negative: return the last positive-mass index.
  for (std::size_t i = n; i-- > 0;) {
    if (z[i] > 0.0) return i;
  }
  return n - 1;
}

/// Energy-net evaluation E(s, a) = net([s; a]) for every candidate.
inline std::size_t iot_argmin(std::span<const double> state, const TowerSpec& energy_spec,
                              std::span<const double> theta, const Matrix& actions,
                              Vector& concat, ForwardWorkspace& ws) {
  if (actions.rows() == 0) throw Error("iot_select: empty action set");
  if (energy_spec.input_dim() != state.size() + actions.cols() || energy_spec.output_dim() != 1) {
    throw Error("iot_select: energy net shape mismatch");
  }
  concat.resize(energy_spec.input_dim());
  std::copy(state.begin(), state.end(), concat.begin());
  std::size_t best = 0;
  double best_energy = INFINITY;
  double e = 0.0;
  for (std::size_t i = 0; i < actions.rows(); ++i) {
    const auto a = actions.row(i);
    std::copy(a.begin(), a.end(), concat.begin() + static_cast<std::ptrdiff_t>(state.size()));
    forward_into(energy_spec, theta, concat, std::span<double>(&e, 1), ws);
    if (!std::isfinite(e)) throw Error("iot_select: non-finite energy");
    if (e < best_energy) {
      best_energy = e;
      best = i;
    }
  }
  return best;
}

inline Selection iot_select(std::span<const double> state, const TowerSpec& energy_spec,
                            std::span<const double> theta, const ActionSet& set) {
  Vector concat;
  ForwardWorkspace ws;
  const std::size_t j = iot_argmin(state, energy_spec, theta, set.actions, concat, ws);
  const auto row = set.actions.row(j);
  return {Vector(row.begin(), row.end()), j};
}

/// Maps a raw network output to an action: clamp for boxes, one-hot argmax
/// for discrete spaces.
inline void explicit_output_to_action(const ActionSpace& space, std::span<const double> out,
                                      std::span<double> action) {
  if (space.is_discrete()) {
    const std::size_t j = argmax_first(out);
    std::fill(action.begin(), action.end(), 0.0);
    action[j] = 1.0;
    return;
  }
  const auto& box = space.as_box();
  for (std::size_t i = 0; i < out.size(); ++i) action[i] = std::clamp(out[i], box.lo[i], box.hi[i]);
}

inline Vector explicit_act(std::span<const double> state, const TowerSpec& net_spec,
                           std::span<const double> theta, const ActionSpace& space) {
  if (net_spec.output_dim() != space.vector_dim()) throw Error("explicit_act: output dim mismatch");
  const Vector out = forward(net_spec, theta, state);
  Vector action(space.vector_dim());
  explicit_output_to_action(space, out, action);
  return action;
}

}  // namespace itt

#endif  // ITT_POLICY_HPP
