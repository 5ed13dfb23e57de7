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

#ifndef ITT_ENVS_HPP
#define ITT_ENVS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "itt/numerics.hpp"
#include "itt/policy.hpp"

namespace itt {

enum class EnvId { kCartPole, kMountainCar, kMountainCarContinuous, kPendulum };

inline std::string_view to_string(EnvId id) {
  switch (id) {
    case EnvId::kCartPole: return "cartpole";
    case EnvId::kMountainCar: return "mountaincar";
    case EnvId::kMountainCarContinuous: return "mountaincar_continuous";
    case EnvId::kPendulum: return "pendulum";
  }
  return "cartpole";
}

inline EnvId parse_env_id(std::string_view s) {
  if (s == "cartpole") return EnvId::kCartPole;
  if (s == "mountaincar") return EnvId::kMountainCar;
  if (s == "mountaincar_continuous") return EnvId::kMountainCarContinuous;
  if (s == "pendulum") return EnvId::kPendulum;
  throw ConfigError("unknown environment '" + std::string(s) + "'");
}

inline std::size_t default_max_steps(EnvId id) {
  switch (id) {
    case EnvId::kCartPole: return 500;
    case EnvId::kMountainCar: return 200;
    case EnvId::kMountainCarContinuous: return 999;
    case EnvId::kPendulum: return 200;
  }
  return 200;
}

struct EnvSpec {
  EnvId id = EnvId::kCartPole;
  std::size_t obs_dim = 4;
  ActionSpace action_space = ActionSpace::discrete(2);
  std::size_t max_steps = 500;
};

/// max_steps == 0 selects the environment's default cap.
inline EnvSpec make_env_spec(EnvId id, std::size_t max_steps = 0) {
  EnvSpec spec;
  spec.id = id;
  spec.max_steps = max_steps == 0 ? default_max_steps(id) : max_steps;
  switch (id) {
    case EnvId::kCartPole:
      spec.obs_dim = 4;
      spec.action_space = ActionSpace::discrete(2);
      break;
    case EnvId::kMountainCar:
      spec.obs_dim = 2;
      spec.action_space = ActionSpace::discrete(3);
      break;
    case EnvId::kMountainCarContinuous:
      spec.obs_dim = 2;
      spec.action_space = ActionSpace::box({-1.0}, {1.0});
      break;
    case EnvId::kPendulum:
      spec.obs_dim = 3;
      spec.action_space = ActionSpace::box({-2.0}, {2.0});
      break;
  }
  return spec;
}

struct StepResult {
  std::span<const double> observation;
  double reward = 0.0;
  bool done = false;
};

/// Single-owner mutable environment. The episode step cap is enforced here.
class Environment {
 public:
  explicit Environment(EnvSpec spec) : spec_(std::move(spec)) {
    if (spec_.max_steps == 0) throw Error("max_steps must be >= 1");
  }
  virtual ~Environment() = default;

  const EnvSpec& spec() const { return spec_; }
  std::size_t steps() const { return steps_; }
  bool done() const { return done_; }

  std::span<const double> reset(std::uint64_t seed) {
    Rng rng = derive(seed, tag("reset"));
    steps_ = 0;
    done_ = false;
    do_reset(rng);
    return observation();
  }

  StepResult step(std::span<const double> action) {
    if (done_) throw Error("step called on a finished episode");
    if (action.size() != spec_.action_space.vector_dim()) throw Error("step: action width mismatch");
    bool terminal = false;
    const double reward = do_step(action, terminal);
    ++steps_;
    done_ = terminal || steps_ >= spec_.max_steps;
    return {observation(), reward, done_};
  }

  virtual std::span<const double> observation() const = 0;

 protected:
  virtual void do_reset(Rng& rng) = 0;
  virtual double do_step(std::span<const double> action, bool& terminal) = 0;

 private:
  EnvSpec spec_;
  std::size_t steps_ = 0;
  bool done_ = true;
};

/// Cart-pole balancing with Euler integration.
class CartPole final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kCartMass = 1.0;
  static constexpr double kPoleMass = 0.1;
  static constexpr double kTotalMass = kCartMass + kPoleMass;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kPoleMassLength = kPoleMass * kHalfLength;
  static constexpr double kForce = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kThetaLimit = 12.0 * 2.0 * std::numbers::pi / 360.0;
  static constexpr double kXLimit = 2.4;

  explicit CartPole(std::size_t max_steps = 0) : Environment(make_env_spec(EnvId::kCartPole, max_steps)) {}

  std::span<const double> observation() const override { return state_; }

  /// Overrides the state and starts a fresh episode (tests and replays).
  void set_state(const std::array<double, 4>& s) {
    reset(0);
    state_ = s;
  }

 protected:
  void do_reset(Rng& rng) override {
    for (double& v : state_) v = rng.uniform(-0.05, 0.05);
  }

  double do_step(std::span<const double> action, bool& terminal) override {
    const double force = argmax_first(action) == 1 ? kForce : -kForce;
    auto& [x, x_dot, theta, theta_dot] = state_;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double temp = (force + kPoleMassLength * theta_dot * theta_dot * sin_t) / kTotalMass;
    const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                             (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / kTotalMass));
    const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;
    x += kTau * x_dot;
    x_dot += kTau * x_acc;
    theta += kTau * theta_dot;
    theta_dot += kTau * theta_acc;
    terminal = x < -kXLimit || x > kXLimit || theta < -kThetaLimit || theta > kThetaLimit;
    return 1.0;
  }

 private:
  std::array<double, 4> state_{};
};

/// Under-powered car in a valley; three discrete pushes.
class MountainCar final : public Environment {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.5;
  static constexpr double kForce = 0.001;
  static constexpr double kGravity = 0.0025;

  explicit MountainCar(std::size_t max_steps = 0)
      : Environment(make_env_spec(EnvId::kMountainCar, max_steps)) {}

  std::span<const double> observation() const override { return state_; }

  void set_state(double position, double velocity) {
    reset(0);
    state_ = {position, velocity};
  }

 protected:
  void do_reset(Rng& rng) override { state_ = {rng.uniform(-0.6, -0.4), 0.0}; }

  double do_step(std::span<const double> action, bool& terminal) override {
    const auto a = static_cast<double>(argmax_first(action));
    auto& [pos, vel] = state_;
    vel += (a - 1.0) * kForce + std::cos(3.0 * pos) * (-kGravity);
    vel = std::clamp(vel, -kMaxSpeed, kMaxSpeed);
    pos += vel;
    pos = std::clamp(pos, kMinPosition, kMaxPosition);
    if (pos == kMinPosition && vel < 0.0) vel = 0.0;
    terminal = pos >= kGoalPosition && vel >= 0.0;
    return -1.0;
  }

 private:
  std::array<double, 2> state_{};
};

/// Continuous-force mountain car; +100 at the goal minus 0.1 u^2 per step.
class MountainCarContinuous final : public Environment {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.45;
  static constexpr double kPower = 0.0015;
  static constexpr double kGravity = 0.0025;

  explicit MountainCarContinuous(std::size_t max_steps = 0)
      : Environment(make_env_spec(EnvId::kMountainCarContinuous, max_steps)) {}

  std::span<const double> observation() const override { return state_; }

  void set_state(double position, double velocity) {
    reset(0);
    state_ = {position, velocity};
  }

 protected:
  void do_reset(Rng& rng) override { state_ = {rng.uniform(-0.6, -0.4), 0.0}; }

  double do_step(std::span<const double> action, bool& terminal) override {
    const double force = std::clamp(action[0], -1.0, 1.0);
    auto& [pos, vel] = state_;
    vel += force * kPower - kGravity * std::cos(3.0 * pos);
    vel = std::clamp(vel, -kMaxSpeed, kMaxSpeed);
    pos += vel;
    pos = std::clamp(pos, kMinPosition, kMaxPosition);
    if (pos == kMinPosition && vel < 0.0) vel = 0.0;
    terminal = pos >= kGoalPosition && vel >= 0.0;
    double reward = terminal ? 100.0 : 0.0;
    reward -= 0.1 * force * force;
    return reward;
  }

 private:
  std::array<double, 2> state_{};
};

/// Torque-limited pendulum swing-up; observation (cos th, sin th, th_dot).
class Pendulum final : public Environment {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;

  explicit Pendulum(std::size_t max_steps = 0) : Environment(make_env_spec(EnvId::kPendulum, max_steps)) {}

  std::span<const double> observation() const override { return obs_; }

  void set_state(double theta, double theta_dot) {
    reset(0);
    theta_ = theta;
    theta_dot_ = theta_dot;
    update_obs();
  }

  static double wrap_angle(double x) {
    const double two_pi = 2.0 * std::numbers::pi;
    return std::fmod(std::fmod(x + std::numbers::pi, two_pi) + two_pi, two_pi) - std::numbers::pi;
  }

 protected:
  void do_reset(Rng& rng) override {
    theta_ = rng.uniform(-std::numbers::pi, std::numbers::pi);
    theta_dot_ = rng.uniform(-1.0, 1.0);
    update_obs();
  }

  double do_step(std::span<const double> action, bool& terminal) override {
    const double u = std::clamp(action[0], -kMaxTorque, kMaxTorque);
    const double th = wrap_angle(theta_);
    const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;
    double new_dot = theta_dot_ + (3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) +
                                   3.0 / (kMass * kLength * kLength) * u) * kDt;
    new_dot = std::clamp(new_dot, -kMaxSpeed, kMaxSpeed);
    theta_ += new_dot * kDt;
    theta_dot_ = new_dot;
    update_obs();
    terminal = false;
    return -cost;
  }

 private:
  void update_obs() { obs_ = {std::cos(theta_), std::sin(theta_), theta_dot_}; }

  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  std::array<double, 3> obs_{};
};

inline std::unique_ptr<Environment> make_env(EnvId id, std::size_t max_steps = 0) {
  switch (id) {
    case EnvId::kCartPole: return std::make_unique<CartPole>(max_steps);
    case EnvId::kMountainCar: return std::make_unique<MountainCar>(max_steps);
    case EnvId::kMountainCarContinuous: return std::make_unique<MountainCarContinuous>(max_steps);
    case EnvId::kPendulum: return std::make_unique<Pendulum>(max_steps);
  }
  throw Error("unknown environment");
}

struct RolloutStats {
  double total_reward = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
};

/// Runs one episode. `act(observation, action_out)` fills the action.
template <typename Act>
RolloutStats rollout(Environment& env, Act&& act, std::uint64_t seed) {
  RolloutStats stats;
  stats.seed = seed;
  Vector action(env.spec().action_space.vector_dim());
  std::span<const double> obs = env.reset(seed);
  for (;;) {
    act(obs, std::span<double>(action));
    const StepResult r = env.step(action);
    stats.total_reward += r.reward;
    ++stats.steps;
    obs = r.observation;
    if (r.done) break;
  }
  return stats;
}

}  // namespace itt

#endif  // ITT_ENVS_HPP
