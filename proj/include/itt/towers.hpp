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

#ifndef ITT_TOWERS_HPP
#define ITT_TOWERS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itt/numerics.hpp"

namespace itt {

enum class Activation { kReluHiddenLinearOut, kAllLinear };

inline std::string_view to_string(Activation a) {
  return a == Activation::kAllLinear ? "all_linear" : "relu_hidden_linear_out";
}

inline Activation parse_activation(std::string_view s) {
  if (s == "relu_hidden_linear_out" || s == "relu") return Activation::kReluHiddenLinearOut;
  if (s == "all_linear" || s == "linear") return Activation::kAllLinear;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

/// Bias-free MLP shape: layer_dims = [in, h1, ..., out].
struct TowerSpec {
  std::vector<std::size_t> layer_dims;
  Activation activation = Activation::kReluHiddenLinearOut;

  TowerSpec() = default;
  TowerSpec(std::vector<std::size_t> dims, Activation act = Activation::kReluHiddenLinearOut)
      : layer_dims(std::move(dims)), activation(act) {
    validate();
  }

  void validate() const {
    if (layer_dims.size() < 2) throw Error("tower spec needs at least input and output dims");
    for (std::size_t d : layer_dims) {
      if (d == 0) throw Error("tower spec dims must be positive");
    }
  }

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t output_dim() const { return layer_dims.back(); }
  std::size_t num_layers() const { return layer_dims.size() - 1; }
  std::size_t widest() const {
    std::size_t w = 0;
    for (std::size_t d : layer_dims) w = std::max(w, d);
    return w;
  }

  /// `layers` weight matrices; every hidden width equals `hidden`.
  static TowerSpec uniform(std::size_t in, std::size_t hidden, std::size_t out,
                           std::size_t layers, Activation act) {
    if (layers == 0) throw Error("tower needs at least one layer");
    std::vector<std::size_t> dims{in};
    for (std::size_t l = 1; l < layers; ++l) dims.push_back(hidden);
    dims.push_back(out);
    return TowerSpec(std::move(dims), act);
  }

  friend bool operator==(const TowerSpec&, const TowerSpec&) = default;
};

inline std::size_t param_count(const TowerSpec& spec) {
  spec.validate();
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < spec.layer_dims.size(); ++i) {
    n += spec.layer_dims[i] * spec.layer_dims[i + 1];
  }
  return n;
}

/// Only the dot-product kernel is supported: E(s, a) = -<l_S(s), l_A(a)>.
enum class KernelKind { kDotProduct };

/// Scratch space for allocation-free forward passes in hot loops.
class ForwardWorkspace {
 public:
  void reserve(std::size_t width) {
    if (a_.size() < width) {
      a_.resize(width);
      b_.resize(width);
    }
  }
  std::span<double> a() { return a_; }
  std::span<double> b() { return b_; }

 private:
  Vector a_, b_;
};

/// y_{k+1} = act(W_k y_k), W_k read row-major from `params` in layer order.
inline void forward_into(const TowerSpec& spec, std::span<const double> params,
                         std::span<const double> input, std::span<double> out,
                         ForwardWorkspace& ws) {
  if (input.size() != spec.input_dim()) throw Error("forward: input dimension mismatch");
  if (params.size() != param_count(spec)) throw Error("forward: parameter slice length mismatch");
  if (out.size() != spec.output_dim()) throw Error("forward: output dimension mismatch");
  ws.reserve(spec.widest());
  auto cur = ws.a();
  auto nxt = ws.b();
  std::copy(input.begin(), input.end(), cur.begin());
  const double* w = params.data();
  const std::size_t layers = spec.num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec.layer_dims[l];
    const std::size_t outd = spec.layer_dims[l + 1];
    const bool relu = spec.activation == Activation::kReluHiddenLinearOut && l + 1 < layers;
    for (std::size_t r = 0; r < outd; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < in; ++c) acc += w[r * in + c] * cur[c];
      nxt[r] = relu && acc < 0.0 ? 0.0 : acc;
    }
    w += in * outd;
    std::swap(cur, nxt);
  }
  std::copy(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(spec.output_dim()), out.begin());
}

inline Vector forward(const TowerSpec& spec, std::span<const double> params,
                      std::span<const double> input) {
  ForwardWorkspace ws;
  Vector out(spec.output_dim());
  forward_into(spec, params, input, out, ws);
  return out;
}

/// Views (theta_1, theta_2) into the flat parameter vector.
inline std::pair<std::span<const double>, std::span<const double>> split_params(
    std::span<const double> theta, const TowerSpec& state_spec, const TowerSpec& action_spec) {
  const std::size_t n1 = param_count(state_spec);
  const std::size_t n2 = param_count(action_spec);
  if (theta.size() != n1 + n2) {
    throw Error("split_params: expected " + std::to_string(n1 + n2) + " parameters, got " +
                std::to_string(theta.size()));
  }
  return {theta.subspan(0, n1), theta.subspan(n1, n2)};
}

inline Vector init_params(std::size_t dim) {
  if (dim == 0) throw Error("init_params: zero dimension");
  return Vector(dim, 0.0);
}

inline Vector init_params(const TowerSpec& spec) { return init_params(param_count(spec)); }

}  // namespace itt

#endif  // ITT_TOWERS_HPP
