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

#ifndef ITT_RFT_HPP
#define ITT_RFT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "itt/numerics.hpp"

namespace itt {

/// Positive random features psi with E[psi(x)^T psi(y)] = exp(x^T y).
struct FavorFeatures {
  Matrix omega;  // r x d

  static FavorFeatures draw(std::size_t r, std::size_t d, Rng& rng, bool orthogonal = false) {
    if (r == 0 || d == 0) throw Error("favor features: r and d must be >= 1");
    FavorFeatures f;
    if (!orthogonal) {
      f.omega = gaussian_matrix(r, d, rng);
      return f;
    }
    f.omega = Matrix(r, d);
    std::size_t filled = 0;
    while (filled < r) {
      const std::size_t block = std::min(r - filled, d);
      const Matrix b = orthogonal_gaussian_ensemble(block, d, rng);
      for (std::size_t i = 0; i < block; ++i) {
        std::copy(b.row(i).begin(), b.row(i).end(), f.omega.row(filled + i).begin());
      }
      filled += block;
    }
    return f;
  }

  std::size_t num_features() const { return omega.rows(); }
  std::size_t dim() const { return omega.cols(); }
};

namespace detail {

inline void psi_logits(const FavorFeatures& f, std::span<const double> x, std::span<double> out) {
  if (x.size() != f.dim()) throw Error("favor_psi: dimension mismatch");
  const double half_sq = 0.5 * squared_norm(x);
  for (std::size_t i = 0; i < f.num_features(); ++i) out[i] = dot(f.omega.row(i), x) - half_sq;
}

}  // namespace detail

/// psi(x) = r^{-1/2} exp(-|x|^2/2) (exp(omega_i^T x))_i.
inline Vector favor_psi(const FavorFeatures& f, std::span<const double> x) {
  Vector out(f.num_features());
  detail::psi_logits(f, x, out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.num_features()));
  for (double& v : out) {
    v = scale * std::exp(v);
    if (!std::isfinite(v)) throw Error("feature overflow");
  }
  return out;
}

/// psi for a single vector with its largest logit shifted to zero. A uniform
/// rescaling of every entry; sampling ratios are unchanged.
inline Vector favor_psi_shifted(const FavorFeatures& f, std::span<const double> x) {
  Vector out(f.num_features());
  detail::psi_logits(f, x, out);
  const double shift = *std::max_element(out.begin(), out.end());
  if (!std::isfinite(shift)) throw Error("feature overflow");
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.num_features()));
  for (double& v : out) v = scale * std::exp(v - shift);
  return out;
}

/// psi of every row of `x` with one global shift c subtracted inside every
/// exponent (all rows scaled by the same e^{-c}).
inline Matrix favor_psi_rows(const FavorFeatures& f, const Matrix& x) {
  Matrix out(x.rows(), f.num_features());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    detail::psi_logits(f, x.row(i), out.row(i));
    for (double v : out.row(i)) shift = std::max(shift, v);
  }
  if (!std::isfinite(shift)) throw Error("feature overflow");
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.num_features()));
  for (double& v : out.data()) v = scale * std::exp(v - shift);
  return out;
}

/// Binary tree over shuffled action indices; xi(v) is the sum of psi rows
/// of the actions under v.
class RftTree {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Node {
    std::size_t left = kNone;
    std::size_t right = kNone;
    std::size_t action = kNone;  // leaves only
    bool is_leaf() const { return left == kNone; }
  };

  static RftTree build(const Matrix& psi_rows, Rng& rng) {
    const std::size_t n = psi_rows.rows();
    if (n == 0) throw Error("build_tree: empty action set");
    RftTree t;
    t.features_ = psi_rows.cols();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    t.nodes_.reserve(2 * n - 1);
    t.xi_.reserve((2 * n - 1) * t.features_);
    t.build_range(psi_rows, order, 0, n);
    return t;
  }

  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> xi(std::size_t i) const {
    return std::span<const double>(xi_).subspan(i * features_, features_);
  }
  std::size_t root() const { return 0; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_features() const { return features_; }
  std::size_t num_leaves() const { return (nodes_.size() + 1) / 2; }

  std::size_t depth() const { return depth_from(0); }

 private:
  std::size_t build_range(const Matrix& psi, const std::vector<std::size_t>& order,
                          std::size_t lo, std::size_t hi) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    xi_.resize(xi_.size() + features_, 0.0);
    if (hi - lo == 1) {
      nodes_[id].action = order[lo];
      const auto row = psi.row(order[lo]);
      std::copy(row.begin(), row.end(), xi_.begin() + static_cast<std::ptrdiff_t>(id * features_));
      return id;
    }
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    const std::size_t l = build_range(psi, order, lo, mid);
    const std::size_t r = build_range(psi, order, mid, hi);
    nodes_[id].left = l;
    nodes_[id].right = r;
    for (std::size_t k = 0; k < features_; ++k) {
      xi_[id * features_ + k] = xi_[l * features_ + k] + xi_[r * features_ + k];
    }
    return id;
  }

  std::size_t depth_from(std::size_t i) const {
    if (nodes_[i].is_leaf()) return 0;
    return 1 + std::max(depth_from(nodes_[i].left), depth_from(nodes_[i].right));
  }

  std::size_t features_ = 0;
  std::vector<Node> nodes_;
  std::vector<double> xi_;
};

struct RftSample {
  std::size_t index = 0;
  std::size_t decisions = 0;
};

/// Root-to-leaf descent; left with probability a / (a + b), a and b the
/// state's feature products with the children's aggregates.
inline RftSample sample_action(const RftTree& tree, std::span<const double> psi_state, Rng& rng) {
  if (psi_state.size() != tree.num_features()) throw Error("sample_action: feature count mismatch");
  RftSample out;
  std::size_t v = tree.root();
  while (!tree.node(v).is_leaf()) {
    const auto& nd = tree.node(v);
    const double a = dot(psi_state, tree.xi(nd.left));
    const double b = dot(psi_state, tree.xi(nd.right));
    const double total = a + b;
    if (!(total > 0.0) || !std::isfinite(total)) throw Error("sample_action: degenerate branch mass");
    v = rng.uniform() * total < a ? nd.left : nd.right;
    ++out.decisions;
  }
  out.index = tree.node(v).action;
  return out;
}

/// Leaf probabilities obtained by multiplying the branch ratios along every
/// root-to-leaf path.
inline Vector path_probabilities(const RftTree& tree, std::span<const double> psi_state) {
  Vector probs(tree.num_leaves(), 0.0);
  struct Item {
    std::size_t node;
    double p;
  };
  std::vector<Item> stack{{tree.root(), 1.0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const auto& nd = tree.node(it.node);
    if (nd.is_leaf()) {
      probs[nd.action] = it.p;
      continue;
    }
    const double a = dot(psi_state, tree.xi(nd.left));
    const double b = dot(psi_state, tree.xi(nd.right));
    const double total = a + b;
    if (!(total > 0.0)) throw Error("path_probabilities: degenerate branch mass");
    stack.push_back({nd.left, it.p * (a / total)});
    stack.push_back({nd.right, it.p * (b / total)});
  }
  return probs;
}

/// p_i proportional to psi_state^T psi_i.
inline Vector flat_distribution(const Matrix& psi_rows, std::span<const double> psi_state) {
  Vector p(psi_rows.rows());
  double total = 0.0;
  for (std::size_t i = 0; i < psi_rows.rows(); ++i) {
    p[i] = dot(psi_rows.row(i), psi_state);
    total += p[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw Error("flat_distribution: zero normalizer");
  for (double& v : p) v /= total;
  return p;
}

/// softmax(latents . state_latent) with max-shift.
inline Vector exact_softmax_distribution(const Matrix& latents, std::span<const double> state_latent) {
  if (latents.rows() == 0) throw Error("exact_softmax_distribution: empty action set");
  Vector z(latents.rows());
  for (std::size_t i = 0; i < latents.rows(); ++i) z[i] = dot(latents.row(i), state_latent);
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("total_variation: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

}  // namespace itt

#endif  // ITT_RFT_HPP
