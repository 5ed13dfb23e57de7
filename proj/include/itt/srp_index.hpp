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

#ifndef ITT_SRP_INDEX_HPP
#define ITT_SRP_INDEX_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "itt/numerics.hpp"

namespace itt {

/// [latent; sqrt(C^2 - |latent|^2)], a point on the sphere of radius C.
inline Vector augment_action(std::span<const double> latent, double norm_bound) {
  const double sq = squared_norm(latent);
  const double c2 = norm_bound * norm_bound;
  double radicand = c2 - sq;
  if (radicand < 0.0) {
    if (sq - c2 > 1e-12 * std::max(1.0, c2)) throw Error("norm bound violated");
    radicand = 0.0;
  }
  Vector out(latent.begin(), latent.end());
  out.push_back(std::sqrt(radicand));
  return out;
}

/// [latent; 0]; dot products with augmented actions are preserved.
inline Vector augment_state(std::span<const double> latent) {
  Vector out(latent.begin(), latent.end());
  out.push_back(0.0);
  return out;
}

/// Bit i is set iff <omega_i, x> - b_i > 0. Supports up to 64 projections.
inline std::uint64_t srp_hash(const Matrix& projections, std::span<const double> offsets,
                              std::span<const double> x) {
  if (projections.cols() != x.size()) throw Error("srp_hash: dimension mismatch");
  if (offsets.size() != projections.rows()) throw Error("srp_hash: offsets length mismatch");
  if (projections.rows() > 64) throw Error("srp_hash: at most 64 projections");
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < projections.rows(); ++i) {
    if (dot(projections.row(i), x) - offsets[i] > 0.0) code |= std::uint64_t{1} << i;
  }
  return code;
}

/// m rows in R^dim arranged as orthogonal Gaussian blocks of size <= dim.
inline Matrix block_orthogonal_projections(std::size_t m, std::size_t dim, Rng& rng) {
  Matrix out(m, dim);
  std::size_t filled = 0;
  while (filled < m) {
    const std::size_t block = std::min(m - filled, dim);
    const Matrix b = orthogonal_gaussian_ensemble(block, dim, rng);
    for (std::size_t r = 0; r < block; ++r) {
      std::copy(b.row(r).begin(), b.row(r).end(), out.row(filled + r).begin());
    }
    filled += block;
  }
  return out;
}

struct SrpQueryResult {
  std::size_t index = 0;
  std::size_t candidates_examined = 0;
};

/// Signed-random-projection index over a fixed action-latent set.
///
/// MIP over the latents is reduced to angular NNS by augmenting every action
/// latent onto the sphere of radius C; buckets are probed in order of Hamming
/// distance from the query code and candidates are rescored exactly.
class SrpIndex {
 public:
  static SrpIndex build(const Matrix& latents, std::size_t m, bool median_shift, Rng& rng) {
    if (latents.rows() == 0) throw Error("build_index: empty latent set");
    if (m == 0 || m > 64) throw Error("build_index: m must be in [1, 64]");
    SrpIndex idx;
    const std::size_t n = latents.rows();
    const std::size_t d = latents.cols();
    idx.latent_dim_ = d;

    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, norm(latents.row(i)));
    idx.norm_bound_ = c;

    idx.augmented_ = Matrix(n, d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector a = augment_action(latents.row(i), c);
      std::copy(a.begin(), a.end(), idx.augmented_.row(i).begin());
    }

    idx.projections_ = block_orthogonal_projections(m, d + 1, rng);
    idx.offsets_.assign(m, 0.0);
    if (median_shift) {
      Vector proj(n);
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t i = 0; i < n; ++i) proj[i] = dot(idx.projections_.row(p), idx.augmented_.row(i));
        idx.offsets_[p] = median(proj);
      }
    }

    idx.codes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      idx.codes_[i] = srp_hash(idx.projections_, idx.offsets_, idx.augmented_.row(i));
    }

    idx.members_.resize(n);
    std::iota(idx.members_.begin(), idx.members_.end(), std::size_t{0});
    std::stable_sort(idx.members_.begin(), idx.members_.end(),
                     [&](std::size_t a, std::size_t b) { return idx.codes_[a] < idx.codes_[b]; });
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t code = idx.codes_[idx.members_[k]];
      if (idx.bucket_codes_.empty() || idx.bucket_codes_.back() != code) {
        idx.bucket_codes_.push_back(code);
        idx.bucket_offsets_.push_back(k);
      }
    }
    idx.bucket_offsets_.push_back(n);
    return idx;
  }

  /// Exact argmax of <latent_i, state_latent> over the candidates gathered
  /// from buckets in (Hamming distance, code) order until `budget` is reached.
  SrpQueryResult query(std::span<const double> state_latent, std::size_t budget) const {
    if (size() == 0) throw Error("query: empty index");
    if (budget == 0) throw Error("query: budget must be >= 1");
    if (state_latent.size() != latent_dim_) throw Error("query: latent dimension mismatch");
    const std::uint64_t q = hash_state(state_latent);

    const std::size_t nb = bucket_codes_.size();
    const std::size_t m = projections_.rows();
    // Counting sort by distance; bucket_codes_ is ascending so code order is kept.
    std::vector<std::size_t> count(m + 2, 0);
    std::vector<std::uint8_t> dist(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      dist[b] = static_cast<std::uint8_t>(std::popcount(bucket_codes_[b] ^ q));
      ++count[dist[b] + 1];
    }
    for (std::size_t k = 1; k < count.size(); ++k) count[k] += count[k - 1];
    std::vector<std::size_t> order(nb);
    for (std::size_t b = 0; b < nb; ++b) order[count[dist[b]]++] = b;

    SrpQueryResult best;
    double best_score = -INFINITY;
    bool found = false;
    for (std::size_t b : order) {
      for (std::size_t k = bucket_offsets_[b]; k < bucket_offsets_[b + 1]; ++k) {
        const std::size_t i = members_[k];
        const double s = dot(augmented_.row(i).first(latent_dim_), state_latent);
        if (!found || s > best_score || (s == best_score && i < best.index)) {
          best_score = s;
          best.index = i;
          found = true;
        }
        ++best.candidates_examined;
      }
      if (best.candidates_examined >= budget) break;
    }
    return best;
  }

  std::uint64_t hash_state(std::span<const double> state_latent) const {
    return srp_hash(projections_, offsets_, augment_state(state_latent));
  }

  std::size_t size() const { return codes_.size(); }
  std::size_t num_projections() const { return projections_.rows(); }
  std::size_t latent_dim() const { return latent_dim_; }
  double norm_bound() const { return norm_bound_; }
  const Matrix& projections() const { return projections_; }
  const Vector& offsets() const { return offsets_; }
  const Matrix& augmented_latents() const { return augmented_; }
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  std::size_t num_buckets() const { return bucket_codes_.size(); }
  std::uint64_t bucket_code(std::size_t b) const { return bucket_codes_[b]; }
  std::span<const std::size_t> bucket(std::size_t b) const {
    return std::span<const std::size_t>(members_).subspan(bucket_offsets_[b],
                                                          bucket_offsets_[b + 1] - bucket_offsets_[b]);
  }

 private:
  std::size_t latent_dim_ = 0;
  double norm_bound_ = 0.0;
  Matrix projections_;
  Vector offsets_;
  Matrix augmented_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> bucket_codes_;
  std::vector<std::size_t> bucket_offsets_;
  std::vector<std::size_t> members_;
};

/// phi(x)^T phi(y) with phi(z) = m^{-1/2} (sgn <omega_i, z>)_i; estimates
/// 1 - 2 angle(x, y) / pi.
inline double angular_kernel_estimate(std::span<const double> x, std::span<const double> y,
                                      const Matrix& projections) {
  if (x.size() != projections.cols() || y.size() != projections.cols()) {
    throw Error("angular_kernel_estimate: dimension mismatch");
  }
  if (squared_norm(x) == 0.0 || squared_norm(y) == 0.0) {
    throw Error("angular_kernel_estimate: zero vector has no angle");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < projections.rows(); ++i) {
    const double sx = dot(projections.row(i), x) > 0.0 ? 1.0 : -1.0;
    const double sy = dot(projections.row(i), y) > 0.0 ? 1.0 : -1.0;
    acc += sx * sy;
  }
  return acc / static_cast<double>(projections.rows());
}

}  // namespace itt

#endif  // ITT_SRP_INDEX_HPP
