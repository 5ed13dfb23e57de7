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

#ifndef ITT_NUMERICS_HPP
#define ITT_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace itt {

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration; the CLI maps this to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

using Vector = std::vector<double>;

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// FNV-1a hash of a label, used to give derived streams readable tags.
constexpr std::uint64_t tag(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Counter-based generator: draw k is mix64(seed + k * golden).
///
/// Copies are independent cursors over the same stream. Use derive() to
/// obtain statistically independent sub-streams keyed by arbitrary tags, so
/// that parallel workers never share a mutable generator.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed = 0) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

  constexpr std::uint64_t next_u64() noexcept {
    return detail::mix64(seed_ + (++counter_) * detail::kGolden);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift; the residual bias is below 2^-64 * n.
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Deterministic sub-stream keyed by (seed, tags...). Order of tags matters.
template <typename... Tags>
constexpr Rng derive(std::uint64_t seed, Tags... tags) noexcept {
  std::uint64_t key = detail::mix64(seed + 0x632BE59BD9B4E019ULL);
  ((key = detail::mix64(key ^ detail::mix64(static_cast<std::uint64_t>(tags) + detail::kGolden))), ...);
  return Rng(key);
}

/// Dense row-major matrix of doubles. Only the row and matrix-vector
/// operations the library needs are provided.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_) throw Error("matrix-vector shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) {
      const double* a = data_.data() + r * cols_;
      double acc = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) acc += a[c] * x[c];
      y[r] = acc;
    }
  }

  Vector multiply(std::span<const double> x) const {
    Vector y(rows_);
    multiply(x, y);
    return y;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }
inline double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

/// Matrix of independent standard normal entries.
inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) throw Error("gaussian_matrix: empty shape");
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

/// M pairwise-orthogonal rows in R^D, each marginally N(0, I_D).
///
/// Gram-Schmidt (two passes) on an iid Gaussian block gives orthonormal
/// directions; each row is then scaled to the norm of a fresh D-dimensional
/// Gaussian, i.e. a chi_D draw independent of the direction.
inline Matrix orthogonal_gaussian_ensemble(std::size_t count, std::size_t dim, Rng& rng) {
  if (count == 0 || dim == 0) throw Error("orthogonal_gaussian_ensemble: empty shape");
  if (count > dim) throw Error("ensemble size exceeds dimension");
  for (;;) {
    Matrix m = gaussian_matrix(count, dim, rng);
    bool degenerate = false;
    for (std::size_t i = 0; i < count && !degenerate; ++i) {
      auto ri = m.row(i);
      const double original = norm(ri);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < i; ++j) {
          auto rj = m.row(j);
          const double proj = dot(ri, rj);
          for (std::size_t k = 0; k < dim; ++k) ri[k] -= proj * rj[k];
        }
      }
      const double n = norm(ri);
      if (!(n > 1e-10 * original)) {
        degenerate = true;
        break;
      }
      for (double& v : ri) v /= n;
    }
    if (degenerate) continue;
    for (std::size_t i = 0; i < count; ++i) {
      double chi2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      const double scale = std::sqrt(chi2);
      for (double& v : m.row(i)) v *= scale;
    }
    return m;
  }
}

/// Index of the largest entry; ties go to the lowest index.
inline std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw Error("argmax_first: empty input");
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error("argmax_first: non-finite entry at " + std::to_string(i));
    if (values[i] > values[best]) best = i;
  }
  return best;
}

inline double median(std::span<const double> values) {
  if (values.empty()) throw Error("median: empty input");
  Vector v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// Linear-interpolated percentile, q in [0, 100].
inline double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw Error("percentile: empty input");
  Vector v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

inline double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean: empty input");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

/// Population standard deviation (n denominator).
inline double stddev(std::span<const double> values) {
  const double mu = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace itt

#endif  // ITT_NUMERICS_HPP
