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

#ifndef ITT_ES_OPT_HPP
#define ITT_ES_OPT_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "itt/numerics.hpp"

namespace itt {

enum class ResampleMode {
  kPerStep,       // fresh A* at every environment step
  kPerIter,       // one A* per (iteration, worker), drawn independently
  kPerIterShared  // one A* per iteration shared by every worker
};

inline std::string_view to_string(ResampleMode m) {
  switch (m) {
    case ResampleMode::kPerStep: return "per_step";
    case ResampleMode::kPerIter: return "per_iter";
    case ResampleMode::kPerIterShared: return "per_iter_shared";
  }
  return "per_step";
}

inline ResampleMode parse_resample_mode(std::string_view s) {
  if (s == "per_step") return ResampleMode::kPerStep;
  if (s == "per_iter") return ResampleMode::kPerIter;
  if (s == "per_iter_shared") return ResampleMode::kPerIterShared;
  throw ConfigError("unknown resample mode '" + std::string(s) + "'");
}

struct EsConfig {
  double sigma = 1.0;
  double eta = 0.01;
  std::size_t num_perturbations = 0;  // 0 resolves to D
  std::size_t iterations = 100;
  std::size_t lazy_period = 1;
  ResampleMode resample = ResampleMode::kPerStep;
};

enum class EstimatorKind { kAntithetic, kForwardDifference };

struct GradientEstimate {
  Vector gradient;
  EstimatorKind kind = EstimatorKind::kAntithetic;
  std::size_t num_perturbations = 0;
  double sigma = 0.0;
  std::size_t queries = 0;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline double checked_query(const Objective& f, std::span<const double> x, std::size_t index) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error("objective returned a non-finite value at perturbation " + std::to_string(index));
  }
  return v;
}

}  // namespace detail

/// (1 / (2 sigma M)) sum_i [F(theta + sigma e_i) - F(theta - sigma e_i)] e_i
/// for the rows e_i of `ensemble`. Issues exactly 2M queries.
inline GradientEstimate at_gradient_with(const Objective& f, std::span<const double> theta,
                                         double sigma, const Matrix& ensemble) {
  if (!(sigma > 0.0)) throw Error("at_gradient: sigma must be positive");
  if (ensemble.cols() != theta.size()) throw Error("at_gradient: ensemble width mismatch");
  const std::size_t m = ensemble.rows();
  const std::size_t d = theta.size();
  GradientEstimate est{Vector(d, 0.0), EstimatorKind::kAntithetic, m, sigma, 0};
  Vector plus(d), minus(d);
  for (std::size_t i = 0; i < m; ++i) {
    const auto e = ensemble.row(i);
    for (std::size_t k = 0; k < d; ++k) {
      plus[k] = theta[k] + sigma * e[k];
      minus[k] = theta[k] - sigma * e[k];
    }
    const double diff = detail::checked_query(f, plus, i) - detail::checked_query(f, minus, i);
    est.queries += 2;
    for (std::size_t k = 0; k < d; ++k) est.gradient[k] += diff * e[k];
  }
  const double scale = 1.0 / (2.0 * sigma * static_cast<double>(m));
  for (double& g : est.gradient) g *= scale;
  return est;
}

/// Antithetic estimator over a fresh orthogonal ensemble.
inline GradientEstimate at_gradient(const Objective& f, std::span<const double> theta, double sigma,
                                    std::size_t m, Rng& rng) {
  return at_gradient_with(f, theta, sigma, orthogonal_gaussian_ensemble(m, theta.size(), rng));
}

/// (1 / (sigma M)) sum_i [F(theta + sigma e_i) - F(theta)] e_i; M + 1 queries.
inline GradientEstimate fd_gradient_with(const Objective& f, std::span<const double> theta,
                                         double sigma, const Matrix& ensemble) {
  if (!(sigma > 0.0)) throw Error("fd_gradient: sigma must be positive");
  if (ensemble.cols() != theta.size()) throw Error("fd_gradient: ensemble width mismatch");
  const std::size_t m = ensemble.rows();
  const std::size_t d = theta.size();
  GradientEstimate est{Vector(d, 0.0), EstimatorKind::kForwardDifference, m, sigma, 1};
  const double base = detail::checked_query(f, theta, m);
  Vector plus(d);
  for (std::size_t i = 0; i < m; ++i) {
    const auto e = ensemble.row(i);
    for (std::size_t k = 0; k < d; ++k) plus[k] = theta[k] + sigma * e[k];
    const double diff = detail::checked_query(f, plus, i) - base;
    ++est.queries;
    for (std::size_t k = 0; k < d; ++k) est.gradient[k] += diff * e[k];
  }
  const double scale = 1.0 / (sigma * static_cast<double>(m));
  for (double& g : est.gradient) g *= scale;
  return est;
}

inline GradientEstimate fd_gradient(const Objective& f, std::span<const double> theta, double sigma,
                                    std::size_t m, Rng& rng) {
  return fd_gradient_with(f, theta, sigma, orthogonal_gaussian_ensemble(m, theta.size(), rng));
}

/// Gradient ascent step theta + eta * estimate.
inline Vector es_step(std::span<const double> theta, std::span<const double> estimate, double eta) {
  if (theta.size() != estimate.size()) throw Error("es_step: shape mismatch");
  Vector out(theta.begin(), theta.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += eta * estimate[k];
  return out;
}

/// F(theta) = c + g^T theta + theta^T H theta / 2 with symmetric H.
struct QuadraticObjective {
  Vector g;
  Matrix h;
  double c = 0.0;

  std::size_t dim() const { return g.size(); }

  void validate() const {
    if (h.rows() != g.size() || h.cols() != g.size()) throw Error("quadratic: Hessian shape mismatch");
    for (std::size_t i = 0; i < h.rows(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(h(i, j) - h(j, i)) > 1e-12 * (1.0 + std::abs(h(i, j)))) {
          throw Error("quadratic: Hessian is not symmetric");
        }
      }
    }
  }

  double value(std::span<const double> x) const {
    double quad = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) quad += x[i] * dot(h.row(i), x);
    return c + dot(g, x) + 0.5 * quad;
  }

  Vector gradient(std::span<const double> x) const {
    Vector out = h.multiply(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
    return out;
  }

  double hessian_trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) t += h(i, i);
    return t;
  }

  double hessian_frobenius_sq() const { return squared_norm(h.data()); }

  Objective as_objective() const {
    return [this](std::span<const double> x) { return value(x); };
  }

  /// Gaussian g, symmetric Gaussian H scaled by `hessian_scale`, c ~ N(0,1).
  static QuadraticObjective random(std::size_t dim, double hessian_scale, Rng& rng) {
    QuadraticObjective q;
    q.g.resize(dim);
    for (double& v : q.g) v = rng.normal();
    q.h = Matrix(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = hessian_scale * rng.normal();
        q.h(i, j) = v;
        q.h(j, i) = v;
      }
    }
    q.c = rng.normal();
    return q;
  }
};

/// MSE of the orthogonal antithetic estimator on a quadratic:
/// ((D + 2) / M - 1) |grad F(theta)|^2. Smoothing leaves the gradient of a
/// quadratic unchanged, so grad F_sigma = grad F.
inline double at_mse_closed_form(const QuadraticObjective& q, std::span<const double> theta,
                                 std::size_t m) {
  const std::size_t d = q.dim();
  if (m == 0 || m > d) throw Error("at_mse_closed_form: requires 1 <= M <= D");
  const double gsq = squared_norm(q.gradient(theta));
  return ((static_cast<double>(d) + 2.0) / static_cast<double>(m) - 1.0) * gsq;
}

/// MSE of the orthogonal forward-difference estimator on a quadratic, keeping
/// every fourth- and sixth-moment term:
/// [(D + 2)|g|^2 + sigma^2 (D + 4)((tr H)^2 + 2|H|_F^2) / 4] / M - |g|^2.
inline double fd_mse_closed_form(const QuadraticObjective& q, std::span<const double> theta,
                                 double sigma, std::size_t m) {
  const auto d = static_cast<double>(q.dim());
  if (m == 0 || m > q.dim()) throw Error("fd_mse_closed_form: requires 1 <= M <= D");
  const double gsq = squared_norm(q.gradient(theta));
  const double tr = q.hessian_trace();
  const double quartic = (d + 4.0) * (tr * tr + 2.0 * q.hessian_frobenius_sq());
  return ((d + 2.0) * gsq + 0.25 * sigma * sigma * quartic) / static_cast<double>(m) - gsq;
}

/// The expression that keeps only squared Hessian entries and a sigma^4
/// factor: (D+2)/M |g|^2 + (D+4) sigma^4 |H|_F^2 / (4M)
/// + (D+2) sigma^4 sum_i H_ii^2 / M - |g|^2. Reported next to Monte Carlo
/// results; it is not the estimator's MSE in general.
inline double fd_mse_squared_entry_form(const QuadraticObjective& q, std::span<const double> theta,
                                        double sigma, std::size_t m) {
  const auto d = static_cast<double>(q.dim());
  const double gsq = squared_norm(q.gradient(theta));
  double diag_sq = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i) diag_sq += q.h(i, i) * q.h(i, i);
  const double s4 = sigma * sigma * sigma * sigma;
  const auto mm = static_cast<double>(m);
  return (d + 2.0) / mm * gsq + (d + 4.0) * s4 / (4.0 * mm) * q.hessian_frobenius_sq() +
         (d + 2.0) * s4 / mm * diag_sq - gsq;
}

/// Average over `trials` of |estimate - grad F(theta)|^2, one fresh
/// orthogonal ensemble per trial.
inline double mc_mse(EstimatorKind kind, const QuadraticObjective& q, std::span<const double> theta,
                     double sigma, std::size_t m, std::size_t trials, Rng& rng) {
  if (trials == 0) throw Error("mc_mse: trials must be >= 1");
  const Vector truth = q.gradient(theta);
  const Objective f = q.as_objective();
  double acc = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix ens = orthogonal_gaussian_ensemble(m, theta.size(), rng);
    const GradientEstimate est = kind == EstimatorKind::kAntithetic
                                     ? at_gradient_with(f, theta, sigma, ens)
                                     : fd_gradient_with(f, theta, sigma, ens);
    double err = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      const double e = est.gradient[k] - truth[k];
      err += e * e;
    }
    acc += err;
  }
  return acc / static_cast<double>(trials);
}

/// Monte Carlo of grad F_sigma(theta) = E[F(theta + sigma e) e] / sigma with
/// iid Gaussian e.
inline Vector smoothing_gradient_mc(const Objective& f, std::span<const double> theta, double sigma,
                                    std::size_t samples, Rng& rng) {
  if (samples == 0) throw Error("smoothing_gradient_mc: samples must be >= 1");
  const std::size_t d = theta.size();
  Vector acc(d, 0.0), eps(d), x(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      eps[k] = rng.normal();
      x[k] = theta[k] + sigma * eps[k];
    }
    const double v = f(x);
    for (std::size_t k = 0; k < d; ++k) acc[k] += v * eps[k];
  }
  const double scale = 1.0 / (sigma * static_cast<double>(samples));
  for (double& v : acc) v *= scale;
  return acc;
}

/// True when the action tower is perturbed and updated at `iteration`.
inline bool action_tower_active(std::size_t iteration, std::size_t lazy_period) {
  return lazy_period <= 1 || iteration % lazy_period == 0;
}

/// Zeroes the trailing action-tower columns on frozen iterations.
inline Matrix lazy_mask(const Matrix& ensemble, std::size_t state_params, std::size_t action_params,
                        std::size_t iteration, std::size_t lazy_period) {
  if (ensemble.cols() != state_params + action_params) throw Error("lazy_mask: layout mismatch");
  if (lazy_period == 0) throw Error("lazy_mask: period must be >= 1");
  Matrix out = ensemble;
  if (action_tower_active(iteration, lazy_period)) return out;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    std::fill(row.begin() + static_cast<std::ptrdiff_t>(state_params), row.end(), 0.0);
  }
  return out;
}

}  // namespace itt

#endif  // ITT_ES_OPT_HPP
