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

#ifndef ITT_HARNESS_STATS_HPP
#define ITT_HARNESS_STATS_HPP

#include <cmath>
#include <span>

#include <boost/math/special_functions/beta.hpp>

#include "itt/numerics.hpp"

namespace itt {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
};

/// Two-sided paired t-test on xs - ys with n - 1 degrees of freedom.
inline TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("paired_t_test: samples differ in length");
  const std::size_t n = xs.size();
  if (n < 2) throw Error("paired_t_test: degenerate sample");
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = xs[i] - ys[i];
  const double md = mean(d);
  double ss = 0.0;
  for (double v : d) ss += (v - md) * (v - md);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    if (md == 0.0) return {0.0, 1.0};
    throw Error("paired_t_test: degenerate sample");
  }
  TTestResult r;
  r.t = md / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  r.p = boost::math::ibeta(df / 2.0, 0.5, df / (df + r.t * r.t));
  return r;
}

}  // namespace itt

#endif  // ITT_HARNESS_STATS_HPP
