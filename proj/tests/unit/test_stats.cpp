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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "itt/harness/stats.hpp"

namespace itt {
namespace {

// Two-sided tail of Student's t by composite Simpson integration of the density.
double t_two_sided_p(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  const auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double a = 0.0, b = std::abs(t);
  const int n = 20000;
  const double h = (b - a) / n;
  double s = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * pdf(a + i * h);
  const double central = s * h / 3.0;
  return 1.0 - 2.0 * central;
}

TEST(PairedTTest, IdenticalSamples) {
  const Vector x{1, 2, 3, 4};
  const TTestResult r = paired_t_test(x, x);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
}

TEST(PairedTTest, CriticalValueGivesFivePercent) {
  // d = mu + e with mean(e) = 0 and sd(e) = 1 gives t = mu * sqrt(n).
  const Vector e{-1.5, -1.0, -0.5, -0.2, 0.0, 0.1, 0.3, 0.6, 1.0, 1.2};
  double m = 0.0;
  for (double v : e) m += v / 10.0;
  Vector z(10);
  double ss = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    z[i] = e[i] - m;
    ss += z[i] * z[i];
  }
  const double sd = std::sqrt(ss / 9.0);
  const double mu = 2.262 / std::sqrt(10.0);
  Vector xs(10), ys(10, 0.0);
  for (std::size_t i = 0; i < 10; ++i) xs[i] = mu + z[i] / sd;
  const TTestResult r = paired_t_test(xs, ys);
  EXPECT_NEAR(r.t, 2.262, 1e-9);
  EXPECT_NEAR(r.p, 0.050, 0.001);
  EXPECT_NEAR(r.p, t_two_sided_p(r.t, 9.0), 1e-7);
}

TEST(PairedTTest, AgreesWithIntegrationOracle) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng.below(15);
    Vector xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.normal() + 0.5;
      ys[i] = rng.normal();
    }
    const TTestResult r = paired_t_test(xs, ys);
    EXPECT_NEAR(r.p, t_two_sided_p(r.t, static_cast<double>(n - 1)), 1e-6) << "n=" << n;
  }
}

TEST(PairedTTest, SignFlipNegatesT) {
  const Vector a{3, 5, 2, 8, 6}, b{1, 4, 2, 5, 2};
  const TTestResult r1 = paired_t_test(a, b);
  const TTestResult r2 = paired_t_test(b, a);
  EXPECT_DOUBLE_EQ(r1.t, -r2.t);
  EXPECT_DOUBLE_EQ(r1.p, r2.p);
}

TEST(PairedTTest, DegenerateSamples) {
  auto msg = [](const Vector& a, const Vector& b) -> std::string {
    try {
      paired_t_test(a, b);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(msg(Vector{1}, Vector{2}).find("degenerate sample"), std::string::npos);
  EXPECT_NE(msg(Vector{3, 4}, Vector{1, 2}).find("degenerate sample"), std::string::npos);
  EXPECT_THROW(paired_t_test(Vector{1, 2}, Vector{1, 2, 3}), Error);
}

}  // namespace
}  // namespace itt
