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
#include <set>

#include <gtest/gtest.h>

#include "itt/rft.hpp"
#include "oracles.hpp"

namespace itt {
namespace {

Matrix positive_rows(std::size_t n, std::size_t r, Rng& rng) {
  Matrix m(n, r);
  for (double& v : m.data()) v = 0.1 + rng.uniform();
  return m;
}

Vector unit_vector(std::size_t d, Rng& rng) {
  Vector v(d);
  for (double& x : v) x = rng.normal();
  const double n = norm(v);
  for (double& x : v) x /= n;
  return v;
}

TEST(FavorPsi, ZeroInput) {
  Rng r(1);
  const auto f = FavorFeatures::draw(16, 3, r);
  const Vector p = favor_psi(f, Vector(3, 0.0));
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_NEAR(dot(p, p), 1.0, 1e-12);
}

TEST(FavorPsi, KernelEstimatesExpDot) {
  Rng r(2);
  const auto f = FavorFeatures::draw(100000, 3, r);
  const Vector x = unit_vector(3, r);
  const Vector px = favor_psi(f, x);
  for (double v : px) EXPECT_GT(v, 0.0);
  EXPECT_NEAR(dot(px, px), std::exp(1.0), 0.15);
  const Vector a{1, 0, 0}, b{0, 1, 0};
  EXPECT_NEAR(dot(favor_psi(f, a), favor_psi(f, b)), 1.0, 0.05);
}

TEST(FavorPsi, OverflowDetected) {
  FavorFeatures g;
  g.omega = Matrix(1, 1, 1000.0);
  try {
    favor_psi(g, Vector{1.0});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "feature overflow");
  }
}

TEST(FavorPsi, GlobalShiftPreservesRatios) {
  Rng r(4);
  const auto f = FavorFeatures::draw(32, 3, r);
  Matrix x(5, 3);
  for (double& v : x.data()) v = r.normal();
  const Matrix shifted = favor_psi_rows(f, x);
  Vector raw0 = favor_psi(f, x.row(0));
  for (std::size_t i = 1; i < 5; ++i) {
    const Vector raw = favor_psi(f, x.row(i));
    for (std::size_t k = 0; k < 32; ++k) {
      EXPECT_NEAR(shifted(i, k) / shifted(0, 0), raw[k] / raw0[0], 1e-9 * raw[k] / raw0[0]);
    }
  }
}

TEST(BuildTree, SingleAndPair) {
  Rng r(5);
  const Matrix one = positive_rows(1, 4, r);
  const RftTree t1 = RftTree::build(one, r);
  EXPECT_EQ(t1.num_nodes(), 1u);
  EXPECT_EQ(Vector(t1.xi(0).begin(), t1.xi(0).end()), Vector(one.row(0).begin(), one.row(0).end()));
  const Matrix two = positive_rows(2, 4, r);
  const RftTree t2 = RftTree::build(two, r);
  ASSERT_EQ(t2.num_nodes(), 3u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(t2.xi(0)[k], two(0, k) + two(1, k));
}

TEST(BuildTree, RootIsColumnSumAndDepthIsLogN) {
  Rng r(6);
  for (std::size_t n : {8u, 5u, 13u, 64u, 100u}) {
    const Matrix psi = positive_rows(n, 6, r);
    const RftTree t = RftTree::build(psi, r);
    EXPECT_EQ(t.depth(), static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))));
    for (std::size_t k = 0; k < 6; ++k) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += psi(i, k);
      EXPECT_NEAR(t.xi(t.root())[k], col, 1e-12 * col);
    }
  }
}

TEST(BuildTree, AggregatesAndLeavesAreConsistent) {
  Rng r(7);
  const std::size_t n = 37;
  const Matrix psi = positive_rows(n, 5, r);
  const RftTree t = RftTree::build(psi, r);
  std::multiset<std::size_t> leaves;
  for (std::size_t v = 0; v < t.num_nodes(); ++v) {
    const auto& nd = t.node(v);
    if (nd.is_leaf()) {
      leaves.insert(nd.action);
      for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(t.xi(v)[k], psi(nd.action, k));
      continue;
    }
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(t.xi(v)[k], t.xi(nd.left)[k] + t.xi(nd.right)[k]);
  }
  ASSERT_EQ(leaves.size(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(leaves.count(i), 1u);
}

TEST(SampleAction, TwoLeafProbability) {
  // psi rows chosen so the state's products are 1 and 3.
  Matrix psi(2, 1);
  psi(0, 0) = 1.0;
  psi(1, 0) = 3.0;
  Rng r(8);
  const RftTree t = RftTree::build(psi, r);
  const Vector p = path_probabilities(t, Vector{1.0});
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
  std::size_t ones = 0;
  for (int i = 0; i < 100000; ++i) ones += sample_action(t, Vector{1.0}, r).index;
  EXPECT_NEAR(ones / 1e5, 0.75, 0.01);
}

TEST(SampleAction, IdenticalActionsAreUniform) {
  Rng r(9);
  const std::size_t n = 10;
  const Matrix psi(n, 4, 0.7);
  const RftTree t = RftTree::build(psi, r);
  std::vector<std::size_t> counts(n, 0);
  // Uneven splits make equal-mass leaves uniform only through the xi ratios.
  for (int i = 0; i < 100000; ++i) ++counts[sample_action(t, Vector(4, 1.0), r).index];
  EXPECT_GT(test::chi_square_p(counts, std::vector<double>(n, 0.1)), 0.01);
}

TEST(SampleAction, DecisionsEqualDepthAndMatchesFlat) {
  Rng r(10);
  const std::size_t n = 8;
  const Matrix psi = positive_rows(n, 3, r);
  const RftTree t = RftTree::build(psi, r);
  const Vector s{0.5, 1.5, 0.2};
  std::vector<std::size_t> counts(n, 0);
  for (int i = 0; i < 200000; ++i) {
    const RftSample smp = sample_action(t, s, r);
    ASSERT_EQ(smp.decisions, 3u);
    ++counts[smp.index];
  }
  EXPECT_LT(test::tv_distance(test::frequencies(counts), flat_distribution(psi, s)), 0.01);
}

TEST(SampleAction, DegenerateMassRejected) {
  Rng r(11);
  const RftTree t = RftTree::build(Matrix(2, 2, 1.0), r);
  EXPECT_THROW(sample_action(t, Vector{0.0, 0.0}, r), Error);
}

TEST(PathProbabilities, EqualFlatDistribution) {
  Rng r(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = std::vector<std::size_t>{2, 8, 16, 64, 7, 33}[t % 6];
    const Matrix psi = positive_rows(n, 5, r);
    const Vector s = [&] {
      Vector v(5);
      for (double& x : v) x = 0.01 + r.uniform();
      return v;
    }();
    const RftTree tree = RftTree::build(psi, r);
    const Vector a = path_probabilities(tree, s);
    const Vector b = flat_distribution(psi, s);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(FlatDistribution, Examples) {
  EXPECT_EQ(flat_distribution(Matrix(1, 2, 1.0), Vector{1, 1}), (Vector{1.0}));
  Matrix psi(2, 1);
  psi(0, 0) = 1.0;
  psi(1, 0) = 3.0;
  EXPECT_EQ(flat_distribution(psi, Vector{1.0}), (Vector{0.25, 0.75}));
  Rng r(13);
  const Vector p = flat_distribution(positive_rows(16, 4, r), Vector{1, 2, 3, 4});
  double s = 0.0;
  for (double v : p) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_THROW(flat_distribution(psi, Vector{0.0}), Error);
}

TEST(ExactSoftmax, Examples) {
  const Vector u = exact_softmax_distribution(Matrix(4, 2, 0.5), Vector{1, 1});
  for (double v : u) EXPECT_DOUBLE_EQ(v, 0.25);
  Matrix lat(2, 1);
  lat(1, 0) = std::log(3.0);
  const Vector p = exact_softmax_distribution(lat, Vector{1.0});
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
}

TEST(ExactSoftmax, FlatDistributionConvergesWithFeatures) {
  Rng r(14);
  const std::size_t n = 16, d = 4;
  Matrix lat(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector u = unit_vector(d, r);
    std::copy(u.begin(), u.end(), lat.row(i).begin());
  }
  const Vector s = unit_vector(d, r);
  const Vector exact = exact_softmax_distribution(lat, s);
  double prev = INFINITY;
  for (std::size_t feats : {8u, 64u, 512u, 4096u}) {
    Vector tvs;
    for (int k = 0; k < 20; ++k) {
      const auto f = FavorFeatures::draw(feats, d, r);
      tvs.push_back(total_variation(flat_distribution(favor_psi_rows(f, lat), favor_psi(f, s)), exact));
    }
    const double med = median(tvs);
    EXPECT_LE(med, prev) << "r=" << feats;
    prev = med;
  }
  EXPECT_LT(prev, 0.05);
}

}  // namespace
}  // namespace itt
