// Copyright 2026 The gcnlab Authors.
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gcnlab/graphon.hpp"
#include "gcnlab/rng.hpp"
#include "gcnlab/sampling.hpp"
#include "test_util.hpp"

namespace gcnlab {
namespace {

using testing::path3;
using testing::triangle;

const StepGraphon kSbm = sbm_to_graphon({0.5, 0.8, 0.2, 0.5});
const StepGraphon kHalf = StepGraphon::constant(0.5);

TEST(Rng, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(7, Stream::kEdges), derive_seed(7, Stream::kEdges));
  EXPECT_NE(derive_seed(7, Stream::kEdges), derive_seed(7, Stream::kLatents));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(7, {2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  Engine eng = make_engine(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(eng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(SampleLatents, DeterministicAndUniform) {
  const auto a = sample_latents(10000, 42);
  const auto b = sample_latents(10000, 42);
  EXPECT_EQ(a.xs, b.xs);
  const double mean = std::accumulate(a.xs.begin(), a.xs.end(), 0.0) / 1e4;
  EXPECT_GE(mean, 0.47);
  EXPECT_LE(mean, 0.53);
  EXPECT_NE(sample_latents(100, 43).xs, sample_latents(100, 42).xs);
  EXPECT_THROW(sample_latents(1, 0), std::invalid_argument);
}

TEST(SampleGraph, ConstantOneGivesCompleteGraph) {
  const SampleGraph g = sample_from_graphon(StepGraphon::constant(1.0), 4, 9);
  EXPECT_EQ(g.edge_count(), 6u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_FALSE(g.has_edge(i, i));
}

TEST(SampleGraph, HalfDensityConcentrates) {
  const SampleGraph g = sample_from_graphon(kHalf, 2000, 3);
  const double density = static_cast<double>(g.edge_count()) / (2000.0 * 1999.0 / 2.0);
  EXPECT_GE(density, 0.49);
  EXPECT_LE(density, 0.51);
}

TEST(SampleGraph, SymmetricWithoutLoops) {
  const SampleGraph g = sample_from_graphon(kSbm, 60, 4);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_FALSE(g.has_edge(i, i));
    for (std::size_t j = 0; j < 60; ++j) EXPECT_EQ(g.has_edge(i, j), g.has_edge(j, i));
  }
  const Eigen::MatrixXd a = g.adjacency_matrix();
  EXPECT_TRUE(a.isApprox(a.transpose()));
  EXPECT_EQ(a.sum(), 2.0 * static_cast<double>(g.edge_count()));
}

TEST(SampleGraph, RejectsBadEdges) {
  SampleGraph g(3);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 3), std::out_of_range);
  EXPECT_THROW(SampleGraph(1), std::invalid_argument);
}

TEST(CoupledPair, IdenticalKernelsGiveIdenticalGraphs) {
  const auto [g0, g1] = sample_coupled_pair(kSbm, kSbm, 200, 5);
  EXPECT_EQ(g0, g1);
  ASSERT_TRUE(g0.latents.has_value());
  EXPECT_EQ(g0.latents->xs, g1.latents->xs);
}

TEST(CoupledPair, PointwiseDominatedKernelGivesSubgraph) {
  const StepGraphon lo = StepGraphon::constant(0.3);
  const StepGraphon hi = sbm_to_graphon({0.4, 0.9, 0.5, 0.7});
  const auto [g0, g1] = sample_coupled_pair(lo, hi, 300, 6);
  for (const auto& [i, j] : g0.edges()) EXPECT_TRUE(g1.has_edge(i, j));
  EXPECT_LT(g0.edge_count(), g1.edge_count());
}

TEST(CoupledPair, EachSideHasTheSingleGraphMarginal) {
  for (Seed s : {1u, 2u, 3u}) {
    const auto [g0, g1] = sample_coupled_pair(kSbm, kHalf, 50, s);
    EXPECT_EQ(g0, sample_from_graphon(kSbm, 50, s));
    EXPECT_EQ(g1, sample_from_graphon(kHalf, 50, s));
  }
}

// Empirical frequency of each within/between-block pair over 500 draws
// stays within 4 standard errors of the kernel value.
TEST(CoupledPair, BlockEdgeFrequenciesMatchKernel) {
  const std::size_t n = 30;
  double hits[2][2] = {}, pairs[2][2] = {};
  for (Seed s = 0; s < 500; ++s) {
    const auto [g0, g1] = sample_coupled_pair(kSbm, kHalf, n, s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::size_t a = kSbm.block_of(g0.latents->xs[i]);
        const std::size_t b = kSbm.block_of(g0.latents->xs[j]);
        const std::size_t lo = std::min(a, b), hi = std::max(a, b);
        pairs[lo][hi] += 1.0;
        hits[lo][hi] += g0.has_edge(i, j) ? 1.0 : 0.0;
      }
  }
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = a; b < 2; ++b) {
      const double p = kSbm.value(a, b);
      const double se = std::sqrt(p * (1 - p) / pairs[a][b]);
      EXPECT_NEAR(hits[a][b] / pairs[a][b], p, 4 * se) << a << b;
    }
}

TEST(RandomWalk, Examples) {
  const RandomWalkMatrix t = random_walk_matrix(triangle());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(t.entries(i, j), i == j ? 0.0 : 0.5);
  const RandomWalkMatrix p = random_walk_matrix(path3());
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0;
  EXPECT_EQ(p.entries, expected);
}

TEST(RandomWalk, IsolatedVertexIsReported) {
  SampleGraph g(3);
  g.add_edge(0, 1);
  try {
    random_walk_matrix(g);
    FAIL() << "expected IsolatedVertexError";
  } catch (const IsolatedVertexError& e) {
    EXPECT_EQ(e.vertex(), 2u);
  }
}

TEST(RandomWalk, RowsAreStochasticAndRegularColumnsSumToOne) {
  const RandomWalkMatrix a = random_walk_matrix(sample_from_graphon(kSbm, 150, 8));
  for (Eigen::Index i = 0; i < a.n(); ++i) EXPECT_NEAR(a.entries.row(i).sum(), 1.0, 1e-12);
  const RandomWalkMatrix c = random_walk_matrix(testing::cycle(9));
  for (Eigen::Index j = 0; j < c.n(); ++j) EXPECT_NEAR(c.entries.col(j).sum(), 1.0, 1e-12);
}

TEST(SampleGraph, RelabelingPreservesDegreeMultiset) {
  const SampleGraph g = sample_from_graphon(kSbm, 80, 10);
  std::vector<std::size_t> perm(80);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  const SampleGraph h = g.relabeled(perm);
  auto dg = g.degrees(), dh = h.degrees();
  for (std::size_t v = 0; v < 80; ++v) EXPECT_EQ(dg[v], dh[perm[v]]);
  std::sort(dg.begin(), dg.end());
  std::sort(dh.begin(), dh.end());
  EXPECT_EQ(dg, dh);
  EXPECT_EQ(g.edge_count(), h.edge_count());
}

}  // namespace
}  // namespace gcnlab
