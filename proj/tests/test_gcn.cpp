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

#include <cmath>
#include <random>

#include "gcnlab/analysis.hpp"
#include "gcnlab/gcn.hpp"
#include "gcnlab/graphon.hpp"
#include "gcnlab/sampling.hpp"
#include "test_util.hpp"

namespace gcnlab {
namespace {

using testing::path3;
using testing::triangle;

const StepGraphon kSbm = sbm_to_graphon({0.5, 0.8, 0.2, 0.5});

Activation act(ActivationKind k, double scale = 1.0) { return Activation{k, scale}; }

TEST(Activation, Examples) {
  EXPECT_EQ(act(ActivationKind::kRelu)(-2.0), 0.0);
  EXPECT_EQ(act(ActivationKind::kRelu)(3.0), 3.0);
  EXPECT_EQ(act(ActivationKind::kTanh)(0.0), 0.0);
  EXPECT_EQ(act(ActivationKind::kSwish)(0.0), 0.0);
  EXPECT_EQ(act(ActivationKind::kSelu)(0.0), 0.0);
  EXPECT_NEAR(act(ActivationKind::kSwish)(2.0), 2.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(act(ActivationKind::kSelu)(-1.0), std::exp(-1.0) - 1.0, 1e-15);
  EXPECT_EQ(act(ActivationKind::kRelu, 2.0)(1.5), 3.0);
  EXPECT_EQ(parse_activation("swish"), ActivationKind::kSwish);
  EXPECT_THROW(parse_activation("gelu"), std::invalid_argument);
}

TEST(Activation, CentralDifferenceSlopeAtZero) {
  const double h = 1e-5;
  auto slope = [&](ActivationKind k) { return (act(k)(h) - act(k)(-h)) / (2 * h); };
  EXPECT_NEAR(slope(ActivationKind::kTanh), 1.0, 1e-9);
  // x / (1 + e^-x) is odd-symmetric around x/2, so its slope at 0 is 1/2.
  EXPECT_NEAR(slope(ActivationKind::kSwish), 0.5, 1e-9);
  // One-sided curvatures differ: (2h - h^2/2 + ...) / 2h = 1 - h/4.
  EXPECT_NEAR(slope(ActivationKind::kSelu), 1.0 - h / 4.0, 1e-10);
  EXPECT_FALSE(act(ActivationKind::kRelu).in_nice_class());
  EXPECT_TRUE(act(ActivationKind::kSelu).in_nice_class());
}

TEST(Activation, NiceClassIsOneLipschitz) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (auto k : {ActivationKind::kTanh, ActivationKind::kSelu}) {
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng), y = u(rng);
      EXPECT_LE(std::abs(act(k)(x) - act(k)(y)), std::abs(x - y) + 1e-15);
    }
  }
}

TEST(GcnLayer, TriangleTwoStepsAreUniformOffDiagonal) {
  const RandomWalkMatrix a = random_walk_matrix(triangle());
  const Eigen::MatrixXd m1 = gcn_layer(a, Eigen::MatrixXd::Identity(3, 3), Operand::identity(3), act(ActivationKind::kRelu));
  EXPECT_EQ(m1, a.entries);
  const Eigen::MatrixXd m2 = gcn_layer(a, m1, Operand::identity(3), act(ActivationKind::kRelu));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m2(i, j), i == j ? 0.5 : 0.25, 1e-15);
}

TEST(GcnLayer, RejectsShapeMismatch) {
  const RandomWalkMatrix a = random_walk_matrix(triangle());
  EXPECT_THROW(gcn_layer(a, Eigen::MatrixXd::Identity(4, 4), Operand::identity(4), act(ActivationKind::kRelu)),
               std::invalid_argument);
  EXPECT_THROW(gcn_layer(a, Eigen::MatrixXd::Identity(3, 2), Operand::identity(3), act(ActivationKind::kRelu)),
               std::invalid_argument);
}

TEST(GcnForward, ZeroLayersReturnInitialEmbedding) {
  const RandomWalkMatrix a = random_walk_matrix(path3());
  Eigen::MatrixXd m0(3, 2);
  m0 << 0.1, 0.2, 0.3, 0.0, 0.0, 0.4;
  GcnSpec spec;
  spec.initial = Operand(m0);
  spec.budget = NormBudget{1.0, 0.0};
  EXPECT_EQ(gcn_forward(a, spec), m0);
}

TEST(GcnForward, ManyLayersConvergeToStationaryRows) {
  const SampleGraph g = sample_from_graphon(kSbm, 60, 2);
  const RandomWalkMatrix a = random_walk_matrix(g);
  const Eigen::MatrixXd m = gcn_forward(a, identity_gcn_spec(60, 200, act(ActivationKind::kRelu)));
  const Eigen::RowVectorXd pi = stationary_distribution(g);
  for (Eigen::Index i = 0; i < 60; ++i) EXPECT_LE((m.row(i) - pi).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(GcnForward, MatchesMatrixPowerOracle) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {5u, 20u, 50u}) {
    const SampleGraph g = sample_from_graphon(kSbm, n, n);
    const RandomWalkMatrix a = random_walk_matrix(g);
    // Oracle: Ahat^K by repeated squaring on the explicit matrix.
    const std::size_t K = 13;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n), base = a.entries;
    for (std::size_t e = K; e; e >>= 1, base = base * base)
      if (e & 1) power = power * base;
    const Eigen::MatrixXd m = gcn_forward(a, identity_gcn_spec(n, K, act(ActivationKind::kIdentity)));
    EXPECT_LE((m - power).cwiseAbs().maxCoeff(), 1e-12);
    const EmbeddingVector h = embedding_vector(m);
    EXPECT_LE((h.values - power.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GcnForward, BudgetViolationIsRejected) {
  const RandomWalkMatrix a = random_walk_matrix(triangle());
  GcnSpec spec = identity_gcn_spec(3, 2, act(ActivationKind::kRelu));
  spec.weights[0] = Operand(Eigen::MatrixXd::Constant(3, 3, 1.0));
  try {
    gcn_forward(a, spec);
    FAIL() << "expected NormBudgetError";
  } catch (const NormBudgetError& e) {
    EXPECT_EQ(e.report().product_bound, 3.0);
    EXPECT_EQ(e.report().sum_bound, 4.0);
    EXPECT_FALSE(e.report().satisfied);
  }
  spec.weights.pop_back();
  EXPECT_THROW(gcn_forward(a, spec), std::invalid_argument);
}

TEST(Embedding, Examples) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 3, 4, 5;
  const EmbeddingVector h = embedding_vector(m);
  EXPECT_EQ(h.values, (Eigen::RowVector3d(2, 3, 4)));
  EXPECT_FALSE(h.perturbed);
  // Identity pipeline on the triangle: one step gives uniform 1/3.
  const EmbeddingVector t =
      embed_graph(random_walk_matrix(triangle()), identity_gcn_spec(3, 1, act(ActivationKind::kRelu)));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(t.values[i], 1.0 / 3.0, 1e-15);
}

// Oracle: max over sign vectors x in {-1,1}^d of ||M x||_inf.
TEST(OpNorm, MatchesSignVectorOracle) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const int r = 1 + rep % 5, c = 1 + (rep * 3) % 6;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    double best = 0.0;
    for (int mask = 0; mask < (1 << c); ++mask) {
      Eigen::VectorXd x(c);
      for (int j = 0; j < c; ++j) x[j] = (mask >> j) & 1 ? 1.0 : -1.0;
      best = std::max(best, (m * x).cwiseAbs().maxCoeff());
    }
    EXPECT_NEAR(op_inf_norm(m), best, 1e-12);
    EXPECT_NEAR(op_inf_norm_transposed(Operand(m)), op_inf_norm(m.transpose()), 1e-15);
  }
  EXPECT_EQ(op_inf_norm_transposed(Operand::identity(7)), 1.0);
}

TEST(OpNorm, IsSubmultiplicative) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd a(4, 5), b(5, 3);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
    EXPECT_LE(op_inf_norm(a * b), op_inf_norm(a) * op_inf_norm(b) + 1e-12);
  }
}

TEST(Perturb, NoiseHasUniformMoments) {
  EmbeddingVector h{Eigen::RowVectorXd::Zero(100000)};
  const double eps = 0.02;
  const EmbeddingVector p = perturb(h, eps, 7);
  EXPECT_TRUE(p.perturbed);
  EXPECT_EQ(p.eps_res, eps);
  EXPECT_LE(p.values.cwiseAbs().maxCoeff(), eps);
  EXPECT_NEAR(p.values.cwiseAbs().mean(), eps / 2.0, 0.01 * eps / 2.0);
  EXPECT_NEAR(p.values.mean(), 0.0, 0.01 * eps);
  EXPECT_EQ(perturb(h, eps, 7).values, p.values);
  EXPECT_THROW(perturb(p, eps, 8), std::invalid_argument);
  EXPECT_EQ(perturb(h, 0.0, 1).values, h.values);
}

TEST(EmbedGraph, LinearFastPathMatchesDenseForward) {
  for (Seed s = 0; s < 5; ++s) {
    const std::size_t n = 40;
    const RandomWalkMatrix a = random_walk_matrix(sample_from_graphon(kSbm, n, s));
    GcnSpec spec = identity_gcn_spec(n, 9, act(ActivationKind::kRelu, 0.9));
    spec.budget = NormBudget{1.0, 9.0};
    ASSERT_TRUE(acts_linearly(spec));
    const EmbeddingVector fast = embed_graph(a, spec);
    const EmbeddingVector dense = embedding_vector(gcn_forward(a, spec));
    EXPECT_LE((fast.values - dense.values).cwiseAbs().maxCoeff(), 1e-14);

    // Nonnegative non-identity weights also stay linear under relu.
    Eigen::MatrixXd m0 = Eigen::MatrixXd::Constant(n, 3, 1.0 / n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(3, 3, 0.3);
    GcnSpec small;
    small.K = 4;
    small.initial = Operand(m0);
    small.weights.assign(4, Operand(w));
    small.activation = act(ActivationKind::kRelu);
    small.budget = NormBudget{1.0, 4.0};
    ASSERT_TRUE(acts_linearly(small));
    const EmbeddingVector f2 = embed_graph(a, small);
    const EmbeddingVector d2 = embedding_vector(gcn_forward(a, small));
    EXPECT_LE((f2.values - d2.values).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EmbedGraph, ReluEqualsIdentityBitwiseOnNonnegativePipeline) {
  const RandomWalkMatrix a = random_walk_matrix(sample_from_graphon(kSbm, 30, 1));
  const Eigen::MatrixXd relu = gcn_forward(a, identity_gcn_spec(30, 6, act(ActivationKind::kRelu)));
  const Eigen::MatrixXd ident = gcn_forward(a, identity_gcn_spec(30, 6, act(ActivationKind::kIdentity)));
  EXPECT_EQ(relu, ident);
}

TEST(EmbedGraph, NonlinearPipelinesUseDenseForward) {
  const RandomWalkMatrix a = random_walk_matrix(sample_from_graphon(kSbm, 25, 2));
  const GcnSpec spec = identity_gcn_spec(25, 3, act(ActivationKind::kTanh));
  EXPECT_FALSE(acts_linearly(spec));
  EXPECT_EQ(embed_graph(a, spec).values, embedding_vector(gcn_forward(a, spec)).values);
}

}  // namespace
}  // namespace gcnlab
