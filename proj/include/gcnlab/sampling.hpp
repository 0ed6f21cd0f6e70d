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

/// \file sampling.hpp
/// \brief Graph sampling from step graphons and the random-walk matrix.
///
/// Edge (i, j), i < j, is present iff U_ij < W(x_i, x_j), where the uniforms
/// U_ij are drawn in row-major upper-triangular order from a stream keyed by
/// the edge seed. Two graphons sampled with the same latents and the same edge
/// seed are therefore coupled edge by edge.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcnlab/graphon.hpp"
#include "gcnlab/rng.hpp"

namespace gcnlab {

struct LatentPoints {
  std::vector<double> xs;
};

/// Dense undirected simple graph.
class SampleGraph {
 public:
  explicit SampleGraph(std::size_t n) : n_(n), adj_(n * n, 0) {
    if (n < 2) throw std::invalid_argument("graph: need at least 2 vertices");
  }

  static SampleGraph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
    SampleGraph g(n);
    for (auto [i, j] : edges) g.add_edge(i, j);
    return g;
  }

  std::size_t n() const { return n_; }

  void add_edge(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw std::out_of_range("graph: vertex index out of range");
    if (i == j) throw std::invalid_argument("graph: self-loops are not allowed");
    adj_[i * n_ + j] = 1;
    adj_[j * n_ + i] = 1;
  }

  bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

  std::size_t degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d += adj_[i * n_ + j];
    return d;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = degree(i);
    return d;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (std::uint8_t a : adj_) m += a;
    return m / 2;
  }

  /// Edges (i, j) with i < j in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a(i, j) = adj_[i * n_ + j];
    return a;
  }

  /// Relabeled copy: vertex v of this graph becomes vertex perm[v].
  SampleGraph relabeled(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw std::invalid_argument("graph: permutation size mismatch");
    SampleGraph g(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) g.adj_[perm[i] * n_ + perm[j]] = adj_[i * n_ + j];
    if (latents) {
      g.latents = LatentPoints{std::vector<double>(n_)};
      for (std::size_t i = 0; i < n_; ++i) g.latents->xs[perm[i]] = latents->xs[i];
    }
    return g;
  }

  bool operator==(const SampleGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

  std::optional<LatentPoints> latents;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;  // row-major n x n
};

/// Row-stochastic random-walk matrix: adjacency with each row divided by its degree.
struct RandomWalkMatrix {
  Eigen::MatrixXd entries;
  Eigen::Index n() const { return entries.rows(); }
};

class IsolatedVertexError : public std::runtime_error {
 public:
  explicit IsolatedVertexError(std::size_t v)
      : std::runtime_error("random walk: vertex " + std::to_string(v) + " is isolated"), vertex_(v) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

inline LatentPoints sample_latents(std::size_t n, Seed seed) {
  if (n < 2) throw std::invalid_argument("sample_latents: n must be at least 2");
  Engine eng = make_engine(seed);
  LatentPoints out{std::vector<double>(n)};
  for (double& x : out.xs) x = uniform01(eng);
  return out;
}

namespace detail {

inline void check_latents(const LatentPoints& latents) {
  if (latents.xs.size() < 2) throw std::invalid_argument("sampling: need at least 2 latent points");
  for (double x : latents.xs)
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("sampling: latent point outside [0,1]");
}

// Samples graphs for several kernels sharing latents and edge uniforms.
inline std::vector<SampleGraph> sample_shared(std::span<const StepGraphon* const> kernels,
                                              const LatentPoints& latents, Seed edge_seed) {
  check_latents(latents);
  const std::size_t n = latents.xs.size();
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<SampleGraph> graphs;
  for (const StepGraphon* w : kernels) {
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = w->block_of(latents.xs[i]);
    blocks.push_back(std::move(b));
    graphs.emplace_back(n);
    graphs.back().latents = latents;
  }
  Engine eng = make_engine(edge_seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = uniform01(eng);
      for (std::size_t g = 0; g < kernels.size(); ++g)
        if (u < kernels[g]->value(blocks[g][i], blocks[g][j])) graphs[g].add_edge(i, j);
    }
  }
  return graphs;
}

}  // namespace detail

inline SampleGraph sample_graph(const StepGraphon& w, const LatentPoints& latents, Seed seed) {
  const StepGraphon* kernels[] = {&w};
  return std::move(detail::sample_shared(kernels, latents, seed).front());
}

/// Latents come from derive_seed(seed, kLatents), edge uniforms from
/// derive_seed(seed, kEdges); both graphs share them.
inline std::pair<SampleGraph, SampleGraph> sample_coupled_pair(const StepGraphon& w0, const StepGraphon& w1,
                                                              std::size_t n, Seed seed) {
  const auto latents = sample_latents(n, derive_seed(seed, Stream::kLatents));
  const StepGraphon* kernels[] = {&w0, &w1};
  auto gs = detail::sample_shared(kernels, latents, derive_seed(seed, Stream::kEdges));
  return {std::move(gs[0]), std::move(gs[1])};
}

/// Single draw G ~ W with the same stream layout as one side of sample_coupled_pair.
inline SampleGraph sample_from_graphon(const StepGraphon& w, std::size_t n, Seed seed) {
  return sample_graph(w, sample_latents(n, derive_seed(seed, Stream::kLatents)),
                      derive_seed(seed, Stream::kEdges));
}

inline RandomWalkMatrix random_walk_matrix(const SampleGraph& g) {
  const std::size_t n = g.n();
  RandomWalkMatrix out{Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = g.degree(i);
    if (d == 0) throw IsolatedVertexError(i);
    const double inv = 1.0 / static_cast<double>(d);
    for (std::size_t j = 0; j < n; ++j)
      if (g.has_edge(i, j)) out.entries(i, j) = inv;
  }
  return out;
}

}  // namespace gcnlab
