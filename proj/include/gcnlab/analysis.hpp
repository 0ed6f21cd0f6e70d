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

/// \file analysis.hpp
/// \brief Distances and diagnostics: l-infinity gaps, cut norm and cut
///        distance, stationary distributions, and the error lower bounds.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcnlab/gcn.hpp"
#include "gcnlab/rng.hpp"
#include "gcnlab/sampling.hpp"

namespace gcnlab {

inline constexpr std::size_t kCutNormExactMax = 14;
inline constexpr std::size_t kCutDistanceExactMax = 8;

inline double linf_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("linf_distance: lengths " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()) + " differ");
  double out = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) out = std::max(out, std::abs(u[i] - v[i]));
  return out;
}

inline std::span<const double> as_span(const Eigen::RowVectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

struct CutNormResult {
  double value = 0.0;
  std::vector<std::size_t> S;
  std::vector<std::size_t> T;
  bool exact = false;
};

/// |sum_{i in S, j in T} M_ij| / n^2.
inline double cut_value(const Eigen::MatrixXd& m, std::span<const std::size_t> s, std::span<const std::size_t> t) {
  double acc = 0.0;
  for (std::size_t i : s)
    for (std::size_t j : t) acc += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  const double n = static_cast<double>(m.rows());
  return std::abs(acc) / (n * n);
}

namespace detail {

inline void require_square(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

inline std::vector<std::size_t> members(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1U) out.push_back(i);
  return out;
}

// For fixed rows S, the best T takes every column with a positive (resp.
// negative) column sum, so the sup over T is closed form.
struct BestColumns {
  double value;
  std::vector<std::size_t> cols;
};

inline BestColumns best_columns(const Eigen::RowVectorXd& colsum) {
  double pos = 0.0, neg = 0.0;
  for (Eigen::Index j = 0; j < colsum.size(); ++j) {
    if (colsum[j] > 0.0) pos += colsum[j];
    if (colsum[j] < 0.0) neg -= colsum[j];
  }
  const bool take_pos = pos >= neg;
  BestColumns out{take_pos ? pos : neg, {}};
  for (Eigen::Index j = 0; j < colsum.size(); ++j)
    if (take_pos ? colsum[j] > 0.0 : colsum[j] < 0.0) out.cols.push_back(static_cast<std::size_t>(j));
  return out;
}

}  // namespace detail

/// Exhaustive cut norm over all row subsets S (with the optimal T in closed
/// form for each S). Limited to n <= 14.
inline CutNormResult cut_norm_exact(const Eigen::MatrixXd& m) {
  detail::require_square(m, "cut_norm_exact");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n > kCutNormExactMax)
    throw std::invalid_argument("cut_norm_exact: n = " + std::to_string(n) + " exceeds limit " +
                                std::to_string(kCutNormExactMax));
  CutNormResult best{0.0, {}, {}, true};
  if (n == 0) return best;
  double best_raw = -1.0;
  std::uint64_t best_mask = 0;
  Eigen::RowVectorXd colsum = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  // Gray-code walk: one row added or removed per step.
  std::uint64_t gray = 0;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    gray ^= std::uint64_t{1} << bit;
    if (gray >> bit & 1U)
      colsum += m.row(static_cast<Eigen::Index>(bit));
    else
      colsum -= m.row(static_cast<Eigen::Index>(bit));
    double pos = 0.0, neg = 0.0;
    for (Eigen::Index j = 0; j < colsum.size(); ++j) {
      if (colsum[j] > 0.0) pos += colsum[j];
      else neg -= colsum[j];
    }
    const double v = std::max(pos, neg);
    if (v > best_raw) {
      best_raw = v;
      best_mask = gray;
    }
  }
  // Recompute the witness from scratch so value matches it exactly.
  best.S = detail::members(best_mask, n);
  Eigen::RowVectorXd cs = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i : best.S) cs += m.row(static_cast<Eigen::Index>(i));
  best.T = detail::best_columns(cs).cols;
  best.value = cut_value(m, best.S, best.T);
  return best;
}

/// Alternating coordinate ascent over the row and column indicator vectors,
/// from `restarts` random starts, for both signs of the objective. The
/// returned value is re-evaluated on the witness, so it is a certified lower
/// bound on the cut norm.
inline CutNormResult cut_norm_heuristic(const Eigen::MatrixXd& m, std::size_t restarts, Seed seed) {
  detail::require_square(m, "cut_norm_heuristic");
  const Eigen::Index n = m.rows();
  CutNormResult best{0.0, {}, {}, false};
  if (n == 0) return best;
  restarts = std::max<std::size_t>(restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Engine eng = make_engine(derive_seed(seed, Stream::kRestart, {r}));
    for (double sign : {1.0, -1.0}) {
      const Eigen::MatrixXd sm = sign * m;
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s[i] = uniform01(eng) < 0.5 ? 1.0 : 0.0;
      Eigen::VectorXd t(n);
      double current = -std::numeric_limits<double>::infinity();
      for (int iter = 0; iter < 1000; ++iter) {
        const Eigen::RowVectorXd colsum = s.transpose() * sm;
        for (Eigen::Index j = 0; j < n; ++j) t[j] = colsum[j] > 0.0 ? 1.0 : 0.0;
        const Eigen::VectorXd rowsum = sm * t;
        for (Eigen::Index i = 0; i < n; ++i) s[i] = rowsum[i] > 0.0 ? 1.0 : 0.0;
        const double value = s.dot(rowsum);
        if (value <= current) break;
        current = value;
      }
      std::vector<std::size_t> S, T;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (s[i] > 0.0) S.push_back(static_cast<std::size_t>(i));
        if (t[i] > 0.0) T.push_back(static_cast<std::size_t>(i));
      }
      const double value = cut_value(m, S, T);
      if (value > best.value) best = CutNormResult{value, std::move(S), std::move(T), false};
    }
  }
  return best;
}

enum class CutMode { kExact, kHeuristic };

namespace detail {

// A0 - P A1 P^T where vertex v of G1 is placed at position perm[v].
inline Eigen::MatrixXd aligned_difference(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& a1,
                                          std::span<const std::size_t> perm) {
  const Eigen::Index n = a0.rows();
  Eigen::MatrixXd d = a0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      d(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) -= a1(i, j);
  return d;
}

}  // namespace detail

/// Cut distance between two labeled graphs: minimum over vertex bijections
/// of the cut norm of the aligned adjacency difference. Exact mode enumerates
/// all n! bijections (n <= 8). Heuristic mode starts from the degree-sorted
/// alignment and applies improving transpositions until none is left; its
/// result is an upper bound when the cut norm itself is exact (n <= 14).
inline double cut_distance_graphs(const SampleGraph& g0, const SampleGraph& g1, CutMode mode, Seed seed,
                                  std::size_t restarts = 32) {
  if (g0.n() != g1.n())
    throw std::invalid_argument("cut_distance: graphs have " + std::to_string(g0.n()) + " and " +
                                std::to_string(g1.n()) + " vertices");
  const std::size_t n = g0.n();
  const Eigen::MatrixXd a0 = g0.adjacency_matrix();
  const Eigen::MatrixXd a1 = g1.adjacency_matrix();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  if (mode == CutMode::kExact) {
    if (n > kCutDistanceExactMax)
      throw std::invalid_argument("cut_distance: exact mode supports n <= " + std::to_string(kCutDistanceExactMax));
    double best = std::numeric_limits<double>::infinity();
    do {
      best = std::min(best, cut_norm_exact(detail::aligned_difference(a0, a1, perm)).value);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  auto evaluate = [&](std::span<const std::size_t> p) {
    const Eigen::MatrixXd d = detail::aligned_difference(a0, a1, p);
    return n <= kCutNormExactMax ? cut_norm_exact(d).value : cut_norm_heuristic(d, restarts, seed).value;
  };
  auto by_degree = [](const SampleGraph& g) {
    const auto deg = g.degrees();
    std::vector<std::size_t> order(deg.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
    return order;
  };
  const auto o0 = by_degree(g0);
  const auto o1 = by_degree(g1);
  for (std::size_t k = 0; k < n; ++k) perm[o1[k]] = o0[k];

  double current = evaluate(perm);
  for (bool improved = true; improved && current > 0.0;) {
    improved = false;
    for (std::size_t a = 0; a < n && !improved; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        std::swap(perm[a], perm[b]);
        const double v = evaluate(perm);
        if (v < current) {
          current = v;
          improved = true;
          break;
        }
        std::swap(perm[a], perm[b]);
      }
    }
  }
  return current;
}

class DisconnectedGraphError : public std::runtime_error {
 public:
  explicit DisconnectedGraphError(std::size_t components)
      : std::runtime_error("stationary distribution: graph has " + std::to_string(components) +
                           " connected components"),
        components_(components) {}
  std::size_t components() const { return components_; }

 private:
  std::size_t components_;
};

inline std::size_t connected_components(const SampleGraph& g) {
  const std::size_t n = g.n();
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> frontier;
    frontier.push(s);
    seen[s] = true;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w = 0; w < n; ++w) {
        if (!seen[w] && g.has_edge(v, w)) {
          seen[w] = true;
          frontier.push(w);
        }
      }
    }
  }
  return count;
}

/// pi_j = deg(j) / (2|E|) on a connected graph.
inline Eigen::RowVectorXd stationary_distribution(const SampleGraph& g) {
  const std::size_t components = connected_components(g);
  if (components != 1) throw DisconnectedGraphError(components);
  const auto deg = g.degrees();
  const double two_m = static_cast<double>(2 * g.edge_count());
  Eigen::RowVectorXd pi(static_cast<Eigen::Index>(g.n()));
  for (std::size_t j = 0; j < g.n(); ++j) pi[static_cast<Eigen::Index>(j)] = static_cast<double>(deg[j]) / two_m;
  return pi;
}

struct DiffStats {
  double linf = 0.0;
  double median_abs = 0.0;
  double frac_below = 1.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty input");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

inline DiffStats diff_stats(std::span<const double> h0, std::span<const double> h1, double threshold) {
  if (h0.size() != h1.size())
    throw std::invalid_argument("diff_stats: lengths " + std::to_string(h0.size()) + " and " +
                                std::to_string(h1.size()) + " differ");
  if (h0.empty()) throw std::invalid_argument("diff_stats: empty embeddings");
  std::vector<double> diff(h0.size());
  std::size_t below = 0;
  for (std::size_t i = 0; i < h0.size(); ++i) {
    diff[i] = std::abs(h0[i] - h1[i]);
    if (diff[i] <= threshold) ++below;
  }
  DiffStats out;
  out.linf = *std::max_element(diff.begin(), diff.end());
  out.median_abs = median(std::move(diff));
  out.frac_below = static_cast<double>(below) / static_cast<double>(h0.size());
  return out;
}

inline DiffStats diff_stats(const EmbeddingVector& h0, const EmbeddingVector& h1, double threshold) {
  return diff_stats(as_span(h0.values), as_span(h1.values), threshold);
}

struct ErrorBound {
  double value = 0.0;
  bool vacuous = false;
};

/// (1 - delta / (2 eps n))^n, the error lower bound for delta-exceptional
/// pairs with delta > 0. Vacuous (value 0) unless delta / (2 eps n) < 1.
inline ErrorBound error_lb_delta_pos(double delta, double eps_res, std::size_t n) {
  if (!(delta >= 0.0) || !(eps_res > 0.0) || n == 0)
    throw std::invalid_argument("error_lb_delta_pos: need delta >= 0, eps_res > 0, n >= 1");
  const double nn = static_cast<double>(n);
  const double x = delta / (2.0 * eps_res * nn);
  if (!(x < 1.0)) return {0.0, true};
  return {std::exp(nn * std::log1p(-x)), false};
}

/// exp(-c / (eps n)), the error lower bound for 0-exceptional pairs; c is the
/// unspecified constant and is supplied by the caller.
inline double error_lb_delta_zero(double c, double eps_res, std::size_t n) {
  if (!(c > 0.0) || !(eps_res > 0.0) || n == 0)
    throw std::invalid_argument("error_lb_delta_zero: arguments must be positive");
  return std::exp(-c / (eps_res * static_cast<double>(n)));
}

}  // namespace gcnlab
