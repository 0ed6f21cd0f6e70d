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

/// \file hypotest.hpp
/// \brief Monte Carlo harness for distinguishing two graphons from the
///        perturbed GCN embedding of one sample graph.
///
/// One trial: flip B ~ Bernoulli(1/2), sample G ~ W_B on n vertices, build
/// the random-walk matrix, run the K-layer GCN, average rows, add
/// Uniform[-eps_res, eps_res] noise, and decide with the sorted-profile test.
/// Every random draw of trial t is keyed by (seed, t), so results do not
/// depend on how trials are scheduled across threads.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcnlab/analysis.hpp"
#include "gcnlab/gcn.hpp"
#include "gcnlab/graphon.hpp"
#include "gcnlab/parallel.hpp"
#include "gcnlab/rng.hpp"
#include "gcnlab/sampling.hpp"

namespace gcnlab {

inline constexpr double kDefaultDepthFactor = 10.0;
inline constexpr std::size_t kMaxResamples = 100;

/// ceil(D ln n).
inline std::size_t default_layer_count(std::size_t n, double depth_factor = kDefaultDepthFactor) {
  return static_cast<std::size_t>(std::ceil(depth_factor * std::log(static_cast<double>(n))));
}

/// Layer count rule: fixed K, or K = ceil(D ln n).
struct LayerRule {
  std::optional<std::size_t> fixed;
  double depth_factor = kDefaultDepthFactor;

  std::size_t layers(std::size_t n) const { return fixed ? *fixed : default_layer_count(n, depth_factor); }
};

/// Dimension-free description of a GcnSpec; instantiated once n and K are known.
struct GcnTemplate {
  Activation activation{ActivationKind::kRelu, 1.0};
  std::optional<std::vector<Eigen::MatrixXd>> weights;  // empty: identity; one entry: shared by all layers
  std::optional<Eigen::MatrixXd> initial;               // empty: identity (d = n)
  std::optional<double> C;
  std::optional<double> E;

  GcnSpec instantiate(std::size_t n, std::size_t K) const {
    GcnSpec spec;
    spec.K = K;
    spec.activation = activation;
    spec.initial = initial ? Operand(*initial) : Operand::identity(static_cast<Eigen::Index>(n));
    if (spec.initial.rows() != static_cast<Eigen::Index>(n))
      throw std::invalid_argument("gcn template: initial embedding has " + std::to_string(spec.initial.rows()) +
                                  " rows but n = " + std::to_string(n));
    if (!weights || weights->empty()) {
      spec.weights.assign(K, Operand::identity(spec.d()));
    } else if (weights->size() == 1) {
      spec.weights.assign(K, Operand(weights->front()));
    } else {
      if (weights->size() != K)
        throw std::invalid_argument("gcn template: " + std::to_string(weights->size()) + " weight matrices for K = " +
                                    std::to_string(K));
      for (const auto& w : *weights) spec.weights.emplace_back(w);
    }
    spec.budget = NormBudget{C.value_or(1.0), E.value_or(static_cast<double>(K))};
    return spec;
  }
};

/// Identity initial embedding (d = n), K identity weights, relu.
inline GcnSpec averaging_gcn_spec(std::size_t n, std::size_t K) {
  if (K < 1) throw std::invalid_argument("averaging_gcn_spec: K must be at least 1");
  return identity_gcn_spec(static_cast<Eigen::Index>(n), K, Activation{ActivationKind::kRelu, 1.0});
}

struct ProfileDecision {
  int decision = 0;
  double stat0 = 0.0;
  double stat1 = 0.0;
};

/// Nearest-hypothesis test on the sorted scaled embedding s = sort(n H):
/// stat_b = (1/n) sum_i |s_i - p_b(i)| where p_b are the normalized degree
/// profile of W_b at the n equal-mass quantiles. Ties go to 0.
inline ProfileDecision profile_test(std::span<const double> h, const StepGraphon& w0, const StepGraphon& w1,
                                    std::size_t n) {
  if (h.size() != n)
    throw std::invalid_argument("profile_test: embedding has length " + std::to_string(h.size()) + ", expected " +
                                std::to_string(n));
  std::vector<double> s(h.begin(), h.end());
  const double nn = static_cast<double>(n);
  for (double& v : s) v *= nn;
  std::sort(s.begin(), s.end());
  auto stat = [&](const StepGraphon& w) {
    const auto p = profile_quantiles(normalized_degree_profile(w), n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(s[i] - p[i]);
    return acc / nn;
  };
  ProfileDecision out;
  out.stat0 = stat(w0);
  out.stat1 = stat(w1);
  out.decision = out.stat1 < out.stat0 ? 1 : 0;
  return out;
}

inline ProfileDecision profile_test(const EmbeddingVector& h, const StepGraphon& w0, const StepGraphon& w1,
                                    std::size_t n) {
  return profile_test(as_span(h.values), w0, w1, n);
}

struct TestConfig {
  StepGraphon w0 = StepGraphon::constant(0.5);
  StepGraphon w1 = StepGraphon::constant(0.5);
  std::size_t n = 100;
  LayerRule layers;
  double eps_res = 0.0;
  GcnTemplate gcn;
  std::size_t trials = 100;
  Seed seed = 0;
  bool coupled = false;
  std::size_t threads = 1;
};

struct TrialRecord {
  std::size_t trial_id = 0;
  int true_label = 0;
  int decision = 0;
  double stat0 = 0.0;
  double stat1 = 0.0;
  std::optional<double> linf_coupled_diff;
  std::size_t resamples = 0;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion.
inline ConfidenceInterval wilson_interval(std::size_t successes, std::size_t total, double z = 1.959963984540054) {
  if (total == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(total);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == total ? 1.0 : std::min(1.0, centre + half)};
}

struct TrialsResult {
  double error_rate = 0.0;
  std::size_t errors = 0;
  ConfidenceInterval ci95;
  std::vector<TrialRecord> records;
  std::size_t resamples = 0;
  std::size_t K = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// Calls body(seed_for_attempt) until it does not hit an isolated vertex.
template <typename Body>
auto with_resampling(Seed trial_seed, std::size_t trial_id, std::size_t& resamples, Body&& body) {
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      return body(derive_seed(trial_seed, Stream::kGraph, {attempt}));
    } catch (const IsolatedVertexError& e) {
      if (attempt + 1 >= kMaxResamples)
        throw std::runtime_error("trial " + std::to_string(trial_id) + ": " + e.what() + " after " +
                                 std::to_string(kMaxResamples) + " attempts");
      ++resamples;
    }
  }
}

inline std::vector<std::string> depth_warnings(std::size_t n, std::size_t K) {
  std::vector<std::string> out;
  if (static_cast<double>(K) >= std::sqrt(static_cast<double>(n)))
    out.push_back("K = " + std::to_string(K) + " is not small compared with sqrt(n) = " +
                  std::to_string(std::sqrt(static_cast<double>(n))) +
                  "; the lower-bound regime assumes K << n^(1/2 - eps0)");
  return out;
}

}  // namespace detail

inline TrialRecord run_single_trial(const TestConfig& cfg, const GcnSpec& spec, std::size_t trial_id) {
  const Seed trial_seed = derive_seed(cfg.seed, {trial_id});
  Engine label_eng = make_engine(derive_seed(trial_seed, Stream::kLabel));
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.true_label = uniform01(label_eng) < 0.5 ? 0 : 1;

  const EmbeddingVector h = detail::with_resampling(trial_seed, trial_id, rec.resamples, [&](Seed graph_seed) {
    if (cfg.coupled) {
      auto [g0, g1] = sample_coupled_pair(cfg.w0, cfg.w1, cfg.n, graph_seed);
      EmbeddingVector e0 = embed_graph(random_walk_matrix(g0), spec);
      EmbeddingVector e1 = embed_graph(random_walk_matrix(g1), spec);
      rec.linf_coupled_diff = linf_distance(as_span(e0.values), as_span(e1.values));
      return rec.true_label == 0 ? e0 : e1;
    }
    const StepGraphon& w = rec.true_label == 0 ? cfg.w0 : cfg.w1;
    return embed_graph(random_walk_matrix(sample_from_graphon(w, cfg.n, graph_seed)), spec);
  });

  const EmbeddingVector noisy = perturb(h, cfg.eps_res, derive_seed(trial_seed, Stream::kPerturb));
  const ProfileDecision d = profile_test(noisy, cfg.w0, cfg.w1, cfg.n);
  rec.decision = d.decision;
  rec.stat0 = d.stat0;
  rec.stat1 = d.stat1;
  return rec;
}

inline TrialsResult run_trials(const TestConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be at least 1");
  if (!(cfg.eps_res >= 0.0)) throw std::invalid_argument("run_trials: eps_res must be nonnegative");
  const std::size_t K = cfg.layers.layers(cfg.n);
  if (K < 1) throw std::invalid_argument("run_trials: K must be at least 1");
  const GcnSpec spec = cfg.gcn.instantiate(cfg.n, K);
  const NormBudgetReport budget = check_norm_budget(spec);
  if (!budget.satisfied) throw NormBudgetError(budget);

  TrialsResult out;
  out.K = K;
  out.warnings = detail::depth_warnings(cfg.n, K);
  out.records.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) { out.records[t] = run_single_trial(cfg, spec, t); });
  for (const auto& r : out.records) {
    out.errors += r.decision != r.true_label ? 1 : 0;
    out.resamples += r.resamples;
  }
  out.error_rate = static_cast<double>(out.errors) / static_cast<double>(cfg.trials);
  out.ci95 = wilson_interval(out.errors, cfg.trials);
  return out;
}

struct ConvergenceConfig {
  StepGraphon w0 = StepGraphon::constant(0.5);
  StepGraphon w1 = StepGraphon::constant(0.5);
  std::vector<std::size_t> n_grid;
  LayerRule layers;
  GcnTemplate gcn;
  std::size_t trials = 10;
  Seed seed = 0;
  double threshold_scale = 10.0;  // frac_below uses threshold_scale / n^2
  std::size_t threads = 1;
};

struct ConvergenceTrial {
  std::size_t n = 0;
  std::size_t trial_id = 0;
  DiffStats stats;
  std::size_t resamples = 0;
};

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t K = 0;
  std::size_t trials = 0;
  double linf_median = 0.0;
  double median_abs_median = 0.0;
  double n_linf_median = 0.0;
  double frac_below_median = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceTrial> trials;
  std::optional<double> slope;  // log-log slope of median_abs_median against n
};

/// Least-squares slope of log(y) against log(x); empty if any y <= 0.
inline std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / denom;
}

/// For every n in the grid and every trial: sample a coupled pair, embed both
/// graphs with the same spec (no perturbation) and record their DiffStats.
inline ConvergenceResult coupled_convergence_experiment(const ConvergenceConfig& cfg) {
  if (cfg.n_grid.empty()) throw std::invalid_argument("convergence: n_grid is empty");
  if (!std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()))
    throw std::invalid_argument("convergence: n_grid must be ascending");
  if (cfg.trials < 1) throw std::invalid_argument("convergence: trials must be at least 1");

  ConvergenceResult out;
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
    const std::size_t n = cfg.n_grid[gi];
    const std::size_t K = cfg.layers.layers(n);
    const GcnSpec spec = cfg.gcn.instantiate(n, K);
    const double threshold = cfg.threshold_scale / (static_cast<double>(n) * static_cast<double>(n));
    std::vector<ConvergenceTrial> trials(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      const Seed trial_seed = derive_seed(cfg.seed, {n, t});
      ConvergenceTrial rec;
      rec.n = n;
      rec.trial_id = t;
      rec.stats = detail::with_resampling(trial_seed, t, rec.resamples, [&](Seed graph_seed) {
        auto [g0, g1] = sample_coupled_pair(cfg.w0, cfg.w1, n, graph_seed);
        const EmbeddingVector e0 = embed_graph(random_walk_matrix(g0), spec);
        const EmbeddingVector e1 = embed_graph(random_walk_matrix(g1), spec);
        return diff_stats(e0, e1, threshold);
      });
      trials[t] = rec;
    });

    ConvergenceRow row;
    row.n = n;
    row.K = K;
    row.trials = cfg.trials;
    std::vector<double> linf, med, nlinf, frac;
    for (const auto& t : trials) {
      linf.push_back(t.stats.linf);
      med.push_back(t.stats.median_abs);
      nlinf.push_back(static_cast<double>(n) * t.stats.linf);
      frac.push_back(t.stats.frac_below);
    }
    row.linf_median = median(linf);
    row.median_abs_median = median(med);
    row.n_linf_median = median(nlinf);
    row.frac_below_median = median(frac);
    out.rows.push_back(row);
    out.trials.insert(out.trials.end(), trials.begin(), trials.end());
  }
  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(r.median_abs_median);
  }
  out.slope = loglog_slope(xs, ys);
  return out;
}

}  // namespace gcnlab
