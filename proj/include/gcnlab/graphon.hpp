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

/// \file graphon.hpp
/// \brief Step graphons, two-block SBMs, the equal-degree SBM family, and
///        degree-profile statistics.
///
/// A step graphon partitions [0,1] into consecutive blocks of the given masses
/// and is constant on every product of blocks. Degree functions and total
/// degree are therefore finite sums, and the normalized degree function
/// d_W(x)/D(W) is a step function whose monotone rearrangement is the
/// DegreeProfile below.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcnlab {

inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kLevelMergeTolerance = 1e-12;

class StepGraphon {
 public:
  StepGraphon(std::vector<double> block_masses, std::vector<std::vector<double>> values,
              double lower_bound)
      : masses_(std::move(block_masses)), lower_bound_(lower_bound) {
    const std::size_t k = masses_.size();
    if (k == 0) throw std::invalid_argument("graphon: at least one block required");
    if (values.size() != k) throw std::invalid_argument("graphon: values must be a square matrix matching block_masses");
    double total = 0.0;
    for (double m : masses_) {
      if (!(m > 0.0)) throw std::invalid_argument("graphon: block masses must be positive");
      total += m;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
      throw std::invalid_argument("graphon: block masses must sum to 1 (got " + std::to_string(total) + ")");
    if (!(lower_bound_ > 0.0)) throw std::invalid_argument("graphon: lower bound must be positive");
    values_.resize(k * k);
    for (std::size_t a = 0; a < k; ++a) {
      if (values[a].size() != k) throw std::invalid_argument("graphon: values must be a square matrix matching block_masses");
      for (std::size_t b = 0; b < k; ++b) values_[a * k + b] = values[a][b];
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const double v = values_[a * k + b];
        if (std::abs(v - values_[b * k + a]) > kMassTolerance)
          throw std::invalid_argument("graphon: values must be symmetric");
        if (!(v >= lower_bound_ && v <= 1.0))
          throw std::invalid_argument("graphon: value " + std::to_string(v) + " outside [lower_bound, 1]");
      }
    }
    cumulative_.resize(k);
    std::partial_sum(masses_.begin(), masses_.end(), cumulative_.begin());
  }

  /// Lower bound defaults to the smallest kernel value.
  StepGraphon(std::vector<double> block_masses, std::vector<std::vector<double>> values)
      : StepGraphon(block_masses, values, min_entry(values)) {}

  static StepGraphon constant(double p) { return StepGraphon({1.0}, {{p}}, p); }

  std::size_t blocks() const { return masses_.size(); }
  std::span<const double> block_masses() const { return masses_; }
  double value(std::size_t a, std::size_t b) const { return values_[a * masses_.size() + b]; }
  double lower_bound() const { return lower_bound_; }

  /// Block containing x in [0,1]; x = 1 belongs to the last block.
  std::size_t block_of(double x) const {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return std::min(idx, masses_.size() - 1);
  }

  double operator()(double x, double y) const { return value(block_of(x), block_of(y)); }

  std::vector<std::vector<double>> values() const {
    const std::size_t k = masses_.size();
    std::vector<std::vector<double>> out(k, std::vector<double>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) out[a][b] = value(a, b);
    return out;
  }

  /// Same kernel with blocks relabeled: new block i is old block perm[i].
  StepGraphon permuted(std::span<const std::size_t> perm) const {
    const std::size_t k = masses_.size();
    if (perm.size() != k) throw std::invalid_argument("graphon: permutation size mismatch");
    std::vector<double> m(k);
    std::vector<std::vector<double>> v(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
      m[i] = masses_[perm[i]];
      for (std::size_t j = 0; j < k; ++j) v[i][j] = value(perm[i], perm[j]);
    }
    return StepGraphon(std::move(m), std::move(v), lower_bound_);
  }

 private:
  static double min_entry(const std::vector<std::vector<double>>& values) {
    double lo = 1.0;
    for (const auto& row : values)
      for (double v : row) lo = std::min(lo, v);
    return lo;
  }

  std::vector<double> masses_;
  std::vector<double> cumulative_;
  std::vector<double> values_;  // row-major k x k
  double lower_bound_;
};

struct SbmParams {
  double k1 = 0.5;
  double p1 = 0.5;
  double p2 = 0.5;
  double q = 0.5;
};

struct FamilyPoint {
  std::array<double, 3> base{};  // (p*_1, p*_2, q*)
  double k1 = 0.5;
  double tau = 0.0;
};

struct DegreeProfile {
  std::vector<double> masses;
  std::vector<double> levels;  // ascending
};

namespace detail {

inline void require_unit_open_closed(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string("sbm: ") + name + " = " + std::to_string(v) + " outside (0,1]");
}

}  // namespace detail

inline StepGraphon sbm_to_graphon(const SbmParams& p) {
  if (!(p.k1 > 0.0 && p.k1 < 1.0)) throw std::invalid_argument("sbm: k1 must lie in (0,1)");
  detail::require_unit_open_closed(p.p1, "p1");
  detail::require_unit_open_closed(p.p2, "p2");
  detail::require_unit_open_closed(p.q, "q");
  return StepGraphon({p.k1, 1.0 - p.k1}, {{p.p1, p.q}, {p.q, p.p2}}, std::min({p.p1, p.p2, p.q}));
}

/// Member of the equal-expected-degree family: moves the base point along
/// (1/k1, k1/k2^2, -1/k2), which leaves both block degrees unchanged.
inline SbmParams family_point_to_sbm(const FamilyPoint& fp) {
  if (!(fp.k1 > 0.0 && fp.k1 < 1.0)) throw std::invalid_argument("family: k1 must lie in (0,1)");
  for (double b : fp.base)
    if (!(b > 0.0)) throw std::invalid_argument("family: base point must be positive");
  const double k2 = 1.0 - fp.k1;
  SbmParams out;
  out.k1 = fp.k1;
  out.p1 = fp.base[0] + fp.tau / fp.k1;
  out.p2 = fp.base[1] + fp.tau * fp.k1 / (k2 * k2);
  out.q = fp.base[2] - fp.tau / k2;
  detail::require_unit_open_closed(out.p1, "p1");
  detail::require_unit_open_closed(out.p2, "p2");
  detail::require_unit_open_closed(out.q, "q");
  return out;
}

inline std::vector<double> degree_function(const StepGraphon& w) {
  const std::size_t k = w.blocks();
  const auto m = w.block_masses();
  std::vector<double> d(k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) d[a] += m[b] * w.value(a, b);
  return d;
}

inline double total_degree(const StepGraphon& w) {
  const auto d = degree_function(w);
  const auto m = w.block_masses();
  double total = 0.0;
  for (std::size_t a = 0; a < d.size(); ++a) total += m[a] * d[a];
  return total;
}

inline DegreeProfile normalized_degree_profile(const StepGraphon& w) {
  const auto d = degree_function(w);
  const double total = total_degree(w);
  const auto m = w.block_masses();
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  DegreeProfile out;
  for (std::size_t idx : order) {
    const double level = d[idx] / total;
    if (!out.levels.empty() && std::abs(level - out.levels.back()) <= kLevelMergeTolerance) {
      // Mass-weighted merge keeps sum(masses * levels) intact.
      const double mass = out.masses.back() + m[idx];
      out.levels.back() = (out.levels.back() * out.masses.back() + level * m[idx]) / mass;
      out.masses.back() = mass;
    } else {
      out.masses.push_back(m[idx]);
      out.levels.push_back(level);
    }
  }
  return out;
}

/// L1 distance between two monotone step profiles on [0,1].
inline double profile_l1_distance(const DegreeProfile& a, const DegreeProfile& b) {
  auto cumulative = [](const DegreeProfile& p) {
    std::vector<double> c(p.masses.size());
    std::partial_sum(p.masses.begin(), p.masses.end(), c.begin());
    c.back() = 1.0;
    return c;
  };
  const auto ca = cumulative(a);
  const auto cb = cumulative(b);
  std::vector<double> cuts;
  cuts.reserve(ca.size() + cb.size());
  std::merge(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(cuts));

  // Walk the common refinement; both profiles are constant on each piece.
  std::size_t i = 0, j = 0;
  double lo = 0.0, acc = 0.0;
  for (double hi : cuts) {
    if (hi > lo) {
      acc += std::abs(a.levels[i] - b.levels[j]) * (hi - lo);
      lo = hi;
    }
    while (i + 1 < ca.size() && ca[i] <= lo) ++i;
    while (j + 1 < cb.size() && cb[j] <= lo) ++j;
  }
  return acc;
}

/// Smallest delta for which (w0, w1) is a delta-exceptional pair: the
/// infimum over measure-preserving bijections of the L1 gap between
/// normalized degree functions, attained by the monotone rearrangements.
inline double delta_separation(const StepGraphon& w0, const StepGraphon& w1) {
  return profile_l1_distance(normalized_degree_profile(w0), normalized_degree_profile(w1));
}

/// Values of the profile at the n equal-mass quantile midpoints (i + 1/2)/n.
inline std::vector<double> profile_quantiles(const DegreeProfile& p, std::size_t n) {
  std::vector<double> out(n);
  std::size_t block = 0;
  double upper = p.masses.at(0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    while (u > upper && block + 1 < p.levels.size()) upper += p.masses[++block];
    out[i] = p.levels[block];
  }
  return out;
}

}  // namespace gcnlab
