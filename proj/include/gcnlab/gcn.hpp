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

/// \file gcn.hpp
/// \brief GCN forward pass M <- act(Ahat * M * W), row-averaged embeddings,
///        weight-norm budgets and the uniform perturbation channel.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcnlab/rng.hpp"
#include "gcnlab/sampling.hpp"

namespace gcnlab {

enum class ActivationKind { kIdentity, kRelu, kTanh, kSwish, kSelu };

/// Elementwise activation x -> base(scale * x). scale != 1 gives the relaxed
/// class where act'(0) = scale.
struct Activation {
  ActivationKind kind = ActivationKind::kIdentity;
  double scale = 1.0;

  double operator()(double x) const {
    const double z = scale * x;
    switch (kind) {
      case ActivationKind::kIdentity:
        return z;
      case ActivationKind::kRelu:
        return z > 0.0 ? z : 0.0;
      case ActivationKind::kTanh:
        return std::tanh(z);
      case ActivationKind::kSwish:
        return z / (1.0 + std::exp(-z));
      case ActivationKind::kSelu:
        return z <= 0.0 ? std::expm1(z) : z;
    }
    return z;
  }

  /// The nominal nice class {tanh, swish, selu} at unit scale. swish as
  /// x / (1 + e^-x) has slope 1/2 at 0, so it does not meet act'(0) = 1.
  bool in_nice_class() const {
    return scale == 1.0 && (kind == ActivationKind::kTanh || kind == ActivationKind::kSwish ||
                            kind == ActivationKind::kSelu);
  }
};

inline double apply_activation(const Activation& a, double x) { return a(x); }

inline std::string_view activation_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::kIdentity: return "identity";
    case ActivationKind::kRelu: return "relu";
    case ActivationKind::kTanh: return "tanh";
    case ActivationKind::kSwish: return "swish";
    case ActivationKind::kSelu: return "selu";
  }
  return "identity";
}

inline ActivationKind parse_activation(std::string_view name) {
  for (auto k : {ActivationKind::kIdentity, ActivationKind::kRelu, ActivationKind::kTanh,
                 ActivationKind::kSwish, ActivationKind::kSelu})
    if (activation_name(k) == name) return k;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

/// A matrix that is either an explicit dense matrix or the identity of a
/// given size. Identities are kept symbolic so d = n pipelines do not store
/// K dense n x n copies of I.
class Operand {
 public:
  static Operand identity(Eigen::Index d) { return Operand(d); }
  Operand(Eigen::MatrixXd m) : rows_(m.rows()), cols_(m.cols()), dense_(std::move(m)) {}

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  bool is_identity() const { return !dense_.has_value(); }
  const Eigen::MatrixXd& dense() const { return *dense_; }

  Eigen::MatrixXd materialize() const {
    return dense_ ? *dense_ : Eigen::MatrixXd::Identity(rows_, cols_);
  }

  bool nonnegative() const { return !dense_ || (dense_->array() >= 0.0).all(); }

 private:
  explicit Operand(Eigen::Index d) : rows_(d), cols_(d) {}
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::optional<Eigen::MatrixXd> dense_;
};

struct NormBudget {
  double C = 1.0;
  double E = 1.0;
};

struct GcnSpec {
  std::size_t K = 0;
  Operand initial = Operand::identity(1);  // n x d
  std::vector<Operand> weights;            // K matrices, d x d
  Activation activation;
  NormBudget budget;

  Eigen::Index d() const { return initial.cols(); }
};

struct EmbeddingVector {
  Eigen::RowVectorXd values;
  bool perturbed = false;
  double eps_res = 0.0;

  Eigen::Index size() const { return values.size(); }
};

struct NormBudgetReport {
  double product_bound = 0.0;  // ||M0^T|| * prod_j ||W_j^T||
  double sum_bound = 0.0;      // sum_j ||W_j^T||
  bool satisfied = false;
};

class NormBudgetError : public std::invalid_argument {
 public:
  explicit NormBudgetError(const NormBudgetReport& r)
      : std::invalid_argument("gcn: norm budget violated (product " + std::to_string(r.product_bound) +
                              ", sum " + std::to_string(r.sum_bound) + ")"),
        report_(r) {}
  const NormBudgetReport& report() const { return report_; }

 private:
  NormBudgetReport report_;
};

/// Operator norm induced by l-infinity: largest absolute row sum.
inline double op_inf_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// ||M^T||_{op,inf}, i.e. the largest absolute column sum.
inline double op_inf_norm_transposed(const Operand& m) {
  if (m.is_identity()) return m.rows() > 0 ? 1.0 : 0.0;
  if (m.dense().size() == 0) return 0.0;
  return m.dense().cwiseAbs().colwise().sum().maxCoeff();
}

inline NormBudgetReport check_norm_budget(const GcnSpec& spec) {
  NormBudgetReport r;
  r.product_bound = op_inf_norm_transposed(spec.initial);
  for (const Operand& w : spec.weights) {
    const double norm = op_inf_norm_transposed(w);
    r.product_bound *= norm;
    r.sum_bound += norm;
  }
  r.satisfied = r.product_bound <= spec.budget.C && r.sum_bound <= spec.budget.E;
  return r;
}

/// act(Ahat * M * W) elementwise.
inline Eigen::MatrixXd gcn_layer(const RandomWalkMatrix& ahat, const Eigen::MatrixXd& m, const Operand& w,
                                 const Activation& act) {
  if (ahat.entries.cols() != m.rows())
    throw std::invalid_argument("gcn_layer: Ahat is " + std::to_string(ahat.n()) + "x" + std::to_string(ahat.n()) +
                                " but M has " + std::to_string(m.rows()) + " rows");
  if (w.rows() != m.cols() || w.cols() != w.rows())
    throw std::invalid_argument("gcn_layer: weight matrix must be d x d with d = cols(M)");
  Eigen::MatrixXd out;
  if (w.is_identity()) {
    out.noalias() = ahat.entries * m;
  } else if (m.cols() < m.rows()) {
    Eigen::MatrixXd mw = m * w.dense();
    out.noalias() = ahat.entries * mw;
  } else {
    Eigen::MatrixXd am = ahat.entries * m;
    out.noalias() = am * w.dense();
  }
  if (act.kind != ActivationKind::kIdentity || act.scale != 1.0) out = out.unaryExpr(act);
  return out;
}

namespace detail {

inline void validate_spec(const RandomWalkMatrix& ahat, const GcnSpec& spec) {
  if (spec.weights.size() != spec.K)
    throw std::invalid_argument("gcn: spec has " + std::to_string(spec.weights.size()) + " weights for K = " +
                                std::to_string(spec.K));
  if (spec.initial.rows() != ahat.n())
    throw std::invalid_argument("gcn: initial embedding has " + std::to_string(spec.initial.rows()) +
                                " rows, graph has " + std::to_string(ahat.n()) + " vertices");
  const auto report = check_norm_budget(spec);
  if (!report.satisfied) throw NormBudgetError(report);
}

}  // namespace detail

/// M^(K) by K applications of gcn_layer starting from the initial embedding.
inline Eigen::MatrixXd gcn_forward(const RandomWalkMatrix& ahat, const GcnSpec& spec) {
  detail::validate_spec(ahat, spec);
  Eigen::MatrixXd m = spec.initial.materialize();
  for (std::size_t j = 0; j < spec.K; ++j) m = gcn_layer(ahat, m, spec.weights[j], spec.activation);
  return m;
}

/// (1/n) 1^T M.
inline EmbeddingVector embedding_vector(const Eigen::MatrixXd& m) {
  EmbeddingVector h;
  h.values = m.colwise().sum() / static_cast<double>(m.rows());
  return h;
}

/// True when the activation acts linearly on every intermediate matrix:
/// identity, or relu fed only entrywise-nonnegative operands.
inline bool acts_linearly(const GcnSpec& spec) {
  const Activation& a = spec.activation;
  if (a.kind == ActivationKind::kIdentity) return true;
  if (a.kind != ActivationKind::kRelu || !(a.scale > 0.0)) return false;
  if (!spec.initial.nonnegative()) return false;
  return std::all_of(spec.weights.begin(), spec.weights.end(), [](const Operand& w) { return w.nonnegative(); });
}

/// Embedding vector of the K-layer network. Linear pipelines are evaluated
/// as (1/n) 1^T Ahat^K M0 W0 ... W_{K-1} by row-vector propagation, O(K n^2);
/// everything else runs the dense forward pass.
inline EmbeddingVector embed_graph(const RandomWalkMatrix& ahat, const GcnSpec& spec) {
  if (!acts_linearly(spec)) return embedding_vector(gcn_forward(ahat, spec));
  detail::validate_spec(ahat, spec);
  const Eigen::Index n = ahat.n();
  Eigen::RowVectorXd h = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::RowVectorXd next(n);
  for (std::size_t j = 0; j < spec.K; ++j) {
    next.noalias() = h * ahat.entries;
    h.swap(next);
  }
  if (!spec.initial.is_identity()) h = h * spec.initial.dense();
  const double s = spec.activation.scale;
  for (std::size_t j = 0; j < spec.K; ++j) {
    if (!spec.weights[j].is_identity()) h = h * spec.weights[j].dense();
    if (s != 1.0) h *= s;
  }
  return EmbeddingVector{std::move(h), false, 0.0};
}

/// Adds independent Uniform[-eps, eps] noise to each coordinate.
inline EmbeddingVector perturb(const EmbeddingVector& h, double eps_res, Seed seed) {
  if (h.perturbed) throw std::invalid_argument("perturb: embedding is already perturbed");
  if (!(eps_res >= 0.0)) throw std::invalid_argument("perturb: eps_res must be nonnegative");
  EmbeddingVector out = h;
  out.perturbed = true;
  out.eps_res = eps_res;
  Engine eng = make_engine(seed);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    const double u = uniform01(eng);
    if (eps_res > 0.0) out.values[i] += eps_res * (2.0 * u - 1.0);
  }
  return out;
}

/// Identity-everything spec of dimension n with K layers; budget (C, E) = (1, K).
inline GcnSpec identity_gcn_spec(Eigen::Index n, std::size_t K, Activation act) {
  GcnSpec spec;
  spec.K = K;
  spec.initial = Operand::identity(n);
  spec.weights.assign(K, Operand::identity(n));
  spec.activation = act;
  spec.budget = NormBudget{1.0, static_cast<double>(K)};
  return spec;
}

}  // namespace gcnlab
