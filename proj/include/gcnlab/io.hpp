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

/// \file io.hpp
/// \brief JSON documents for graphons, GCN specs and experiment configs;
///        the edge-list graph format; CSV helpers.
///
/// Graphon JSON takes one of three forms:
///   {"block_masses": [...], "values": [[...]], "lower_bound": x}
///   {"sbm": {"k1": ..., "p1": ..., "p2": ..., "q": ...}}
///   {"family": {"base": [p1*, p2*, q*], "k1": ..., "tau": ...}}
///
/// Edge lists are text: a header line "n m" followed by m lines "i j" with
/// 0-based vertex indices and i < j.

#pragma once

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcnlab/analysis.hpp"
#include "gcnlab/gcn.hpp"
#include "gcnlab/graphon.hpp"
#include "gcnlab/hypotest.hpp"
#include "gcnlab/sampling.hpp"

namespace gcnlab {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::size_t count(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(where + ": field '" + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

inline Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw ConfigError(where + ": expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(where + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

inline StepGraphon graphon_from_json(const json& j) {
  try {
    if (j.contains("sbm")) {
      const json& s = j.at("sbm");
      return sbm_to_graphon(SbmParams{detail::number(s, "k1", "sbm"), detail::number(s, "p1", "sbm"),
                                      detail::number(s, "p2", "sbm"), detail::number(s, "q", "sbm")});
    }
    if (j.contains("family")) {
      const json& f = j.at("family");
      const json& base = detail::require(f, "base", "family");
      if (!base.is_array() || base.size() != 3) throw ConfigError("family: 'base' must have three entries");
      FamilyPoint fp{{base[0].get<double>(), base[1].get<double>(), base[2].get<double>()},
                     detail::number(f, "k1", "family"),
                     detail::number(f, "tau", "family")};
      return sbm_to_graphon(family_point_to_sbm(fp));
    }
    auto masses = detail::require(j, "block_masses", "graphon").get<std::vector<double>>();
    auto values = detail::require(j, "values", "graphon").get<std::vector<std::vector<double>>>();
    if (j.contains("lower_bound")) return StepGraphon(std::move(masses), std::move(values), j.at("lower_bound").get<double>());
    return StepGraphon(std::move(masses), std::move(values));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("graphon: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline json graphon_to_json(const StepGraphon& w) {
  json out;
  out["block_masses"] = std::vector<double>(w.block_masses().begin(), w.block_masses().end());
  out["values"] = w.values();
  out["lower_bound"] = w.lower_bound();
  return out;
}

/// {"K": ..., "activation": "relu", "weights": "identity" | [[...]] | [[[...]], ...],
///  "initial": "identity" | [[...]], "C": ..., "E": ..., "scale": ...}
/// K is optional here; experiment configs derive it from n.
inline GcnTemplate gcn_template_from_json(const json& j) {
  GcnTemplate t;
  try {
    if (j.contains("activation")) t.activation.kind = parse_activation(j.at("activation").get<std::string>());
    if (j.contains("scale")) t.activation.scale = j.at("scale").get<double>();
    if (j.contains("weights") && !j.at("weights").is_string()) {
      const json& w = j.at("weights");
      std::vector<Eigen::MatrixXd> ws;
      if (w.is_array() && !w.empty() && w.front().is_array() && !w.front().empty() && w.front().front().is_array()) {
        for (const json& m : w) ws.push_back(detail::matrix_from_json(m, "gcn.weights"));
      } else {
        ws.push_back(detail::matrix_from_json(w, "gcn.weights"));
      }
      t.weights = std::move(ws);
    } else if (j.contains("weights") && j.at("weights").get<std::string>() != "identity") {
      throw ConfigError("gcn: weights must be \"identity\" or a matrix");
    }
    if (j.contains("initial") && !j.at("initial").is_string()) {
      t.initial = detail::matrix_from_json(j.at("initial"), "gcn.initial");
    } else if (j.contains("initial") && j.at("initial").get<std::string>() != "identity") {
      throw ConfigError("gcn: initial must be \"identity\" or a matrix");
    }
    if (j.contains("C")) t.C = j.at("C").get<double>();
    if (j.contains("E")) t.E = j.at("E").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("gcn: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

/// Full GcnSpec; requires "K" and, for identity initial embeddings, n.
inline GcnSpec gcn_spec_from_json(const json& j, std::size_t n) {
  const std::size_t K = detail::count(j, "K", "gcn");
  try {
    return gcn_template_from_json(j).instantiate(n, K);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace detail {

inline LayerRule layer_rule_from_json(const json& j) {
  LayerRule r;
  if (j.contains("K")) r.fixed = count(j, "K", "config");
  if (j.contains("D")) r.depth_factor = number(j, "D", "config");
  return r;
}

inline Seed seed_from_json(const json& j) {
  if (!j.contains("seed")) return 0;
  const json& s = j.at("seed");
  if (!s.is_number_integer()) throw ConfigError("config: 'seed' must be an integer");
  return s.get<Seed>();
}

}  // namespace detail

/// {"W0": graphon, "W1": graphon, "n": ..., "K" | "D": ..., "eps_res": ...,
///  "gcn": template, "trials": ..., "seed": ..., "coupled": bool}
inline TestConfig test_config_from_json(const json& j) {
  try {
    TestConfig cfg;
    cfg.w0 = graphon_from_json(detail::require(j, "W0", "config"));
    cfg.w1 = graphon_from_json(detail::require(j, "W1", "config"));
    cfg.n = detail::count(j, "n", "config");
    if (cfg.n < 2) throw ConfigError("config: n must be at least 2");
    cfg.layers = detail::layer_rule_from_json(j);
    cfg.eps_res = j.contains("eps_res") ? detail::number(j, "eps_res", "config") : 0.0;
    if (cfg.eps_res < 0.0) throw ConfigError("config: eps_res must be nonnegative");
    if (j.contains("gcn")) cfg.gcn = gcn_template_from_json(j.at("gcn"));
    cfg.trials = detail::count(j, "trials", "config");
    if (cfg.trials < 1) throw ConfigError("config: trials must be at least 1");
    cfg.seed = detail::seed_from_json(j);
    cfg.coupled = j.value("coupled", false);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

/// {"experiment": "convergence", "W0": ..., "W1": ..., "n_grid": [...],
///  "K" | "D": ..., "gcn": ..., "trials": ..., "seed": ..., "threshold_scale": ...}
inline ConvergenceConfig convergence_config_from_json(const json& j) {
  try {
    ConvergenceConfig cfg;
    cfg.w0 = graphon_from_json(detail::require(j, "W0", "config"));
    cfg.w1 = graphon_from_json(detail::require(j, "W1", "config"));
    cfg.n_grid = detail::require(j, "n_grid", "config").get<std::vector<std::size_t>>();
    if (cfg.n_grid.empty()) throw ConfigError("config: n_grid is empty");
    for (std::size_t n : cfg.n_grid)
      if (n < 2) throw ConfigError("config: every n in n_grid must be at least 2");
    if (!std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()))
      throw ConfigError("config: n_grid must be ascending");
    cfg.layers = detail::layer_rule_from_json(j);
    if (j.contains("gcn")) cfg.gcn = gcn_template_from_json(j.at("gcn"));
    cfg.trials = detail::count(j, "trials", "config");
    if (cfg.trials < 1) throw ConfigError("config: trials must be at least 1");
    cfg.seed = detail::seed_from_json(j);
    if (j.contains("threshold_scale")) cfg.threshold_scale = detail::number(j, "threshold_scale", "config");
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Edge lists

inline void write_edge_list(std::ostream& out, const SampleGraph& g) {
  const auto edges = g.edges();
  out << g.n() << ' ' << edges.size() << '\n';
  for (auto [i, j] : edges) out << i << ' ' << j << '\n';
}

inline SampleGraph read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ConfigError("edge list: missing 'n m' header");
  if (n < 2) throw ConfigError("edge list: n must be at least 2");
  SampleGraph g(n);
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t i = 0, j = 0;
    if (!(in >> i >> j)) throw ConfigError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(e));
    if (i >= n || j >= n || i == j) throw ConfigError("edge list: bad edge " + std::to_string(i) + " " + std::to_string(j));
    g.add_edge(i, j);
  }
  return g;
}

inline SampleGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_edge_list(in);
}

inline json latents_to_json(const LatentPoints& p) { return json(p.xs); }

// ---------------------------------------------------------------------------
// CSV

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_indices(const std::vector<std::size_t>& v) {
  json j = v;
  return j.dump();
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_cut_norm_csv(std::ostream& out, const CutNormResult& r, bool header = true) {
  if (header) out << "value,exact,S,T\n";
  out << format_double(r.value) << ',' << (r.exact ? 1 : 0) << ',' << csv_quote(join_indices(r.S)) << ','
      << csv_quote(join_indices(r.T)) << '\n';
}

inline void write_diff_stats_csv(std::ostream& out, const DiffStats& s, double threshold, bool header = true) {
  if (header) out << "linf,median_abs,frac_below,threshold\n";
  out << format_double(s.linf) << ',' << format_double(s.median_abs) << ',' << format_double(s.frac_below) << ','
      << format_double(threshold) << '\n';
}

inline void write_embedding_csv(std::ostream& out, const EmbeddingVector& h) {
  for (Eigen::Index i = 0; i < h.values.size(); ++i) {
    if (i) out << ',';
    out << format_double(h.values[i]);
  }
  out << '\n';
}

}  // namespace gcnlab
