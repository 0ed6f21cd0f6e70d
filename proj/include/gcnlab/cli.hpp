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

/// \file cli.hpp
/// \brief Subcommand implementations behind the gcnlab tool. Each command
///        writes its CSV outputs plus a manifest.json describing the run.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcnlab/analysis.hpp"
#include "gcnlab/graphon.hpp"
#include "gcnlab/hypotest.hpp"
#include "gcnlab/io.hpp"
#include "gcnlab/sampling.hpp"

#ifndef GCNLAB_VERSION
#define GCNLAB_VERSION "0.0.0"
#endif

namespace gcnlab::cli {

inline constexpr const char* kOutDirEnv = "GCNLAB_OUT_DIR";

enum ExitCode : int { kOk = 0, kRunFailed = 1, kBadInput = 2 };

struct RunManifest {
  std::string command;
  std::string config_hash;
  Seed seed = 0;
  std::string tool_version = GCNLAB_VERSION;
  std::string start;
  std::string end;
  std::vector<std::string> outputs;
};

/// FNV-1a 64 over the canonical (key-sorted, compact) dump of the config.
inline std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json manifest_to_json(const RunManifest& m) {
  return json{{"command", m.command},       {"config_hash", m.config_hash}, {"seed", m.seed},
              {"tool_version", m.tool_version}, {"start", m.start},           {"end", m.end},
              {"outputs", m.outputs}};
}

/// Output directory: explicit flag, else $GCNLAB_OUT_DIR, else ".".
inline std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return ".";
}

// All file output of a command goes through one writer in the calling thread.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command, const json& config, Seed seed) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    manifest_.command = std::move(command);
    manifest_.config_hash = config_hash(config);
    manifest_.seed = seed;
    manifest_.start = utc_timestamp();
  }

  void write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    manifest_.outputs.push_back(path.string());
  }

  void finish() {
    manifest_.end = utc_timestamp();
    std::ofstream out(dir_ / "manifest.json");
    out << manifest_to_json(manifest_).dump(2) << '\n';
  }

  const RunManifest& manifest() const { return manifest_; }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
};

struct Options {
  std::optional<std::string> config;
  std::optional<Seed> seed;
  std::optional<std::string> out_dir;
  std::size_t threads = 1;
  CutMode mode = CutMode::kExact;
  std::size_t restarts = 32;
  std::vector<std::string> inputs;
};

namespace detail {

inline json load_config(const Options& opt) {
  if (!opt.config) throw ConfigError("--config is required");
  json j = parse_json_file(*opt.config);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (opt.seed) j["seed"] = *opt.seed;
  return j;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRunFailed;
  }
}

}  // namespace detail

/// Config: {"graphon": ..., "n": ..., "seed": ...}. Writes sample.edgelist,
/// latents.json and manifest.json.
inline int cmd_sample(const Options& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const json cfg = detail::load_config(opt);
    const StepGraphon w = graphon_from_json(gcnlab::detail::require(cfg, "graphon", "config"));
    const std::size_t n = gcnlab::detail::count(cfg, "n", "config");
    if (n < 2) throw ConfigError("config: n must be at least 2");
    const Seed seed = gcnlab::detail::seed_from_json(cfg);
    const SampleGraph g = sample_from_graphon(w, n, seed);

    OutputSet outputs(resolve_out_dir(opt.out_dir), "sample", cfg, seed);
    std::ostringstream edges;
    write_edge_list(edges, g);
    outputs.write("sample.edgelist", edges.str());
    outputs.write("latents.json", latents_to_json(*g.latents).dump() + "\n");
    outputs.finish();
    out << "n=" << g.n() << " m=" << g.edge_count() << '\n';
    return kOk;
  });
}

/// Prints the delta-separation of two graphon JSON files.
inline int cmd_delta(const Options& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    if (opt.inputs.size() != 2) throw ConfigError("delta: expected two graphon files");
    const StepGraphon w0 = graphon_from_json(parse_json_file(opt.inputs[0]));
    const StepGraphon w1 = graphon_from_json(parse_json_file(opt.inputs[1]));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", delta_separation(w0, w1));
    out << buf << '\n';
    return kOk;
  });
}

/// One edge list: cut norm of its adjacency matrix. Two edge lists: cut
/// distance between the graphs.
inline int cmd_cutnorm(const Options& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const Seed seed = opt.seed.value_or(0);
    if (opt.inputs.size() == 1) {
      const Eigen::MatrixXd a = read_edge_list_file(opt.inputs[0]).adjacency_matrix();
      const CutNormResult r =
          opt.mode == CutMode::kExact ? cut_norm_exact(a) : cut_norm_heuristic(a, opt.restarts, seed);
      write_cut_norm_csv(out, r);
      return kOk;
    }
    if (opt.inputs.size() == 2) {
      const SampleGraph g0 = read_edge_list_file(opt.inputs[0]);
      const SampleGraph g1 = read_edge_list_file(opt.inputs[1]);
      out << "cut_distance,exact\n"
          << format_double(cut_distance_graphs(g0, g1, opt.mode, seed, opt.restarts)) << ','
          << (opt.mode == CutMode::kExact ? 1 : 0) << '\n';
      return kOk;
    }
    throw ConfigError("cutnorm: expected one or two edge-list files");
  });
}

namespace detail {

inline void write_trials(OutputSet& outputs, const TestConfig& cfg, const TrialsResult& r) {
  std::ostringstream csv;
  csv << "trial_id,B,decision,stat0,stat1,n,K,eps_res,seed,linf_coupled_diff,resamples\n";
  for (const auto& t : r.records) {
    csv << t.trial_id << ',' << t.true_label << ',' << t.decision << ',' << format_double(t.stat0) << ','
        << format_double(t.stat1) << ',' << cfg.n << ',' << r.K << ',' << format_double(cfg.eps_res) << ','
        << cfg.seed << ',' << (t.linf_coupled_diff ? format_double(*t.linf_coupled_diff) : "") << ','
        << t.resamples << '\n';
  }
  outputs.write("trials.csv", csv.str());

  const double delta = delta_separation(cfg.w0, cfg.w1);
  double bound = 0.0;
  std::string kind = "none";
  if (cfg.eps_res > 0.0 && delta > kLevelMergeTolerance) {
    bound = error_lb_delta_pos(delta, cfg.eps_res, cfg.n).value;
    kind = "delta_pos";
  } else if (cfg.eps_res > 0.0) {
    bound = error_lb_delta_zero(1.0, cfg.eps_res, cfg.n);
    kind = "delta_zero_c1";
  }
  std::ostringstream summary;
  summary << "n,K,eps_res,trials,errors,error_rate,ci_lo,ci_hi,delta,bound,bound_kind,resamples,seed\n"
          << cfg.n << ',' << r.K << ',' << format_double(cfg.eps_res) << ',' << cfg.trials << ',' << r.errors << ','
          << format_double(r.error_rate) << ',' << format_double(r.ci95.lo) << ',' << format_double(r.ci95.hi) << ','
          << format_double(delta) << ',' << format_double(bound) << ',' << kind << ',' << r.resamples << ','
          << cfg.seed << '\n';
  outputs.write("summary.csv", summary.str());
}

inline void write_convergence(OutputSet& outputs, const ConvergenceResult& r) {
  const std::string slope = r.slope ? format_double(*r.slope) : "";
  std::ostringstream csv;
  csv << "n,K,trials,linf_median,median_abs_median,n_linf_median,frac_below_median,slope\n";
  for (const auto& row : r.rows) {
    csv << row.n << ',' << row.K << ',' << row.trials << ',' << format_double(row.linf_median) << ','
        << format_double(row.median_abs_median) << ',' << format_double(row.n_linf_median) << ','
        << format_double(row.frac_below_median) << ',' << slope << '\n';
  }
  outputs.write("convergence.csv", csv.str());

  std::ostringstream trials;
  trials << "n,trial_id,linf,median_abs,frac_below,resamples\n";
  for (const auto& t : r.trials) {
    trials << t.n << ',' << t.trial_id << ',' << format_double(t.stats.linf) << ','
           << format_double(t.stats.median_abs) << ',' << format_double(t.stats.frac_below) << ',' << t.resamples
           << '\n';
  }
  outputs.write("convergence_trials.csv", trials.str());
}

}  // namespace detail

/// Runs a hypothesis-testing config ("experiment": "trials", the default) or
/// a coupled convergence config ("experiment": "convergence").
inline int cmd_experiment(const Options& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const json cfg = detail::load_config(opt);
    const std::string kind = cfg.value("experiment", std::string("trials"));
    const Seed seed = gcnlab::detail::seed_from_json(cfg);
    if (kind == "trials") {
      TestConfig tc = test_config_from_json(cfg);
      tc.threads = opt.threads;
      const TrialsResult r = run_trials(tc);
      for (const auto& w : r.warnings) err << "warning: " << w << '\n';
      OutputSet outputs(resolve_out_dir(opt.out_dir), "experiment", cfg, seed);
      detail::write_trials(outputs, tc, r);
      outputs.finish();
      out << "trials=" << tc.trials << " errors=" << r.errors << " error_rate=" << format_double(r.error_rate)
          << " ci95=[" << format_double(r.ci95.lo) << ", " << format_double(r.ci95.hi) << "]\n";
      return kOk;
    }
    if (kind == "convergence") {
      ConvergenceConfig cc = convergence_config_from_json(cfg);
      cc.threads = opt.threads;
      const ConvergenceResult r = coupled_convergence_experiment(cc);
      OutputSet outputs(resolve_out_dir(opt.out_dir), "experiment", cfg, seed);
      detail::write_convergence(outputs, r);
      outputs.finish();
      out << "rows=" << r.rows.size() << " slope=" << (r.slope ? format_double(*r.slope) : "nan") << '\n';
      return kOk;
    }
    throw ConfigError("experiment: unknown kind '" + kind + "' (expected trials or convergence)");
  });
}

/// Evaluates both error lower bounds over grids. Optional config:
/// {"n": [...], "delta": [...], "eps_res": [...] | "eps_scale": [...], "c": [...]}
/// where eps_scale gives eps_res = scale / n. Prints CSV; with --out also
/// writes bounds.csv and a manifest.
inline int cmd_bounds(const Options& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    json cfg = json::object();
    if (opt.config) cfg = parse_json_file(*opt.config);
    const auto ns = cfg.value("n", std::vector<std::size_t>{100, 200, 400, 800, 1600});
    const auto deltas = cfg.value("delta", std::vector<double>{0.3});
    const auto cs = cfg.value("c", std::vector<double>{0.1, 1.0, 10.0});
    const bool absolute = cfg.contains("eps_res");
    const auto eps = absolute ? cfg.at("eps_res").get<std::vector<double>>()
                              : cfg.value("eps_scale", std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0});
    std::ostringstream csv;
    csv << "n,eps_res,kind,param,value,vacuous\n";
    for (std::size_t n : ns) {
      for (double e : eps) {
        const double eps_res = absolute ? e : e / static_cast<double>(n);
        for (double d : deltas) {
          const ErrorBound b = error_lb_delta_pos(d, eps_res, n);
          csv << n << ',' << format_double(eps_res) << ",delta_pos," << format_double(d) << ','
              << format_double(b.value) << ',' << (b.vacuous ? 1 : 0) << '\n';
        }
        for (double c : cs) {
          csv << n << ',' << format_double(eps_res) << ",delta_zero," << format_double(c) << ','
              << format_double(error_lb_delta_zero(c, eps_res, n)) << ",0\n";
        }
      }
    }
    out << csv.str();
    if (opt.out_dir) {
      OutputSet outputs(*opt.out_dir, "bounds", cfg, 0);
      outputs.write("bounds.csv", csv.str());
      outputs.finish();
    }
    return kOk;
  });
}

}  // namespace gcnlab::cli
