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

#include "CLI11.hpp"

#include "gcnlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gcnlab: graphon sampling, GCN embeddings and hypothesis-testing experiments"};
  app.set_version_flag("--version", GCNLAB_VERSION);
  app.require_subcommand(1);

  gcnlab::cli::Options opt;
  std::string mode = "exact";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out", opt.out_dir, "Output directory (default: $GCNLAB_OUT_DIR or .)");
    sub->add_option("--threads", opt.threads, "Worker threads for independent trials")->check(CLI::PositiveNumber);
  };

  auto* sample = app.add_subcommand("sample", "Sample a graph from a graphon and write an edge list");
  common(sample);
  auto* delta = app.add_subcommand("delta", "Print the degree-profile separation of two graphons");
  delta->add_option("graphons", opt.inputs, "Two graphon JSON files")->expected(2)->required();
  auto* cutnorm = app.add_subcommand("cutnorm", "Cut norm of one edge list, or cut distance of two");
  common(cutnorm);
  cutnorm->add_option("graphs", opt.inputs, "Edge-list files")->expected(1, 2)->required();
  cutnorm->add_option("--mode", mode, "exact | heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
  cutnorm->add_option("--restarts", opt.restarts, "Heuristic restarts");
  auto* experiment = app.add_subcommand("experiment", "Run a trials or convergence experiment");
  common(experiment);
  auto* bounds = app.add_subcommand("bounds", "Evaluate the error lower bounds over grids");
  common(bounds);

  CLI11_PARSE(app, argc, argv);
  opt.mode = mode == "heuristic" ? gcnlab::CutMode::kHeuristic : gcnlab::CutMode::kExact;

  if (*sample) return gcnlab::cli::cmd_sample(opt);
  if (*delta) return gcnlab::cli::cmd_delta(opt);
  if (*cutnorm) return gcnlab::cli::cmd_cutnorm(opt);
  if (*experiment) return gcnlab::cli::cmd_experiment(opt);
  if (*bounds) return gcnlab::cli::cmd_bounds(opt);
  return 0;
}
