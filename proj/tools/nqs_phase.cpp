// Copyright 2026 The nqs-phase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nqs-phase: train RBM wavefunctions across a spin-chain phase diagram and
// locate the transition from the PCA of the trained weights.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nqs/commands.hpp"

namespace {

struct SweepFlags {
  std::string config;
  std::optional<std::string> out, model, strategy, grid, optimizer, boundary, field;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps, n_sites, alpha;
  std::optional<double> lr, fixed_coupling;
  bool quiet = false;
};

// Flags are overlaid on the config document, so model-dependent defaults
// still apply to everything neither source sets.
nqs::RunConfig resolve(const SweepFlags &f) {
  nlohmann::json doc = nlohmann::json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw nqs::ParameterError("config: cannot open '" + f.config + "'");
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
      throw nqs::ParameterError(std::string("config: ") + e.what());
    }
    if (doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
  }
  if (f.model) doc["model"] = *f.model;
  if (f.out) doc["out"] = *f.out;
  if (f.strategy) doc["strategy"] = *f.strategy;
  if (f.grid) doc["grid"] = *f.grid;
  if (f.boundary) doc["boundary"] = *f.boundary;
  if (f.field) doc["field"] = *f.field;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.n_sites) doc["n_sites"] = *f.n_sites;
  if (f.alpha) doc["alpha"] = *f.alpha;
  if (f.fixed_coupling) doc["fixed_coupling"] = *f.fixed_coupling;
  if (f.steps) doc["training"]["steps"] = *f.steps;
  if (f.lr) doc["training"]["learning_rate"] = *f.lr;
  if (f.optimizer) doc["training"]["optimizer"] = *f.optimizer;
  return nqs::RunConfig::from_json(doc);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Neural-quantum-state phase sweeps and weight-space transition detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nqs::cli::kToolVersion);

  SweepFlags sf;
  auto *sweep = app.add_subcommand("sweep", "Train across a coupling grid and write the sweep file set");
  sweep->add_option("--config", sf.config, "JSON run config (a sweep manifest.json also works)");
  sweep->add_option("--out", sf.out, "Output directory");
  sweep->add_option("--model", sf.model, "tfim | j1j2")->check(CLI::IsMember({"tfim", "j1j2"}));
  sweep->add_option("--strategy", sf.strategy, "independent | adiabatic-forward | adiabatic-backward")
      ->check(CLI::IsMember({"independent", "adiabatic-forward", "adiabatic-backward"}));
  sweep->add_option("--seed", sf.seed, "Base seed");
  sweep->add_option("--grid", sf.grid, "Coupling grid MIN:MAX:STEP");
  sweep->add_option("--steps", sf.steps, "Optimizer steps per grid point");
  sweep->add_option("--lr", sf.lr, "Learning rate");
  sweep->add_option("--optimizer", sf.optimizer, "sgd | adam")->check(CLI::IsMember({"sgd", "adam"}));
  sweep->add_option("--boundary", sf.boundary, "periodic | open")->check(CLI::IsMember({"periodic", "open"}));
  sweep->add_option("--n-sites", sf.n_sites, "Chain length");
  sweep->add_option("--alpha", sf.alpha, "Hidden units per site");
  sweep->add_option("--field", sf.field, "real | complex")->check(CLI::IsMember({"real", "complex"}));
  sweep->add_option("--j", sf.fixed_coupling, "Fixed coupling: J (tfim) or J1 (j1j2)");
  sweep->add_flag("--quiet", sf.quiet, "No per-point progress");

  std::string analyze_dir;
  int components = 3;
  auto *analyze = app.add_subcommand("analyze", "PCA of a sweep's weights and PC1 transition estimate");
  analyze->add_option("dir", analyze_dir, "Sweep output directory")->required();
  analyze->add_option("--components", components, "Number of principal components");

  nqs::cli::EdRequest ed;
  std::string ed_model = "tfim", ed_boundary = "periodic";
  std::optional<double> ed_j;
  auto *edc = app.add_subcommand("ed", "Exact ground-state energy of one Hamiltonian");
  edc->add_option("--model", ed_model, "tfim | j1j2")->check(CLI::IsMember({"tfim", "j1j2"}));
  edc->add_option("--coupling", ed.coupling, "h (tfim) or J2/J1 (j1j2)")->required();
  edc->add_option("--n-sites", ed.n_sites, "Chain length");
  edc->add_option("--j", ed_j, "J (tfim, default -1) or J1 (j1j2, default 1)");
  edc->add_option("--boundary", ed_boundary, "periodic | open")->check(CLI::IsMember({"periodic", "open"}));
  edc->add_option("--dump-state", ed.dump_state, "Write the ground-state vector to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return nqs::cli::kUsageError;
  }

  if (*sweep) {
    nqs::RunConfig cfg;
    try {
      cfg = resolve(sf);
    } catch (const nqs::ParameterError &e) {
      std::cerr << "error: " << e.what() << "\n";
      return nqs::cli::kUsageError;
    }
    return nqs::cli::cmd_sweep(cfg, std::cout, std::cerr, !sf.quiet);
  }
  if (*analyze) return nqs::cli::cmd_analyze(analyze_dir, components, std::cout, std::cerr);

  ed.model = nqs::parse_model(ed_model);
  ed.boundary = nqs::parse_boundary(ed_boundary);
  ed.fixed_coupling = ed_j.value_or(ed.model == nqs::Model::tfim ? -1.0 : 1.0);
  return nqs::cli::cmd_ed(ed, std::cout, std::cerr);
}
