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

#ifndef NQS_COMMANDS_HPP
#define NQS_COMMANDS_HPP

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nqs/analysis.hpp"
#include "nqs/config.hpp"
#include "nqs/csv.hpp"
#include "nqs/error.hpp"
#include "nqs/ground_state.hpp"
#include "nqs/manifest.hpp"
#include "nqs/sweep.hpp"

namespace nqs::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2, kSignatureAbsent = 3 };

inline constexpr const char *kToolVersion = "nqs-phase 0.1.0";

/// File-name label of a coupling value, e.g. history_0.025.csv.
inline std::string coupling_label(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", c);
  return buf;
}

template <class T>
csv::Table results_table(const SweepResult<T> &r) {
  csv::Table t;
  t.header = {"coupling",     "status",       "exact_energy", "initial_energy",
              "final_energy", "energy_error", "infidelity",   "failed_step"};
  const double nan = std::nan("");
  for (const auto &rec : r.records) {
    const bool ran = !rec.energy_history.empty();
    t.rows.push_back({csv::number(rec.coupling), to_string(rec.status), csv::number(rec.exact_energy),
                      csv::number(ran ? rec.energy_history.front() : nan),
                      csv::number(rec.ok() ? rec.energy_history.back() : nan),
                      csv::number(rec.ok() ? rec.energy_error : nan),
                      csv::number(rec.ok() ? rec.infidelity : nan), std::to_string(rec.failed_step)});
  }
  return t;
}

template <class T>
csv::Table weights_table(const SweepResult<T> &r) {
  csv::Table t;
  const FlatLayout layout{r.grid.n_sites, r.alpha * r.grid.n_sites, field_of_v<T>};
  t.header = layout.column_names();
  for (Eigen::Index k = 0; k < r.flat_weights.rows(); ++k) {
    std::vector<std::string> row;
    row.reserve(static_cast<std::size_t>(r.flat_weights.cols()));
    for (Eigen::Index c = 0; c < r.flat_weights.cols(); ++c) row.push_back(csv::number(r.flat_weights(k, c)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

template <class T>
csv::Table history_table(const TrainingRecord<T> &rec) {
  csv::Table t;
  t.header = {"step", "energy", "energy_error"};
  for (std::size_t s = 0; s < rec.energy_history.size(); ++s) {
    t.rows.push_back({std::to_string(s), csv::number(rec.energy_history[s]),
                      csv::number(energy_error(rec.energy_history[s], rec.exact_energy))});
  }
  return t;
}

/// results.csv, weights.csv, history_<coupling>.csv and manifest.json.
template <class T>
nlohmann::json write_sweep_files(const SweepResult<T> &r, const RunConfig &cfg, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json outputs = nlohmann::json::object();
  auto emit = [&](const std::string &name, const std::string &content) {
    csv::write_atomic(dir / name, content);
    outputs[name] = git_blob_hash(content);
  };
  emit("results.csv", results_table(r).render());
  emit("weights.csv", weights_table(r).render());
  for (const auto &rec : r.records) {
    if (rec.energy_history.empty()) continue;
    emit("history_" + coupling_label(rec.coupling) + ".csv", history_table(rec).render());
  }
  std::vector<double> failed;
  for (const auto &rec : r.records) {
    if (!rec.ok()) failed.push_back(rec.coupling);
  }
  nlohmann::json manifest = {{"tool", kToolVersion},
                             {"config", cfg.to_json()},
                             {"content_hash", r.manifest["content_hash"]},
                             {"sweep", r.manifest},
                             {"failed_couplings", failed},
                             {"outputs", outputs}};
  csv::write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

namespace detail {

template <class T>
int run_sweep(const RunConfig &cfg, std::ostream &err, bool verbose) {
  const auto grid = cfg.sweep_grid();
  SweepOptions options;
  options.init_stddev = cfg.init_stddev;
  if (verbose) {
    options.progress = [&err](const SweepProgress &p) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "[%zu/%zu] coupling %.6g %s initial error %.3g final error %.3g\n",
                    p.completed, p.total, p.coupling, to_string(p.status).c_str(), p.initial_energy_error,
                    p.final_energy_error);
      err << buf << std::flush;
    };
  }
  SweepResult<T> result;
  switch (cfg.strategy) {
    case Strategy::independent:
      result = run_independent<T>(grid, cfg.training, cfg.alpha, cfg.seed, options);
      break;
    case Strategy::adiabatic_forward:
      result = run_adiabatic<T>(grid, cfg.training, cfg.alpha, ChainStart::forward, cfg.seed, options);
      break;
    case Strategy::adiabatic_backward:
      result = run_adiabatic<T>(grid, cfg.training, cfg.alpha, ChainStart::backward, cfg.seed, options);
      break;
  }
  const auto manifest = write_sweep_files(result, cfg, cfg.out);
  if (!manifest["failed_couplings"].empty()) {
    err << "sweep finished with failures at couplings: " << manifest["failed_couplings"].dump() << "\n";
    return kRuntimeFailure;
  }
  return kSuccess;
}

}  // namespace detail

inline int cmd_sweep(const RunConfig &cfg, std::ostream &out, std::ostream &err, bool verbose = true) {
  try {
    cfg.validate();
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    const int code = cfg.field == Field::real ? detail::run_sweep<double>(cfg, err, verbose)
                                              : detail::run_sweep<cplx>(cfg, err, verbose);
    out << "wrote sweep to " << cfg.out << "\n";
    return code;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

/// Loads weights.csv (and couplings from results.csv) of a sweep directory.
struct SweepWeights {
  std::vector<std::string> columns;
  std::vector<double> couplings;
  Eigen::MatrixXd weights;
};

inline SweepWeights load_sweep_weights(const std::filesystem::path &dir) {
  const auto wt = csv::read(dir / "weights.csv");
  const auto rt = csv::read(dir / "results.csv");
  if (wt.rows.size() != rt.rows.size()) {
    throw InputError("weights.csv has " + std::to_string(wt.rows.size()) + " rows but results.csv has " +
                     std::to_string(rt.rows.size()));
  }
  if (rt.header.empty() || rt.header[0] != "coupling") throw InputError("results.csv: first column must be coupling");
  SweepWeights s;
  s.columns = wt.header;
  s.weights.resize(static_cast<Eigen::Index>(wt.rows.size()), static_cast<Eigen::Index>(wt.header.size()));
  for (std::size_t i = 0; i < wt.rows.size(); ++i) {
    s.couplings.push_back(csv::parse_number(rt.rows[i][0], "results.csv"));
    for (std::size_t c = 0; c < wt.header.size(); ++c) {
      const double v = csv::parse_number(wt.rows[i][c], "weights.csv");
      if (!std::isfinite(v)) {
        throw InputError("weights.csv: non-finite weight in row " + std::to_string(i + 1) +
                         " (incomplete sweep?)");
      }
      s.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return s;
}

inline int cmd_analyze(const std::filesystem::path &dir, int components, std::ostream &out, std::ostream &err) {
  SweepWeights data;
  PcaResult result;
  try {
    data = load_sweep_weights(dir);
    result = pca(data.weights, components);
  } catch (const InputError &e) {
    err << "input error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    const auto tracks = export_projection_tracks(result, data.couplings);
    csv::Table pca_csv;
    pca_csv.header = tracks.header;
    for (const auto &row : tracks.rows) {
      std::vector<std::string> cells;
      for (double v : row) cells.push_back(csv::number(v));
      pca_csv.rows.push_back(std::move(cells));
    }
    csv::write_atomic(dir / "pca.csv", pca_csv.render());

    csv::Table comp;
    comp.header = data.columns;
    for (Eigen::Index j = 0; j < result.components.rows(); ++j) {
      std::vector<std::string> cells;
      for (Eigen::Index c = 0; c < result.components.cols(); ++c) cells.push_back(csv::number(result.components(j, c)));
      comp.rows.push_back(std::move(cells));
    }
    csv::write_atomic(dir / "components.csv", comp.render());

    nlohmann::json tj = {{"component_index", 1},
                         {"extremum_kind", "minimum"},
                         {"explained_variance", std::vector<double>(result.explained_variance.data(),
                                                                    result.explained_variance.data() +
                                                                        result.explained_variance.size())}};
    int code = kSuccess;
    try {
      const auto est = detect_transition(result, data.couplings, 1);
      tj["detected"] = true;
      tj["coupling"] = est.coupling_at_extremum;
      tj["grid_index"] = est.grid_index;
      tj["orientation"] = to_string(est.orientation);
      tj["margin"] = est.margin;
      tj["curve"] = est.curve;
      out << "critical coupling " << csv::number(est.coupling_at_extremum) << " (PC1 minimum, orientation "
          << to_string(est.orientation) << ", margin " << csv::number(est.margin) << ")\n";
    } catch (const NoInteriorExtremumError &e) {
      tj["detected"] = false;
      tj["message"] = e.what();
      err << e.what() << "\n";
      code = kSignatureAbsent;
    }
    csv::write_atomic(dir / "transition.json", tj.dump(2) + "\n");
    return code;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

struct EdRequest {
  Model model = Model::tfim;
  int n_sites = 8;
  double fixed_coupling = 1.0;  // J (tfim) or J1 (j1j2)
  double coupling = 0.0;        // h (tfim) or J2/J1 (j1j2)
  Boundary boundary = Boundary::periodic;
  std::string dump_state;  // optional CSV path for the ground-state vector
};

inline int cmd_ed(const EdRequest &req, std::ostream &out, std::ostream &err) {
  try {
    if (req.n_sites > kMaxSites) {
      throw CapacityError("ed: " + std::to_string(req.n_sites) + " sites exceeds the limit of " +
                          std::to_string(kMaxSites));
    }
    const auto op = req.model == Model::tfim
                        ? build_tfim(req.n_sites, req.fixed_coupling, req.coupling, req.boundary)
                        : build_j1j2(req.n_sites, req.fixed_coupling, req.coupling * req.fixed_coupling,
                                     req.boundary);
    const auto sol = exact_ground_state(op);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", sol.energy);
    out << buf << "\n";
    err << "degeneracy " << sol.degeneracy() << ", residual " << sol.residual << "\n";
    if (!req.dump_state.empty()) {
      csv::Table t;
      t.header = {"index", "amplitude"};
      for (Eigen::Index i = 0; i < sol.amplitudes.size(); ++i) {
        t.rows.push_back({std::to_string(i), csv::number(sol.amplitudes(i))});
      }
      csv::write_atomic(req.dump_state, t.render());
    }
    return kSuccess;
  } catch (const InvalidSystemError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace nqs::cli

#endif  // NQS_COMMANDS_HPP
