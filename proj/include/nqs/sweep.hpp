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

#ifndef NQS_SWEEP_HPP
#define NQS_SWEEP_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nqs/error.hpp"
#include "nqs/ground_state.hpp"
#include "nqs/manifest.hpp"
#include "nqs/rbm.hpp"
#include "nqs/spin_systems.hpp"
#include "nqs/trainer.hpp"

namespace nqs {

enum class Model { tfim, j1j2 };
enum class Strategy { independent, adiabatic_forward, adiabatic_backward };
enum class ChainStart { forward, backward };

inline std::string to_string(Model m) { return m == Model::tfim ? "tfim" : "j1j2"; }

inline Model parse_model(const std::string &s) {
  if (s == "tfim") return Model::tfim;
  if (s == "j1j2") return Model::j1j2;
  throw ParameterError("unknown model '" + s + "' (expected tfim|j1j2)");
}

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::independent: return "independent";
    case Strategy::adiabatic_forward: return "adiabatic-forward";
    case Strategy::adiabatic_backward: return "adiabatic-backward";
  }
  return "unknown";
}

inline Strategy parse_strategy(const std::string &s) {
  if (s == "independent") return Strategy::independent;
  if (s == "adiabatic-forward") return Strategy::adiabatic_forward;
  if (s == "adiabatic-backward") return Strategy::adiabatic_backward;
  throw ParameterError("unknown strategy '" + s +
                       "' (expected independent|adiabatic-forward|adiabatic-backward)");
}

/// Control-parameter grid of one phase diagram. The swept coupling is h for
/// the TFIM (fixed coupling J) and J2/J1 for the J1-J2 chain (fixed J1).
struct SweepGrid {
  Model model = Model::tfim;
  int n_sites = 8;
  std::vector<double> couplings;
  double fixed_coupling = -1.0;
  Boundary boundary = Boundary::periodic;

  /// Points min + k * step, k = 0 .. (max - min) / step.
  static SweepGrid uniform(Model model, int n_sites, double min, double max, double step,
                           double fixed_coupling, Boundary boundary = Boundary::periodic) {
    if (!std::isfinite(min) || !std::isfinite(max) || max < min) {
      throw ParameterError("grid: need finite min <= max");
    }
    SweepGrid g{model, n_sites, {}, fixed_coupling, boundary};
    if (max == min) {
      g.couplings = {min};
      return g;
    }
    if (!(step > 0.0)) throw ParameterError("grid: step must be positive");
    const double intervals = (max - min) / step;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-9 * std::max(1.0, rounded)) {
      throw ParameterError("grid: range is not a whole number of steps");
    }
    const auto n = static_cast<std::size_t>(rounded) + 1;
    for (std::size_t k = 0; k < n; ++k) g.couplings.push_back(min + static_cast<double>(k) * step);
    g.validate();
    return g;
  }

  std::size_t size() const noexcept { return couplings.size(); }

  void validate() const {
    if (couplings.empty()) throw ParameterError("grid: no couplings");
    if (couplings.size() < 2) return;
    const double step = couplings[1] - couplings[0];
    if (!(step > 0.0)) throw ParameterError("grid: couplings must be strictly increasing");
    for (std::size_t k = 1; k < couplings.size(); ++k) {
      const double d = couplings[k] - couplings[k - 1];
      if (!(d > 0.0) || std::abs(d - step) > 1e-12) {
        throw ParameterError("grid: couplings must be strictly increasing with a uniform step");
      }
    }
  }

  HamiltonianOperator hamiltonian(std::size_t k) const {
    const double c = couplings.at(k);
    if (model == Model::tfim) return build_tfim(n_sites, fixed_coupling, c, boundary);
    return build_j1j2(n_sites, fixed_coupling, c * fixed_coupling, boundary);
  }
};

struct SweepProgress {
  std::size_t index;      // grid index just finished
  std::size_t completed;  // points finished so far
  std::size_t total;
  double coupling;
  RunStatus status;
  double initial_energy_error;
  double final_energy_error;
};

struct SweepOptions {
  unsigned threads = 1;
  double init_stddev = 0.01;
  const std::vector<GroundStateSolution> *exact = nullptr;  // precomputed per grid point
  std::function<void(const SweepProgress &)> progress;
};

template <class T>
struct SweepResult {
  SweepGrid grid;
  Strategy strategy = Strategy::independent;
  TrainingConfig config;
  int alpha = 1;
  std::uint64_t base_seed = 0;
  std::vector<TrainingRecord<T>> records;
  Eigen::MatrixXd flat_weights;         // grid x P; NaN rows for records that are not ok
  std::vector<std::size_t> chain_order;  // grid indices in training order
  nlohmann::json manifest;
};

namespace detail {

// Runs body(k) for k in [0, n), spreading work over `threads` workers.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline nlohmann::json training_json(const TrainingConfig &cfg) {
  nlohmann::json j = {{"learning_rate", cfg.learning_rate},
                      {"steps", cfg.steps},
                      {"optimizer", to_string(cfg.optimizer)},
                      {"seed", cfg.seed}};
  if (cfg.optimizer == OptimizerKind::adam) {
    j["beta1"] = cfg.beta1;
    j["beta2"] = cfg.beta2;
    j["epsilon"] = cfg.epsilon;
  }
  return j;
}

inline nlohmann::json sweep_inputs(const SweepGrid &grid, Strategy strategy, const TrainingConfig &cfg,
                                   int alpha, Field field, std::uint64_t base_seed, double init_stddev) {
  return {{"model", to_string(grid.model)},
          {"n_sites", grid.n_sites},
          {"fixed_coupling", grid.fixed_coupling},
          {"boundary", to_string(grid.boundary)},
          {"couplings", grid.couplings},
          {"strategy", to_string(strategy)},
          {"alpha", alpha},
          {"field", to_string(field)},
          {"init_stddev", init_stddev},
          {"base_seed", base_seed},
          {"training", training_json(cfg)}};
}

template <class T>
void finalize(SweepResult<T> &result, const SweepOptions &options) {
  const auto n = result.grid.size();
  const FlatLayout layout{result.grid.n_sites, result.alpha * result.grid.n_sites, field_of_v<T>};
  result.flat_weights.setConstant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(layout.size()),
                                  std::nan(""));
  for (std::size_t k = 0; k < n; ++k) {
    if (!result.records[k].ok()) continue;
    const auto flat = flatten(result.records[k].final_params);
    for (std::size_t c = 0; c < flat.values.size(); ++c) {
      result.flat_weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = flat.values[c];
    }
  }
  auto inputs = sweep_inputs(result.grid, result.strategy, result.config, result.alpha, field_of_v<T>,
                             result.base_seed, options.init_stddev);
  result.manifest = {{"inputs", inputs},
                     {"content_hash", content_hash(inputs)},
                     {"chain_order", result.chain_order}};
}

template <class T>
SweepProgress progress_of(const TrainingRecord<T> &r, std::size_t index, std::size_t done, std::size_t total) {
  const double nan = std::nan("");
  return {index,
          done,
          total,
          r.coupling,
          r.status,
          r.energy_history.empty() ? nan : energy_error(r.energy_history.front(), r.exact_energy),
          r.ok() ? r.energy_error : nan};
}

}  // namespace detail

/// Exact ground states for every grid point.
inline std::vector<GroundStateSolution> solve_grid(const SweepGrid &grid, unsigned threads = 1) {
  grid.validate();
  std::vector<GroundStateSolution> out(grid.size());
  detail::parallel_for(grid.size(), threads,
                       [&](std::size_t k) { out[k] = exact_ground_state(grid.hamiltonian(k)); });
  return out;
}

/// Random initialization per grid point (seed base_seed + k), trained
/// separately. Failed points are recorded and the sweep continues.
template <class T>
SweepResult<T> run_independent(const SweepGrid &grid, const TrainingConfig &cfg, int alpha,
                               std::uint64_t base_seed, const SweepOptions &options = {}) {
  grid.validate();
  cfg.validate();
  std::vector<GroundStateSolution> solved;
  const auto &exact = options.exact ? *options.exact : (solved = solve_grid(grid, options.threads));
  if (exact.size() != grid.size()) throw DimensionError("run_independent: exact table size mismatch");

  SweepResult<T> result;
  result.grid = grid;
  result.strategy = Strategy::independent;
  result.config = cfg;
  result.alpha = alpha;
  result.base_seed = base_seed;
  result.records.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) result.chain_order.push_back(k);

  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t k) {
    auto params = init_random<T>(grid.n_sites, alpha, base_seed + k, options.init_stddev);
    const auto op = grid.hamiltonian(k);
    result.records[k] = train(std::move(params), op, cfg, exact[k], grid.couplings[k]);
    const auto finished = ++done;
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(detail::progress_of(result.records[k], k, finished, grid.size()));
    }
  });
  detail::finalize(result, options);
  return result;
}

/// Adiabatic fine-tuning: the first chain point (grid minimum for forward,
/// maximum for backward) starts from init_random(base_seed); every later point
/// starts from its predecessor's trained parameters. A failed link stops the
/// chain and the remaining points are left not-run.
template <class T>
SweepResult<T> run_adiabatic(const SweepGrid &grid, const TrainingConfig &cfg, int alpha, ChainStart start,
                             std::uint64_t base_seed, const SweepOptions &options = {}) {
  grid.validate();
  cfg.validate();
  std::vector<GroundStateSolution> solved;
  const auto &exact = options.exact ? *options.exact : (solved = solve_grid(grid, options.threads));
  if (exact.size() != grid.size()) throw DimensionError("run_adiabatic: exact table size mismatch");

  SweepResult<T> result;
  result.grid = grid;
  result.strategy = start == ChainStart::forward ? Strategy::adiabatic_forward : Strategy::adiabatic_backward;
  result.config = cfg;
  result.alpha = alpha;
  result.base_seed = base_seed;
  result.records.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    result.chain_order.push_back(start == ChainStart::forward ? k : grid.size() - 1 - k);
    result.records[k].coupling = grid.couplings[k];
    result.records[k].exact_energy = exact[k].energy;
  }

  auto params = init_random<T>(grid.n_sites, alpha, base_seed, options.init_stddev);
  bool broken = false;
  std::size_t done = 0;
  for (const std::size_t k : result.chain_order) {
    if (broken) {
      result.records[k].status = RunStatus::not_run;
      result.records[k].message = "chain aborted upstream";
      continue;
    }
    const auto op = grid.hamiltonian(k);
    result.records[k] = train(params, op, cfg, exact[k], grid.couplings[k]);
    if (result.records[k].ok()) {
      params = result.records[k].final_params;
    } else {
      broken = true;
    }
    ++done;
    if (options.progress) options.progress(detail::progress_of(result.records[k], k, done, grid.size()));
  }
  detail::finalize(result, options);
  return result;
}

/// Row k = flatten(records[k].final_params), in grid order.
template <class T>
Eigen::MatrixXd collect_flat_weights(const SweepResult<T> &result) {
  std::string missing;
  for (const auto &r : result.records) {
    if (r.ok()) continue;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.17g", missing.empty() ? "" : ", ", r.coupling);
    missing += buf;
  }
  if (!missing.empty()) {
    throw IncompleteSweepError("sweep incomplete; no trained weights at couplings: " + missing);
  }
  const FlatLayout layout{result.grid.n_sites, result.alpha * result.grid.n_sites, field_of_v<T>};
  Eigen::MatrixXd w(static_cast<Eigen::Index>(result.records.size()), static_cast<Eigen::Index>(layout.size()));
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const auto flat = flatten(result.records[k].final_params);
    for (std::size_t c = 0; c < flat.values.size(); ++c) {
      w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = flat.values[c];
    }
  }
  return w;
}

}  // namespace nqs

#endif  // NQS_SWEEP_HPP
