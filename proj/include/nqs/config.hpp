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

#ifndef NQS_CONFIG_HPP
#define NQS_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"
#include "nqs/error.hpp"
#include "nqs/rbm.hpp"
#include "nqs/spin_systems.hpp"
#include "nqs/sweep.hpp"
#include "nqs/trainer.hpp"

namespace nqs {

struct GridRange {
  double min = 0.0;
  double max = 3.0;
  double step = 0.025;
};

/// Parses "MIN:MAX:STEP".
inline GridRange parse_grid(const std::string &text) {
  GridRange g;
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos) throw ParameterError("grid '" + text + "' is not MIN:MAX:STEP");
  try {
    std::size_t used = 0;
    auto number = [&](const std::string &s) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    g.min = number(text.substr(0, a));
    g.max = number(text.substr(a + 1, b - a - 1));
    g.step = number(text.substr(b + 1));
  } catch (const std::exception &) {
    throw ParameterError("grid '" + text + "' is not MIN:MAX:STEP");
  }
  return g;
}

/// Fully resolved settings of one sweep run. Defaults follow the reference
/// hyperparameters per model.
struct RunConfig {
  Model model = Model::tfim;
  int n_sites = 8;
  double fixed_coupling = -1.0;  // J (tfim) or J1 (j1j2)
  Boundary boundary = Boundary::periodic;
  GridRange grid;
  int alpha = 1;
  Field field = Field::real;
  TrainingConfig training;
  Strategy strategy = Strategy::adiabatic_forward;
  std::uint64_t seed = 0;
  double init_stddev = 0.01;
  std::string out = "nqs-run";

  static RunConfig defaults(Model model) {
    RunConfig c;
    c.model = model;
    if (model == Model::j1j2) {
      c.n_sites = 12;
      c.fixed_coupling = 1.0;
      c.grid = {0.0, 1.0, 0.01};
      c.alpha = 2;
      c.field = Field::complex;
    }
    return c;
  }

  SweepGrid sweep_grid() const {
    return SweepGrid::uniform(model, n_sites, grid.min, grid.max, grid.step, fixed_coupling, boundary);
  }

  void validate() const {
    if (n_sites < (model == Model::tfim ? 2 : 4)) throw ParameterError("n_sites too small for the model");
    if (n_sites > kMaxSites) throw ParameterError("n_sites above the full-basis limit");
    if (alpha < 1) throw ParameterError("alpha must be >= 1");
    if (!(init_stddev >= 0.0)) throw ParameterError("init_stddev must be nonnegative");
    training.validate();
    sweep_grid();
  }

  nlohmann::json to_json() const {
    return {{"model", to_string(model)},
            {"n_sites", n_sites},
            {"fixed_coupling", fixed_coupling},
            {"boundary", to_string(boundary)},
            {"grid", {{"min", grid.min}, {"max", grid.max}, {"step", grid.step}}},
            {"alpha", alpha},
            {"field", to_string(field)},
            {"training",
             {{"optimizer", to_string(training.optimizer)},
              {"learning_rate", training.learning_rate},
              {"steps", training.steps},
              {"beta1", training.beta1},
              {"beta2", training.beta2},
              {"epsilon", training.epsilon}}},
            {"strategy", to_string(strategy)},
            {"seed", seed},
            {"init_stddev", init_stddev},
            {"out", out}};
  }

  /// Starts from the model defaults and applies every key present. A sweep
  /// manifest is accepted too: its embedded "config" object is used.
  static RunConfig from_json(const nlohmann::json &doc) {
    const nlohmann::json &j = doc.contains("config") && doc["config"].is_object() ? doc["config"] : doc;
    if (!j.is_object()) throw ParameterError("config: top level must be an object");
    static const std::set<std::string> known = {"model", "n_sites", "fixed_coupling", "boundary", "grid",
                                                "alpha", "field", "training", "strategy", "seed",
                                                "init_stddev", "out"};
    for (const auto &[key, _] : j.items()) {
      if (!known.count(key)) throw ParameterError("config: unknown key '" + key + "'");
    }
    try {
      RunConfig c = defaults(j.contains("model") ? parse_model(j["model"].get<std::string>()) : Model::tfim);
      if (j.contains("n_sites")) c.n_sites = j["n_sites"].get<int>();
      if (j.contains("fixed_coupling")) c.fixed_coupling = j["fixed_coupling"].get<double>();
      if (j.contains("boundary")) c.boundary = parse_boundary(j["boundary"].get<std::string>());
      if (j.contains("grid")) {
        const auto &g = j["grid"];
        if (g.is_string()) {
          c.grid = parse_grid(g.get<std::string>());
        } else {
          if (g.contains("min")) c.grid.min = g["min"].get<double>();
          if (g.contains("max")) c.grid.max = g["max"].get<double>();
          if (g.contains("step")) c.grid.step = g["step"].get<double>();
        }
      }
      if (j.contains("alpha")) c.alpha = j["alpha"].get<int>();
      if (j.contains("field")) c.field = parse_field(j["field"].get<std::string>());
      if (j.contains("training")) {
        const auto &t = j["training"];
        if (t.contains("optimizer")) c.training.optimizer = parse_optimizer(t["optimizer"].get<std::string>());
        if (t.contains("learning_rate")) c.training.learning_rate = t["learning_rate"].get<double>();
        if (t.contains("steps")) c.training.steps = t["steps"].get<int>();
        if (t.contains("beta1")) c.training.beta1 = t["beta1"].get<double>();
        if (t.contains("beta2")) c.training.beta2 = t["beta2"].get<double>();
        if (t.contains("epsilon")) c.training.epsilon = t["epsilon"].get<double>();
      }
      if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("init_stddev")) c.init_stddev = j["init_stddev"].get<double>();
      if (j.contains("out")) c.out = j["out"].get<std::string>();
      return c;
    } catch (const nlohmann::json::exception &e) {
      throw ParameterError(std::string("config: ") + e.what());
    }
  }

  static RunConfig load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error &e) {
      throw ParameterError("config: " + path + ": " + e.what());
    }
  }
};

}  // namespace nqs

#endif  // NQS_CONFIG_HPP
