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

#ifndef NQS_TRAINER_HPP
#define NQS_TRAINER_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nqs/error.hpp"
#include "nqs/ground_state.hpp"
#include "nqs/rbm.hpp"
#include "nqs/spin_systems.hpp"

namespace nqs {

enum class OptimizerKind { sgd, adam };

inline std::string to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

inline OptimizerKind parse_optimizer(const std::string &s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  throw ParameterError("unknown optimizer '" + s + "' (expected sgd|adam)");
}

struct TrainingConfig {
  double learning_rate = 0.01;
  int steps = 200;
  OptimizerKind optimizer = OptimizerKind::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw ParameterError("training: learning_rate must be positive");
    }
    if (steps < 1) throw ParameterError("training: steps must be >= 1");
  }
};

enum class RunStatus { ok, failed, not_run };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::failed: return "failed";
    case RunStatus::not_run: return "not-run";
  }
  return "unknown";
}

template <class T>
struct TrainingRecord {
  double coupling = 0.0;
  std::vector<double> energy_history;  // steps + 1 entries, [0] before training
  RbmParameters<T> final_params;
  double exact_energy = 0.0;
  double energy_error = 0.0;
  double infidelity = 0.0;
  RunStatus status = RunStatus::not_run;
  int failed_step = -1;
  std::string message;

  bool ok() const noexcept { return status == RunStatus::ok; }
};

inline double energy_error(double e_nqs, double e_exact) { return std::abs(e_nqs - e_exact); }

/// 1 - ||P_gs psi||^2 / ||psi||^2 where P_gs projects onto the ground space.
template <class T>
double infidelity(const Eigen::Matrix<T, Eigen::Dynamic, 1> &psi, const GroundStateSolution &exact) {
  if (psi.size() != exact.ground_space.rows()) throw DimensionError("infidelity: length mismatch");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw DegenerateStateError("infidelity: zero wavefunction");
  const Eigen::Matrix<T, Eigen::Dynamic, 1> overlaps = exact.ground_space.transpose().cast<T>() * psi;
  const double value = 1.0 - overlaps.squaredNorm() / norm2;
  return value < 0.0 ? 0.0 : value;
}

namespace detail {

/// Exact expectation values over the complete basis for one Hamiltonian;
/// caches the spin matrix so repeated evaluations stay cheap.
template <class T>
class FullBasisEvaluator {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  explicit FullBasisEvaluator(const HamiltonianOperator &op)
      : op_(&op), spins_(HilbertBasis(op.n_sites()).spin_matrix().cast<T>()) {}

  double energy(const RbmParameters<T> &params) { return evaluate(params, false).first; }

  std::pair<double, RbmParameters<T>> energy_and_gradient(const RbmParameters<T> &params) {
    return evaluate(params, true);
  }

  Vector psi(const RbmParameters<T> &params) const {
    check(params);
    return psi_from_log<T>(evaluate_basis(params, spins_, false).log_psi).amplitudes;
  }

 private:
  void check(const RbmParameters<T> &params) const {
    if (params.n_visible() != op_->n_sites()) {
      throw DimensionError("RBM has " + std::to_string(params.n_visible()) +
                           " visible units but the Hamiltonian has " +
                           std::to_string(op_->n_sites()) + " sites");
    }
  }

  std::pair<double, RbmParameters<T>> evaluate(const RbmParameters<T> &params, bool with_gradient) {
    check(params);
    const auto eval = evaluate_basis(params, spins_, with_gradient);
    const Vector psi = psi_from_log<T>(eval.log_psi).amplitudes;
    op_->apply_into(psi, hpsi_);

    const double z = psi.squaredNorm();
    if (!(z > 0.0) || !std::isfinite(z)) throw DegenerateStateError("variational state vanishes");
    const T numerator = psi.dot(hpsi_);  // conjugates psi
    const double energy = std::real(numerator) / z;
    const double residue = std::imag(numerator) / z;
    if (std::abs(residue) > 1e-12 * std::max(1.0, std::abs(energy))) {
      throw Error("variational energy has imaginary residue " + std::to_string(residue));
    }
    if (!std::isfinite(energy)) throw NumericOverflowError("variational energy is not finite");

    RbmParameters<T> grad;
    if (!with_gradient) return {energy, std::move(grad)};

    // a(x) = p(x) (E_loc(x) - E) = [conj(psi) H psi - E |psi|^2](x) / Z
    Vector a(psi.size());
    const double cutoff = 1e-300;
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
      const double w = std::norm(psi(x));
      a(x) = w < cutoff ? T(0.0) : (detail_conj(psi(x)) * hpsi_(x) - energy * w) / z;
    }
    grad = RbmParameters<T>(params.n_visible(), params.n_hidden());
    // sum_x conj(O_k(x)) a(x)
    grad.hidden_bias.noalias() = eval.tanh_pre.adjoint() * a;
    grad.weights.noalias() = eval.tanh_pre.adjoint() * (a.asDiagonal() * spins_);
    if constexpr (!is_complex_v<T>) {
      grad.hidden_bias *= 2.0;
      grad.weights *= 2.0;
    }
    if (!grad.all_finite()) throw NumericOverflowError("energy gradient is not finite");
    return {energy, std::move(grad)};
  }

  static T detail_conj(T v) {
    if constexpr (is_complex_v<T>) {
      return std::conj(v);
    } else {
      return v;
    }
  }

  const HamiltonianOperator *op_;
  Matrix spins_;
  Vector hpsi_;
};

}  // namespace detail

/// Re <psi|H|psi> / <psi|psi> summed exactly over the basis.
template <class T>
double variational_energy(const RbmParameters<T> &params, const HamiltonianOperator &op) {
  return detail::FullBasisEvaluator<T>(op).energy(params);
}

/// Real parameters: dE/dtheta. Complex parameters: dE/dconj(theta), so that
/// dE/dRe(theta) = 2 Re g and dE/dIm(theta) = 2 Im g.
template <class T>
RbmParameters<T> energy_gradient(const RbmParameters<T> &params, const HamiltonianOperator &op) {
  return detail::FullBasisEvaluator<T>(op).energy_and_gradient(params).second;
}

/// Parameter update rule. The gradient passed in is the one returned by
/// energy_gradient, i.e. the descent direction is -grad for both fields.
template <class T>
class Optimizer {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  virtual ~Optimizer() = default;
  virtual void update(Vector &params, const Vector &grad) = 0;
};

template <class T>
class Sgd : public Optimizer<T> {
 public:
  using typename Optimizer<T>::Vector;
  explicit Sgd(double learning_rate) : lr_(learning_rate) {}
  void update(Vector &params, const Vector &grad) override { params -= lr_ * grad; }

 private:
  double lr_;
};

/// Adam; for complex parameters the second moment tracks |g|^2.
template <class T>
class Adam : public Optimizer<T> {
 public:
  using typename Optimizer<T>::Vector;
  Adam(double learning_rate, double beta1, double beta2, double epsilon)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

  void update(Vector &params, const Vector &grad) override {
    if (m_.size() != grad.size()) {
      m_ = Vector::Zero(grad.size());
      v_ = Eigen::VectorXd::Zero(grad.size());
      t_ = 0;
    }
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    for (Eigen::Index k = 0; k < params.size(); ++k) {
      params(k) -= lr_ * (m_(k) / c1) / (std::sqrt(v_(k) / c2) + eps_);
    }
  }

 private:
  double lr_, beta1_, beta2_, eps_;
  Vector m_;
  Eigen::VectorXd v_;
  int t_ = 0;
};

template <class T>
std::unique_ptr<Optimizer<T>> make_optimizer(const TrainingConfig &cfg) {
  if (cfg.optimizer == OptimizerKind::sgd) return std::make_unique<Sgd<T>>(cfg.learning_rate);
  return std::make_unique<Adam<T>>(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
}

/// Runs cfg.steps optimizer updates from `params`. A numeric overflow stops
/// the run; the record is then marked failed with the offending step and
/// keeps the last finite parameters.
template <class T>
TrainingRecord<T> train(RbmParameters<T> params, const HamiltonianOperator &op,
                        const TrainingConfig &cfg, const GroundStateSolution &exact,
                        double coupling = 0.0) {
  cfg.validate();
  if (static_cast<std::size_t>(exact.amplitudes.size()) != op.dimension()) {
    throw DimensionError("train: exact solution does not match the Hamiltonian");
  }
  TrainingRecord<T> record;
  record.coupling = coupling;
  record.exact_energy = exact.energy;
  record.energy_history.reserve(static_cast<std::size_t>(cfg.steps) + 1);

  detail::FullBasisEvaluator<T> evaluator(op);
  auto optimizer = make_optimizer<T>(cfg);
  int step = 0;
  try {
    for (step = 0;; ++step) {
      if (step == cfg.steps) {
        record.energy_history.push_back(evaluator.energy(params));
        break;
      }
      auto [energy, grad] = evaluator.energy_and_gradient(params);
      record.energy_history.push_back(energy);
      auto theta = params.to_vector();
      optimizer->update(theta, grad.to_vector());
      RbmParameters<T> next = params;
      next.assign(theta);
      if (!next.all_finite()) throw NumericOverflowError("parameters diverged");
      params = std::move(next);
    }
    record.final_params = params;
    record.energy_error = energy_error(record.energy_history.back(), exact.energy);
    record.infidelity = infidelity(evaluator.psi(params), exact);
    record.status = RunStatus::ok;
  } catch (const NumericOverflowError &e) {
    record.final_params = params;
    record.status = RunStatus::failed;
    record.failed_step = step;
    record.message = e.what();
  } catch (const DegenerateStateError &e) {
    record.final_params = params;
    record.status = RunStatus::failed;
    record.failed_step = step;
    record.message = e.what();
  }
  return record;
}

}  // namespace nqs

#endif  // NQS_TRAINER_HPP
