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

#ifndef NQS_GROUND_STATE_HPP
#define NQS_GROUND_STATE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nqs/error.hpp"
#include "nqs/random.hpp"
#include "nqs/spin_systems.hpp"

namespace nqs {

/// Lowest eigenpair of a Hamiltonian plus, when the ground level is
/// degenerate, an orthonormal basis of the whole ground space.
struct GroundStateSolution {
  double energy = 0.0;
  Eigen::VectorXd amplitudes;    // unit norm, largest-magnitude entry positive
  Eigen::MatrixXd ground_space;  // orthonormal columns; column 0 == amplitudes
  double residual = 0.0;         // max ||H v - E v|| over ground_space columns

  std::size_t degeneracy() const noexcept { return static_cast<std::size_t>(ground_space.cols()); }
};

struct LanczosOptions {
  int max_krylov = 150;
  int max_restarts = 40;
  double residual_tolerance = 1e-10;
  double degeneracy_tolerance = 1e-10;
  std::uint64_t seed = 0x6c616e637a6f73ULL;
};

namespace detail {

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
  double residual;
};

inline void project_out(Eigen::VectorXd &v, const Eigen::MatrixXd &basis) {
  if (basis.cols() == 0) return;
  // twice is enough (Kahan-Parlett)
  for (int pass = 0; pass < 2; ++pass) v.noalias() -= basis * (basis.transpose() * v);
}

/// Lanczos with full reorthogonalization for the lowest eigenpair of H
/// restricted to the orthogonal complement of `deflate`. Restarts from the
/// current Ritz vector until the true residual is below tolerance.
inline Eigenpair lanczos_lowest(const HamiltonianOperator &op, const Eigen::MatrixXd &deflate,
                                const LanczosOptions &opt, std::uint64_t stream) {
  const Eigen::Index dim = static_cast<Eigen::Index>(op.dimension());
  const Eigen::Index free_dim = dim - deflate.cols();
  const Eigen::Index krylov = std::min<Eigen::Index>(opt.max_krylov, free_dim);

  NormalSampler rng(opt.seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng();
  project_out(v, deflate);
  v.normalize();

  Eigen::MatrixXd basis(dim, krylov);
  Eigen::VectorXd w(dim);
  double last_residual = 0.0;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = v;
    Eigen::Index used = 0;
    double theta = 0.0;
    Eigen::VectorXd y;
    for (Eigen::Index j = 0; j < krylov; ++j) {
      Eigen::VectorXd vj = basis.col(j);
      op.apply_into(vj, w);
      alpha.push_back(vj.dot(w));
      w -= alpha.back() * vj;
      if (j > 0) w -= beta.back() * basis.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        w.noalias() -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      }
      project_out(w, deflate);
      const double b = w.norm();
      used = j + 1;

      const bool last = (j + 1 == krylov) || b < 1e-12;
      if (last || (j + 1) % 8 == 0) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
        for (Eigen::Index k = 0; k < used; ++k) {
          t(k, k) = alpha[k];
          if (k + 1 < used) t(k, k + 1) = t(k + 1, k) = beta[k];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
        theta = tri.eigenvalues()(0);
        y = tri.eigenvectors().col(0);
        const double estimate = b * std::abs(y(used - 1));
        if (last || estimate < 0.1 * opt.residual_tolerance) break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }

    Eigen::VectorXd ritz = basis.leftCols(used) * y;
    project_out(ritz, deflate);
    ritz.normalize();
    Eigen::VectorXd hr;
    op.apply_into(ritz, hr);
    theta = ritz.dot(hr);
    last_residual = (hr - theta * ritz).norm();
    if (last_residual <= opt.residual_tolerance) return {theta, std::move(ritz), last_residual};
    v = std::move(ritz);
  }
  throw SolverError("Lanczos did not converge", last_residual);
}

}  // namespace detail

/// Exact ground state by Lanczos. Degenerate partners (within the degeneracy
/// tolerance) are collected by repeated deflation.
inline GroundStateSolution exact_ground_state(const HamiltonianOperator &op,
                                              const LanczosOptions &opt = {}) {
  if (op.n_sites() > kMaxSites) {
    throw CapacityError("exact_ground_state: more than " + std::to_string(kMaxSites) + " sites");
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(op.dimension());
  std::vector<detail::Eigenpair> found;
  Eigen::MatrixXd deflate(dim, 0);
  double lowest = 0.0;
  while (deflate.cols() < dim) {
    auto pair = detail::lanczos_lowest(op, deflate, opt, found.size());
    if (!found.empty() && pair.value > lowest + opt.degeneracy_tolerance) break;
    lowest = found.empty() ? pair.value : std::min(lowest, pair.value);
    deflate.conservativeResize(Eigen::NoChange, deflate.cols() + 1);
    deflate.col(deflate.cols() - 1) = pair.vector;
    found.push_back(std::move(pair));
  }

  std::vector<const detail::Eigenpair *> ground;
  for (const auto &p : found) {
    if (p.value <= lowest + opt.degeneracy_tolerance) ground.push_back(&p);
  }
  std::stable_sort(ground.begin(), ground.end(),
                   [](auto *a, auto *b) { return a->value < b->value; });

  GroundStateSolution sol;
  sol.energy = ground.front()->value;
  sol.ground_space.resize(dim, static_cast<Eigen::Index>(ground.size()));
  for (std::size_t k = 0; k < ground.size(); ++k) {
    sol.ground_space.col(static_cast<Eigen::Index>(k)) = ground[k]->vector;
    sol.residual = std::max(sol.residual, ground[k]->residual);
  }
  Eigen::Index peak = 0;
  sol.ground_space.col(0).cwiseAbs().maxCoeff(&peak);
  if (sol.ground_space(peak, 0) < 0) sol.ground_space.col(0) *= -1.0;
  sol.amplitudes = sol.ground_space.col(0);
  return sol;
}

}  // namespace nqs

#endif  // NQS_GROUND_STATE_HPP
