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

#ifndef NQS_ANALYSIS_HPP
#define NQS_ANALYSIS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nqs/error.hpp"

namespace nqs {

/// Mean-centered principal components of a (grid x P) weight matrix.
/// Each direction is oriented so that the first row projects onto it with a
/// nonnegative score (the second row decides when the first is zero).
struct PcaResult {
  Eigen::VectorXd mean;                // P
  Eigen::MatrixXd components;          // k x P, orthonormal rows
  Eigen::VectorXd explained_variance;  // k, descending
  Eigen::MatrixXd projections;         // grid x k
  Eigen::VectorXd all_variances;       // every singular direction, descending

  int k() const noexcept { return static_cast<int>(components.rows()); }
};

inline PcaResult pca(const Eigen::MatrixXd &weights, int k) {
  const Eigen::Index n = weights.rows();
  const Eigen::Index p = weights.cols();
  if (n < 2) throw ParameterError("pca: need at least two rows");
  const Eigen::Index k_max = std::min<Eigen::Index>(n - 1, p);
  if (k < 1 || k > k_max) {
    throw ParameterError("pca: component count " + std::to_string(k) + " outside [1, " +
                         std::to_string(k_max) + "]");
  }
  if (!weights.allFinite()) throw InputError("pca: weight matrix contains non-finite values");

  PcaResult out;
  out.mean = weights.colwise().mean().transpose();
  const Eigen::MatrixXd centered = weights.rowwise() - out.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  out.all_variances = s.array().square() / static_cast<double>(n - 1);
  out.components = svd.matrixV().leftCols(k).transpose();
  out.explained_variance = out.all_variances.head(k);
  out.projections = centered * out.components.transpose();

  for (Eigen::Index j = 0; j < k; ++j) {
    const double scale = out.projections.col(j).cwiseAbs().maxCoeff();
    const double tie = 1e-12 * scale;
    double anchor = out.projections(0, j);
    if (std::abs(anchor) <= tie) anchor = out.projections(1, j);
    if (anchor < -tie) {
      out.components.row(j) *= -1.0;
      out.projections.col(j) *= -1.0;
    }
  }
  return out;
}

enum class Orientation { as_is, negated };

inline std::string to_string(Orientation o) { return o == Orientation::as_is ? "as-is" : "negated"; }

struct TransitionEstimate {
  double coupling_at_extremum = 0.0;
  std::size_t grid_index = 0;
  int component_index = 1;  // 1-based
  std::string extremum_kind = "minimum";
  Orientation orientation = Orientation::as_is;
  std::vector<double> curve;  // raw projections onto the component
  double margin = 0.0;
};

namespace detail {

// Gap between the minimum at `at` and the lowest other local minimum of c
// (or the curve's range when `at` is the only one).
inline double minimum_margin(const std::vector<double> &c, std::size_t at) {
  const std::size_t n = c.size();
  double next = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == at) continue;
    const bool left_ok = i == 0 || c[i] <= c[i - 1];
    const bool right_ok = i + 1 == n || c[i] <= c[i + 1];
    if (left_ok && right_ok) next = std::min(next, c[i]);
  }
  if (!std::isfinite(next)) next = *std::max_element(c.begin(), c.end());
  return next - c[at];
}

}  // namespace detail

/// Global minimum of the chosen projection curve, required to sit at an
/// interior grid point. When the minimum is at an endpoint the negated curve
/// is tried (the signature then shows as an interior maximum).
inline TransitionEstimate detect_transition(const PcaResult &result, std::span<const double> couplings,
                                            int component_index = 1) {
  if (component_index < 1 || component_index > result.k()) {
    throw ParameterError("detect_transition: component_index " + std::to_string(component_index) +
                         " outside [1, " + std::to_string(result.k()) + "]");
  }
  const auto n = static_cast<std::size_t>(result.projections.rows());
  if (couplings.size() != n) throw DimensionError("detect_transition: couplings do not match the PCA rows");

  TransitionEstimate est;
  est.component_index = component_index;
  est.curve.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    est.curve[i] = result.projections(static_cast<Eigen::Index>(i), component_index - 1);
  }
  if (n < 3) throw NoInteriorExtremumError("no interior extremum: grid has no interior points");

  for (const auto orientation : {Orientation::as_is, Orientation::negated}) {
    std::vector<double> c = est.curve;
    if (orientation == Orientation::negated) {
      for (auto &v : c) v = -v;
    }
    const auto at = static_cast<std::size_t>(std::min_element(c.begin(), c.end()) - c.begin());
    if (at == 0 || at + 1 == n) continue;
    est.grid_index = at;
    est.coupling_at_extremum = couplings[at];
    est.orientation = orientation;
    est.margin = detail::minimum_margin(c, at);
    return est;
  }
  throw NoInteriorExtremumError("no interior extremum: PC" + std::to_string(component_index) +
                                " attains both its minimum and maximum at grid endpoints");
}

/// Coupling followed by PC1..PCk per grid point, for external plotting.
struct ProjectionTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline ProjectionTable export_projection_tracks(const PcaResult &result, std::span<const double> couplings) {
  if (couplings.size() != static_cast<std::size_t>(result.projections.rows())) {
    throw DimensionError("export_projection_tracks: couplings do not match the PCA rows");
  }
  ProjectionTable table;
  table.header.push_back("coupling");
  for (int j = 1; j <= result.k(); ++j) table.header.push_back("pc" + std::to_string(j));
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    std::vector<double> row{couplings[i]};
    for (int j = 0; j < result.k(); ++j) row.push_back(result.projections(static_cast<Eigen::Index>(i), j));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace nqs

#endif  // NQS_ANALYSIS_HPP
