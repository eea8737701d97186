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

#ifndef NQS_RBM_HPP
#define NQS_RBM_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "nqs/error.hpp"
#include "nqs/random.hpp"
#include "nqs/spin_systems.hpp"

namespace nqs {

using cplx = std::complex<double>;

enum class Field { real, complex };

inline std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

inline Field parse_field(const std::string &s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ParameterError("unknown field '" + s + "' (expected real|complex)");
}

template <class T>
inline constexpr bool is_complex_v = std::is_same_v<T, cplx>;

template <class T>
inline constexpr Field field_of_v = is_complex_v<T> ? Field::complex : Field::real;

/// Restricted Boltzmann machine without visible bias:
///   log psi(x) = sum_i logcosh(W_i . x + b_i),  x in {+1, -1}^N.
/// T is double (real weights) or std::complex<double>.
template <class T>
struct RbmParameters {
  static_assert(std::is_same_v<T, double> || std::is_same_v<T, cplx>);
  using Scalar = T;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  static constexpr Field field = field_of_v<T>;

  Matrix weights;      // n_hidden x n_visible
  Vector hidden_bias;  // n_hidden

  RbmParameters() = default;
  RbmParameters(int n_visible, int n_hidden)
      : weights(Matrix::Zero(n_hidden, n_visible)), hidden_bias(Vector::Zero(n_hidden)) {}

  int n_visible() const noexcept { return static_cast<int>(weights.cols()); }
  int n_hidden() const noexcept { return static_cast<int>(weights.rows()); }
  Eigen::Index parameter_count() const noexcept { return weights.size() + hidden_bias.size(); }

  bool all_finite() const { return weights.allFinite() && hidden_bias.allFinite(); }

  /// Row-major W (hidden outer, visible inner), then b.
  Vector to_vector() const {
    Vector v(parameter_count());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
      for (Eigen::Index j = 0; j < weights.cols(); ++j) v(k++) = weights(i, j);
    for (Eigen::Index i = 0; i < hidden_bias.size(); ++i) v(k++) = hidden_bias(i);
    return v;
  }

  void assign(const Vector &v) {
    if (v.size() != parameter_count()) throw DimensionError("RbmParameters: vector length mismatch");
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
      for (Eigen::Index j = 0; j < weights.cols(); ++j) weights(i, j) = v(k++);
    for (Eigen::Index i = 0; i < hidden_bias.size(); ++i) hidden_bias(i) = v(k++);
  }

  friend bool operator==(const RbmParameters &a, const RbmParameters &b) {
    return a.weights == b.weights && a.hidden_bias == b.hidden_bias;
  }
};

/// I.i.d. Gaussian entries (mean 0, given stddev per real component). Draw
/// order: W row-major then b; complex entries draw real then imaginary part.
template <class T>
RbmParameters<T> init_random(int n_visible, int alpha, std::uint64_t seed, double stddev = 0.01) {
  if (n_visible < 1) throw ParameterError("init_random: n_visible must be >= 1");
  if (alpha < 1) throw ParameterError("init_random: alpha must be >= 1");
  RbmParameters<T> p(n_visible, alpha * n_visible);
  NormalSampler rng(seed);
  auto draw = [&]() -> T {
    if constexpr (is_complex_v<T>) {
      const double re = stddev * rng();
      const double im = stddev * rng();
      return {re, im};
    } else {
      return stddev * rng();
    }
  };
  for (Eigen::Index i = 0; i < p.weights.rows(); ++i)
    for (Eigen::Index j = 0; j < p.weights.cols(); ++j) p.weights(i, j) = draw();
  for (Eigen::Index i = 0; i < p.hidden_bias.size(); ++i) p.hidden_bias(i) = draw();
  return p;
}

/// logcosh(z) and tanh(z) sharing one exponential. Uses the reflected
/// argument z' = z * sign(Re z) so that exp(-2 z') never overflows:
///   logcosh(z) = z' + log(1 + exp(-2 z')) - ln 2.
template <class T>
inline void logcosh_tanh(T z, T &logcosh, T &tanh) {
  if constexpr (is_complex_v<T>) {
    const bool flip = z.real() < 0.0;
    const cplx zp = flip ? -z : z;
    const cplx e = std::exp(-2.0 * zp);
    logcosh = zp + std::log(1.0 + e) - std::numbers::ln2;
    const cplx t = (1.0 - e) / (1.0 + e);
    tanh = flip ? -t : t;
  } else {
    const double a = std::abs(z);
    logcosh = a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
    tanh = std::tanh(z);
  }
}

template <class T>
inline T logcosh(T z) {
  T lc, th;
  logcosh_tanh(z, lc, th);
  return lc;
}

namespace detail {

template <class T>
bool is_finite(T v) {
  if constexpr (is_complex_v<T>) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return std::isfinite(v);
  }
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> pre_activation(const RbmParameters<T> &params,
                                                   const SpinConfiguration &config) {
  if (config.n_sites() != params.n_visible()) {
    throw DimensionError("RBM: configuration has " + std::to_string(config.n_sites()) +
                         " sites, expected " + std::to_string(params.n_visible()));
  }
  const Eigen::VectorXd x = config.spins();
  return params.weights * x.cast<T>() + params.hidden_bias;
}

}  // namespace detail

template <class T>
T log_psi(const RbmParameters<T> &params, const SpinConfiguration &config) {
  const auto z = detail::pre_activation(params, config);
  T sum{0.0};
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += logcosh(z(i));
  if (!detail::is_finite(sum)) throw NumericOverflowError("log_psi: non-finite log-amplitude");
  return sum;
}

/// d log psi / d W_ij = tanh(z_i) x_j,  d log psi / d b_i = tanh(z_i).
/// For complex parameters these are holomorphic derivatives.
template <class T>
RbmParameters<T> grad_log_psi(const RbmParameters<T> &params, const SpinConfiguration &config) {
  const auto z = detail::pre_activation(params, config);
  const Eigen::VectorXd x = config.spins();
  RbmParameters<T> g(params.n_visible(), params.n_hidden());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    T lc, th;
    logcosh_tanh(z(i), lc, th);
    g.hidden_bias(i) = th;
    g.weights.row(i) = th * x.transpose().cast<T>();
  }
  if (!g.all_finite()) throw NumericOverflowError("grad_log_psi: non-finite derivative");
  return g;
}

/// Log-amplitudes and hidden-unit derivatives over the whole basis.
template <class T>
struct BasisEvaluation {
  Eigen::Matrix<T, Eigen::Dynamic, 1> log_psi;                // dim
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> tanh_pre;  // dim x n_hidden
};

/// `spins` is HilbertBasis::spin_matrix() cast to T.
template <class T>
BasisEvaluation<T> evaluate_basis(const RbmParameters<T> &params,
                                  const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> &spins,
                                  bool with_tanh) {
  if (spins.cols() != params.n_visible()) throw DimensionError("evaluate_basis: site count mismatch");
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix z = spins * params.weights.transpose();
  z.rowwise() += params.hidden_bias.transpose();
  BasisEvaluation<T> out;
  out.log_psi.setZero(z.rows());
  if (with_tanh) out.tanh_pre.resize(z.rows(), z.cols());
  // column-major: walk hidden units outermost
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    for (Eigen::Index x = 0; x < z.rows(); ++x) {
      T lc, th;
      logcosh_tanh(z(x, i), lc, th);
      out.log_psi(x) += lc;
      if (with_tanh) out.tanh_pre(x, i) = th;
    }
  }
  if (!out.log_psi.allFinite()) throw NumericOverflowError("RBM: non-finite log-amplitude");
  return out;
}

/// Amplitudes exp(log psi(x) - c) with c = max_x Re log psi(x).
template <class T>
struct PsiVector {
  Eigen::Matrix<T, Eigen::Dynamic, 1> amplitudes;
  double log_shift = 0.0;
};

template <class T>
PsiVector<T> psi_from_log(const Eigen::Matrix<T, Eigen::Dynamic, 1> &log_psi) {
  PsiVector<T> out;
  out.log_shift = log_psi.real().maxCoeff();
  out.amplitudes = (log_psi.array() - T(out.log_shift)).exp().matrix();
  return out;
}

template <class T>
PsiVector<T> psi_vector(const RbmParameters<T> &params, const HilbertBasis &basis) {
  const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> spins = basis.spin_matrix().cast<T>();
  return psi_from_log<T>(evaluate_basis(params, spins, false).log_psi);
}

/// Shape of a flattened weight vector. Complex parameters contribute their
/// real parts only.
struct FlatLayout {
  int n_visible = 0;
  int n_hidden = 0;
  Field field = Field::real;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_hidden) * static_cast<std::size_t>(n_visible + 1);
  }

  /// W_i_j (hidden i, visible j) followed by b_i.
  std::vector<std::string> column_names() const {
    std::vector<std::string> names;
    names.reserve(size());
    for (int i = 0; i < n_hidden; ++i)
      for (int j = 0; j < n_visible; ++j)
        names.push_back("W_" + std::to_string(i) + "_" + std::to_string(j));
    for (int i = 0; i < n_hidden; ++i) names.push_back("b_" + std::to_string(i));
    return names;
  }

  friend bool operator==(const FlatLayout &, const FlatLayout &) = default;
};

struct FlatWeightVector {
  std::vector<double> values;
  FlatLayout layout;
};

template <class T>
FlatWeightVector flatten(const RbmParameters<T> &params) {
  FlatWeightVector out;
  out.layout = {params.n_visible(), params.n_hidden(), RbmParameters<T>::field};
  const auto v = params.to_vector();
  out.values.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) out.values[static_cast<std::size_t>(k)] = std::real(v(k));
  return out;
}

/// Inverse of flatten. For complex T the imaginary parts are zero.
template <class T>
RbmParameters<T> unflatten(const FlatWeightVector &flat) {
  if (flat.values.size() != flat.layout.size()) {
    throw DimensionError("unflatten: " + std::to_string(flat.values.size()) +
                         " values for a layout of size " + std::to_string(flat.layout.size()));
  }
  RbmParameters<T> p(flat.layout.n_visible, flat.layout.n_hidden);
  typename RbmParameters<T>::Vector v(static_cast<Eigen::Index>(flat.values.size()));
  for (std::size_t k = 0; k < flat.values.size(); ++k) v(static_cast<Eigen::Index>(k)) = T(flat.values[k]);
  p.assign(v);
  return p;
}

}  // namespace nqs

#endif  // NQS_RBM_HPP
