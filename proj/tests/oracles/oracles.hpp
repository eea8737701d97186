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

// Test-only reference implementations. Nothing here calls into the
// HamiltonianOperator bit-flip machinery it is used to check.

#ifndef NQS_TESTS_ORACLES_HPP
#define NQS_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Single-site Paulis in the (bit 0 = down, bit 1 = up) basis.
inline CMatrix pauli(char p) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (p) {
    case 'I': m(0, 0) = m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cplx(0, 1); m(1, 0) = cplx(0, -1); break;
    case 'Z': m(0, 0) = -1.0; m(1, 1) = 1.0; break;
  }
  return m;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Site 0 is the least significant bit, so it is the rightmost factor.
inline CMatrix pauli_string(const std::string &ops) {
  CMatrix r = pauli(ops[0]);
  for (std::size_t i = 1; i < ops.size(); ++i) r = kron(pauli(ops[i]), r);
  return r;
}

inline std::string site_ops(int n, std::initializer_list<std::pair<int, char>> ops) {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (auto [i, p] : ops) s[static_cast<std::size_t>(i)] = p;
  return s;
}

// Kronecker-product construction; practical up to N of about 8.
inline Eigen::MatrixXd kron_tfim(int n, double j, double h, bool periodic) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const int bonds = periodic ? n : n - 1;
  for (int b = 0; b < bonds; ++b) {
    m += -j * pauli_string(site_ops(n, {{b, 'Z'}, {(b + 1) % n, 'Z'}})).real();
  }
  for (int i = 0; i < n; ++i) m += -h * pauli_string(site_ops(n, {{i, 'X'}})).real();
  return m;
}

inline Eigen::MatrixXd kron_j1j2(int n, double j1, double j2, bool periodic) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int range : {1, 2}) {
    const double c = range == 1 ? j1 : j2;
    for (int i = 0; i < n; ++i) {
      if (!periodic && i + range >= n) continue;
      const int k = (i + range) % n;
      for (char p : {'X', 'Y', 'Z'}) m += 0.25 * c * pauli_string(site_ops(n, {{i, p}, {k, p}}));
    }
  }
  return m.real();
}

inline int spin_at(Eigen::Index x, int site) { return ((x >> site) & 1) ? 1 : -1; }

// Textbook construction from spin algebra: sigma^z sigma^z on the diagonal,
// sigma^x as a single flip; for Heisenberg bonds
// S_i.S_j = Sz_i Sz_j + (S+_i S-_j + S-_i S+_j) / 2, i.e. an exchange of
// antiparallel spins with amplitude 1/2.
inline Eigen::MatrixXd dense_tfim(int n, double j, double h, bool periodic) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int i = 0; i < n; ++i) {
      if (periodic || i + 1 < n) m(x, x) += -j * spin_at(x, i) * spin_at(x, (i + 1) % n);
      m(x ^ (Eigen::Index{1} << i), x) += -h;
    }
  }
  return m;
}

inline Eigen::MatrixXd dense_j1j2(int n, double j1, double j2, bool periodic) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int range : {1, 2}) {
      const double c = range == 1 ? j1 : j2;
      for (int i = 0; i < n; ++i) {
        if (!periodic && i + range >= n) continue;
        const int k = (i + range) % n;
        const int si = spin_at(x, i), sk = spin_at(x, k);
        m(x, x) += c * 0.25 * si * sk;
        if (si != sk) m(x ^ (Eigen::Index{1} << i) ^ (Eigen::Index{1} << k), x) += c * 0.5;
      }
    }
  }
  return m;
}

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline DenseSpectrum dense_eigensolve(const Eigen::MatrixXd &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double dense_ground_energy(const Eigen::MatrixXd &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Periodic TFIM, H = -J sum ZZ - h sum X, even N: the ground state sits in
// the even-parity sector with antiperiodic fermion momenta k = pi(2m+1)/N.
inline double tfim_free_fermion_energy(int n, double j, double h) {
  double e = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = std::numbers::pi * (2.0 * m + 1.0) / n;
    e -= std::sqrt(j * j + h * h - 2.0 * std::abs(j) * h * std::cos(k));
  }
  return e;
}

// Central difference of a real function along one real coordinate.
inline double central_difference(const std::function<double(double)> &f, double step) {
  return (f(step) - f(-step)) / (2.0 * step);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

}  // namespace oracle

#endif  // NQS_TESTS_ORACLES_HPP
