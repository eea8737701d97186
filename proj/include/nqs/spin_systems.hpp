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

#ifndef NQS_SPIN_SYSTEMS_HPP
#define NQS_SPIN_SYSTEMS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nqs/error.hpp"

namespace nqs {

/// Largest chain handled by full-basis routines (2^16 amplitudes).
inline constexpr int kMaxSites = 16;

using Basis = std::uint32_t;

/// A computational-basis state of an N-site spin-1/2 chain. Site i is the
/// i-th least significant bit; bit 1 is spin up (s_i = +1), bit 0 is down.
class SpinConfiguration {
 public:
  SpinConfiguration(int n_sites, Basis bits) : n_sites_(n_sites), bits_(bits) {
    if (n_sites < 1 || n_sites > 31) {
      throw InvalidSystemError("SpinConfiguration: n_sites out of range");
    }
    if (bits >= (Basis{1} << n_sites)) {
      throw DimensionError("SpinConfiguration: index exceeds 2^n_sites");
    }
  }

  int n_sites() const noexcept { return n_sites_; }
  Basis bits() const noexcept { return bits_; }
  int spin(int site) const noexcept { return ((bits_ >> site) & 1U) ? 1 : -1; }

  Eigen::VectorXd spins() const {
    Eigen::VectorXd s(n_sites_);
    for (int i = 0; i < n_sites_; ++i) s(i) = spin(i);
    return s;
  }

  static SpinConfiguration from_spins(const std::vector<int> &spins) {
    Basis bits = 0;
    for (std::size_t i = 0; i < spins.size(); ++i) {
      if (spins[i] != 1 && spins[i] != -1) {
        throw InvalidSystemError("SpinConfiguration: spins must be +1 or -1");
      }
      if (spins[i] == 1) bits |= Basis{1} << i;
    }
    return {static_cast<int>(spins.size()), bits};
  }

  friend bool operator==(const SpinConfiguration &, const SpinConfiguration &) = default;

 private:
  int n_sites_;
  Basis bits_;
};

/// Full computational basis, enumerated in ascending index order.
class HilbertBasis {
 public:
  explicit HilbertBasis(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1) throw InvalidSystemError("HilbertBasis: n_sites must be positive");
    if (n_sites > kMaxSites) {
      throw CapacityError("HilbertBasis: " + std::to_string(n_sites) +
                          " sites exceeds the full-basis limit of " +
                          std::to_string(kMaxSites));
    }
  }

  int n_sites() const noexcept { return n_sites_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_sites_; }
  SpinConfiguration configuration(std::size_t index) const {
    return {n_sites_, static_cast<Basis>(index)};
  }

  /// dimension x n_sites matrix of +/-1 spin values, row k = configuration(k).
  Eigen::MatrixXd spin_matrix() const {
    Eigen::MatrixXd s(dimension(), n_sites_);
    for (std::size_t k = 0; k < dimension(); ++k) {
      for (int i = 0; i < n_sites_; ++i) s(k, i) = ((k >> i) & 1U) ? 1.0 : -1.0;
    }
    return s;
  }

 private:
  int n_sites_;
};

enum class Boundary { periodic, open };

inline std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

inline Boundary parse_boundary(const std::string &s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw ParameterError("unknown boundary '" + s + "' (expected periodic|open)");
}

/// coefficient * (tensor product of single-site Paulis), site i = ops[i].
struct PauliTerm {
  double coefficient;
  std::string ops;
};

/// Real-symmetric spin Hamiltonian given as a sum of Pauli strings.
///
/// The term list is compiled once into flip blocks: for each distinct flip
/// mask m (sites carrying X or Y) the vector A_m(x) = <x|H|x^m>, so that
/// (H psi)(x) = sum_m A_m(x) psi(x ^ m). Every term must contain an even
/// number of Y factors, which keeps all matrix elements real.
class HamiltonianOperator {
 public:
  HamiltonianOperator(int n_sites, std::vector<PauliTerm> terms, Boundary boundary)
      : n_sites_(n_sites), terms_(std::move(terms)), boundary_(boundary) {
    HilbertBasis basis(n_sites);  // validates size
    const std::size_t dim = basis.dimension();
    for (const auto &t : terms_) {
      if (static_cast<int>(t.ops.size()) != n_sites) {
        throw InvalidSystemError("HamiltonianOperator: operator string '" + t.ops +
                                 "' does not have length " + std::to_string(n_sites));
      }
      Basis flip = 0, zmask = 0, ymask = 0;
      for (int i = 0; i < n_sites; ++i) {
        switch (t.ops[i]) {
          case 'I': break;
          case 'X': flip |= Basis{1} << i; break;
          case 'Y': flip |= Basis{1} << i; ymask |= Basis{1} << i; break;
          case 'Z': zmask |= Basis{1} << i; break;
          default:
            throw InvalidSystemError(std::string("HamiltonianOperator: bad Pauli symbol '") +
                                     t.ops[i] + "'");
        }
      }
      const int ny = std::popcount(ymask);
      if (ny % 2 != 0) {
        throw InvalidSystemError("HamiltonianOperator: odd number of Y factors in '" + t.ops +
                                 "' gives imaginary matrix elements");
      }
      if (t.coefficient == 0.0) continue;
      // i^ny for even ny
      const double yphase = (ny / 2) % 2 == 0 ? 1.0 : -1.0;
      auto &block = block_for(flip, dim);
      for (std::size_t x = 0; x < dim; ++x) {
        // <x|P|y> with y = x ^ flip; P|y> = prod_Z s(y) prod_Y (i s(y)) |x>
        const Basis y = static_cast<Basis>(x) ^ flip;
        const int down = std::popcount(static_cast<Basis>(~y & (zmask | ymask)));
        const double sign = (down % 2 == 0) ? 1.0 : -1.0;
        block.elements[x] += t.coefficient * yphase * sign;
      }
    }
  }

  int n_sites() const noexcept { return n_sites_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_sites_; }
  const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
  Boundary boundary() const noexcept { return boundary_; }

  /// out = H * in. Works for real and complex amplitude vectors.
  template <class Scalar>
  void apply_into(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &in,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &out) const {
    const std::size_t dim = dimension();
    if (static_cast<std::size_t>(in.size()) != dim) {
      throw DimensionError("apply: state has length " + std::to_string(in.size()) +
                           ", expected " + std::to_string(dim));
    }
    out.setZero(static_cast<Eigen::Index>(dim));
    for (const auto &block : blocks_) {
      const double *a = block.elements.data();
      if (block.mask == 0) {
        for (std::size_t x = 0; x < dim; ++x) out[x] += a[x] * in[x];
      } else {
        for (std::size_t x = 0; x < dim; ++x) out[x] += a[x] * in[x ^ block.mask];
      }
    }
  }

  /// Dense matrix of this operator (small sizes only; used for inspection).
  Eigen::MatrixXd to_dense() const {
    const std::size_t dim = dimension();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto &block : blocks_) {
      for (std::size_t x = 0; x < dim; ++x) h(x, x ^ block.mask) += block.elements[x];
    }
    return h;
  }

 private:
  struct FlipBlock {
    Basis mask;
    std::vector<double> elements;
  };

  FlipBlock &block_for(Basis mask, std::size_t dim) {
    auto it = std::find_if(blocks_.begin(), blocks_.end(),
                           [mask](const FlipBlock &b) { return b.mask == mask; });
    if (it != blocks_.end()) return *it;
    blocks_.push_back({mask, std::vector<double>(dim, 0.0)});
    return blocks_.back();
  }

  int n_sites_;
  std::vector<PauliTerm> terms_;
  Boundary boundary_;
  std::vector<FlipBlock> blocks_;
};

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply(const HamiltonianOperator &op,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &state) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out;
  op.apply_into(state, out);
  return out;
}

namespace detail {

inline std::string pauli_string(int n_sites, std::initializer_list<std::pair<int, char>> ops) {
  std::string s(static_cast<std::size_t>(n_sites), 'I');
  for (auto [site, p] : ops) s[static_cast<std::size_t>(site)] = p;
  return s;
}

// Bonds (i, i + range) for every site i; periodic wraps, open drops bonds past
// the edge. Short rings keep the literal per-site sum, so a bond can repeat.
inline std::vector<std::pair<int, int>> chain_bonds(int n_sites, int range, Boundary boundary) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < n_sites; ++i) {
    const int j = i + range;
    if (j < n_sites) {
      bonds.emplace_back(i, j);
    } else if (boundary == Boundary::periodic) {
      bonds.emplace_back(i, j % n_sites);
    }
  }
  return bonds;
}

}  // namespace detail

/// H = -J sum_<ij> Z_i Z_j - h sum_i X_i on a chain.
inline HamiltonianOperator build_tfim(int n_sites, double j, double h,
                                      Boundary boundary = Boundary::periodic) {
  if (n_sites < 2) throw InvalidSystemError("build_tfim: need at least 2 sites");
  std::vector<PauliTerm> terms;
  for (auto [a, b] : detail::chain_bonds(n_sites, 1, boundary)) {
    terms.push_back({-j, detail::pauli_string(n_sites, {{a, 'Z'}, {b, 'Z'}})});
  }
  for (int i = 0; i < n_sites; ++i) {
    terms.push_back({-h, detail::pauli_string(n_sites, {{i, 'X'}})});
  }
  return {n_sites, std::move(terms), boundary};
}

/// H = J1 sum S_i.S_{i+1} + J2 sum S_i.S_{i+2} with S = sigma / 2.
inline HamiltonianOperator build_j1j2(int n_sites, double j1, double j2,
                                      Boundary boundary = Boundary::periodic) {
  if (n_sites < 4) throw InvalidSystemError("build_j1j2: need at least 4 sites");
  std::vector<PauliTerm> terms;
  auto add_heisenberg = [&](double coupling, int range) {
    for (auto [a, b] : detail::chain_bonds(n_sites, range, boundary)) {
      for (char p : {'X', 'Y', 'Z'}) {
        terms.push_back({0.25 * coupling, detail::pauli_string(n_sites, {{a, p}, {b, p}})});
      }
    }
  };
  add_heisenberg(j1, 1);
  add_heisenberg(j2, 2);
  return {n_sites, std::move(terms), boundary};
}

}  // namespace nqs

#endif  // NQS_SPIN_SYSTEMS_HPP
