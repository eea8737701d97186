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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nqs/rbm.hpp"
#include "oracles/oracles.hpp"

using namespace nqs;

namespace {

template <class T>
RbmParameters<T> random_params(int n, int m, std::mt19937_64 &rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  RbmParameters<T> p(n, m);
  auto draw = [&]() -> T {
    if constexpr (is_complex_v<T>) {
      return {g(rng), g(rng)};
    } else {
      return g(rng);
    }
  };
  for (auto &w : p.weights.reshaped()) w = draw();
  for (auto &b : p.hidden_bias) b = draw();
  return p;
}

SpinConfiguration random_config(int n, std::mt19937_64 &rng) {
  return {n, static_cast<Basis>(rng() & ((1U << n) - 1))};
}

}  // namespace

TEST(InitRandom, DeterministicShapes) {
  const auto a = init_random<double>(8, 1, 7);
  const auto b = init_random<double>(8, 1, 7);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.weights.rows(), 8);
  EXPECT_EQ(a.weights.cols(), 8);
  EXPECT_EQ(a.hidden_bias.size(), 8);
  EXPECT_EQ(flatten(a).values.size(), 72U);
  EXPECT_FALSE(a == init_random<double>(8, 1, 8));

  const auto c = init_random<cplx>(12, 2, 1);
  EXPECT_EQ(c.weights.rows(), 24);
  EXPECT_EQ(c.weights.cols(), 12);
  EXPECT_EQ(c.hidden_bias.size(), 24);
  EXPECT_EQ(flatten(c).values.size(), 312U);
  EXPECT_THROW(init_random<double>(0, 1, 1), ParameterError);
  EXPECT_THROW(init_random<double>(4, 0, 1), ParameterError);
}

TEST(InitRandom, ScaleIsSmallGaussian) {
  const auto p = init_random<cplx>(16, 4, 99);
  const Eigen::VectorXcd v = p.to_vector();
  const double mean_re = v.real().mean();
  const double var_re = (v.real().array() - mean_re).square().mean();
  const double var_im = (v.imag().array() - v.imag().mean()).square().mean();
  EXPECT_NEAR(std::sqrt(var_re), 0.01, 0.001);
  EXPECT_NEAR(std::sqrt(var_im), 0.01, 0.001);
  EXPECT_LT(std::abs(mean_re), 0.001);
}

TEST(LogCosh, MatchesNaiveFormWhereThatIsSafe) {
  for (double x : {-3.0, -0.5, 0.0, 1e-3, 2.5, 10.0}) {
    EXPECT_NEAR(logcosh(x), std::log(std::cosh(x)), 1e-13);
    for (double y : {-1.2, 0.3, 1.0}) {
      const cplx z(x, y);
      const cplx naive = std::log(std::cosh(z));
      EXPECT_NEAR(logcosh(z).real(), naive.real(), 1e-12);
      EXPECT_NEAR(logcosh(z).imag(), naive.imag(), 1e-12);
    }
  }
}

TEST(LogCosh, StableForLargeArguments) {
  for (double x : {-1e3, 1e3, 700.0, -999.0}) {
    EXPECT_NEAR(logcosh(x), std::abs(x) - std::log(2.0), 1e-9);
    const cplx v = logcosh(cplx(x, 0.7));
    EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
    EXPECT_NEAR(v.real(), std::abs(x) - std::log(2.0), 1e-9);
  }
}

TEST(LogPsi, ZeroParametersGiveZero) {
  const RbmParameters<double> p(5, 5);
  for (Basis b = 0; b < 32; ++b) EXPECT_EQ(log_psi(p, SpinConfiguration(5, b)), 0.0);
  const RbmParameters<cplx> c(5, 10);
  EXPECT_EQ(log_psi(c, SpinConfiguration(5, 17)), cplx(0.0));
}

TEST(LogPsi, ConstantHiddenUnit) {
  RbmParameters<double> p(4, 1);
  p.hidden_bias(0) = std::acosh(std::exp(1.0));
  for (Basis b = 0; b < 16; ++b) EXPECT_NEAR(log_psi(p, SpinConfiguration(4, b)), 1.0, 1e-14);
}

TEST(LogPsi, EvenUnderRowNegation) {
  std::mt19937_64 rng(1);
  const auto p = random_params<double>(6, 6, rng, 0.7);
  for (int row = 0; row < 6; ++row) {
    auto q = p;
    q.weights.row(row) *= -1.0;
    q.hidden_bias(row) *= -1.0;
    for (Basis b = 0; b < 64; ++b) {
      const SpinConfiguration c(6, b);
      EXPECT_NEAR(log_psi(p, c), log_psi(q, c), 1e-13);
    }
  }
}

TEST(LogPsi, DeterministicAndFinite) {
  std::mt19937_64 rng(2);
  const auto p = random_params<cplx>(8, 16, rng, 0.5);
  const SpinConfiguration c(8, 0b10110010);
  const cplx first = log_psi(p, c);
  EXPECT_EQ(first, log_psi(p, c));

  RbmParameters<double> big(3, 2);
  big.hidden_bias << 1e3, -1e3;
  EXPECT_TRUE(std::isfinite(log_psi(big, SpinConfiguration(3, 0))));

  RbmParameters<double> bad(3, 1);
  bad.hidden_bias(0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(log_psi(bad, SpinConfiguration(3, 0)), NumericOverflowError);
  EXPECT_THROW(log_psi(bad, SpinConfiguration(4, 0)), DimensionError);
}

TEST(PsiVector, MaxShiftAndPositivity) {
  const auto uniform = psi_vector(RbmParameters<double>(3, 3), HilbertBasis(3));
  ASSERT_EQ(uniform.amplitudes.size(), 8);
  for (double a : uniform.amplitudes) EXPECT_EQ(a, 1.0);

  std::mt19937_64 rng(3);
  const auto real = psi_vector(random_params<double>(6, 6, rng, 2.0), HilbertBasis(6));
  EXPECT_TRUE(real.amplitudes.allFinite());
  EXPECT_GT(real.amplitudes.minCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(real.amplitudes.maxCoeff(), 1.0);

  const auto cpx = psi_vector(random_params<cplx>(6, 12, rng, 2.0), HilbertBasis(6));
  EXPECT_TRUE(cpx.amplitudes.allFinite());
  EXPECT_NEAR(cpx.amplitudes.cwiseAbs().maxCoeff(), 1.0, 1e-15);
}

TEST(PsiVector, AgreesWithPointwiseLogPsi) {
  std::mt19937_64 rng(4);
  const auto p = random_params<cplx>(5, 10, rng, 0.6);
  const auto psi = psi_vector(p, HilbertBasis(5));
  for (Basis b = 0; b < 32; ++b) {
    const cplx expect = std::exp(log_psi(p, SpinConfiguration(5, b)) - psi.log_shift);
    EXPECT_NEAR(std::abs(psi.amplitudes(b) - expect), 0.0, 1e-12);
  }
}

TEST(GradLogPsi, ZeroParameters) {
  const auto g = grad_log_psi(RbmParameters<double>(4, 4), SpinConfiguration(4, 5));
  EXPECT_EQ(g.hidden_bias.norm(), 0.0);
  EXPECT_EQ(g.weights.norm(), 0.0);
}

// Central differences (step 1e-5) over 100 random (parameters, configuration)
// pairs, compared as whole gradient vectors.
TEST(GradLogPsi, MatchesFiniteDifferencesReal) {
  std::mt19937_64 rng(5);
  const double step = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_params<double>(8, 8, rng, 0.4);
    const auto c = random_config(8, rng);
    const Eigen::VectorXd analytic = grad_log_psi(p, c).to_vector();
    Eigen::VectorXd numeric(analytic.size());
    for (Eigen::Index k = 0; k < analytic.size(); ++k) {
      numeric(k) = oracle::central_difference(
          [&](double d) {
            auto q = p;
            Eigen::VectorXd v = q.to_vector();
            v(k) += d;
            q.assign(v);
            return log_psi(q, c);
          },
          step);
    }
    worst = std::max(worst, (analytic - numeric).norm() / analytic.norm());
  }
  EXPECT_LT(worst, 1e-6);
}

// Holomorphic derivative D: a real perturbation changes log psi by D*eps, an
// imaginary one by i*D*eps.
TEST(GradLogPsi, MatchesFiniteDifferencesComplex) {
  std::mt19937_64 rng(6);
  const double step = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_params<cplx>(6, 12, rng, 0.3);
    const auto c = random_config(6, rng);
    const Eigen::VectorXcd analytic = grad_log_psi(p, c).to_vector();
    Eigen::VectorXcd along_re(analytic.size()), along_im(analytic.size());
    for (Eigen::Index k = 0; k < analytic.size(); ++k) {
      auto eval = [&](cplx d) {
        auto q = p;
        Eigen::VectorXcd v = q.to_vector();
        v(k) += d;
        q.assign(v);
        return log_psi(q, c);
      };
      along_re(k) = (eval(step) - eval(-step)) / (2 * step);
      along_im(k) = (eval(cplx(0, step)) - eval(cplx(0, -step))) / (2 * step);
    }
    worst = std::max(worst, (analytic - along_re).norm() / analytic.norm());
    worst = std::max(worst, (cplx(0, 1) * analytic - along_im).norm() / analytic.norm());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Flatten, LayoutAndRoundTrip) {
  std::mt19937_64 rng(7);
  const auto p = random_params<double>(8, 8, rng, 1.0);
  const auto flat = flatten(p);
  ASSERT_EQ(flat.values.size(), 72U);
  EXPECT_EQ(flat.values[0], p.weights(0, 0));
  EXPECT_EQ(flat.values[1], p.weights(0, 1));
  EXPECT_EQ(flat.values[8], p.weights(1, 0));
  EXPECT_EQ(flat.values[64], p.hidden_bias(0));
  EXPECT_EQ(flat.layout.field, Field::real);
  EXPECT_TRUE(unflatten<double>(flat) == p);
  EXPECT_EQ(flatten(unflatten<double>(flat)).values, flat.values);

  const auto names = flat.layout.column_names();
  EXPECT_EQ(names.front(), "W_0_0");
  EXPECT_EQ(names[63], "W_7_7");
  EXPECT_EQ(names.back(), "b_7");
}

TEST(Flatten, ComplexKeepsRealParts) {
  std::mt19937_64 rng(8);
  const auto p = random_params<cplx>(4, 8, rng, 1.0);
  const auto flat = flatten(p);
  ASSERT_EQ(flat.values.size(), 40U);
  EXPECT_EQ(flat.values[5], p.weights(1, 1).real());
  EXPECT_EQ(flat.values[39], p.hidden_bias(7).real());
  const auto back = unflatten<cplx>(flat);
  EXPECT_EQ(back.weights.real(), p.weights.real());
  EXPECT_EQ(back.hidden_bias.real(), p.hidden_bias.real());
  EXPECT_EQ(back.weights.imag().norm(), 0.0);
}

TEST(Flatten, HiddenPermutationPermutesBlocks) {
  std::mt19937_64 rng(9);
  const auto p = random_params<double>(3, 4, rng, 1.0);
  const std::vector<int> perm = {2, 0, 3, 1};
  RbmParameters<double> q(3, 4);
  for (int i = 0; i < 4; ++i) {
    q.weights.row(i) = p.weights.row(perm[i]);
    q.hidden_bias(i) = p.hidden_bias(perm[i]);
  }
  const auto fp = flatten(p).values, fq = flatten(q).values;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(fq[i * 3 + j], fp[perm[i] * 3 + j]);
    EXPECT_EQ(fq[12 + i], fp[12 + perm[i]]);
  }
  // log psi is invariant under relabelling hidden units
  EXPECT_NEAR(log_psi(p, SpinConfiguration(3, 6)), log_psi(q, SpinConfiguration(3, 6)), 1e-14);
}
