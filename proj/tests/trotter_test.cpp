// Copyright 2026 The sacsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sacsim/trotter.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "sacsim/random.hpp"

using namespace sacsim;

namespace {

using C = std::complex<double>;

CMatrix<double> pauli_x() {
  CMatrix<double> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix<double> pauli_z() {
  CMatrix<double> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

LocalHamiltonian<double> x_plus_z() {
  return LocalHamiltonian<double>(1, 2, {{{0}, pauli_x()}, {{0}, pauli_z()}});
}

TEST(LocalHamiltonianTest, EmbeddingMatchesKronecker) {
  Rng rng = make_stream(41, 0);
  const CMatrix<double> a = random_hermitian<double>(2, rng);
  const CMatrix<double> b = random_hermitian<double>(2, rng);
  const CMatrix<double> id = identity<double>(2);
  const LocalHamiltonian<double> h(3, 2,
                                   {{{0}, a}, {{0, 2}, kron<double>(a, b)}, {{2, 0}, kron<double>(a, b)}, {{1}, b}});
  EXPECT_LT((h.embedded_term(0) - kron<double>(kron<double>(a, id), id)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((h.embedded_term(1) - kron<double>(kron<double>(a, id), b)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((h.embedded_term(2) - kron<double>(kron<double>(b, id), a)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((h.embedded_term(3) - kron<double>(kron<double>(id, b), id)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(h.locality(), 2);
  EXPECT_EQ(hidden_particle_count(h), 8);
}

TEST(LocalHamiltonianTest, Validation) {
  EXPECT_THROW(LocalHamiltonian<double>(2, 2, {{{0, 0}, identity<double>(4)}}), InvalidArgument);
  EXPECT_THROW(LocalHamiltonian<double>(2, 2, {{{2}, pauli_z()}}), InvalidArgument);
  EXPECT_THROW(LocalHamiltonian<double>(2, 2, {{{0, 1}, pauli_z()}}), DimensionError);
  CMatrix<double> lower = CMatrix<double>::Zero(2, 2);
  lower(0, 1) = 1;
  EXPECT_THROW(LocalHamiltonian<double>(1, 2, {{{0}, lower}}), InvalidArgument);
}

TEST(SuzukiPlan, SecondOrderUnrolling) {
  const auto plan = suzuki_plan(x_plus_z(), 1.0, 1, 1);
  ASSERT_EQ(plan.steps.size(), 4u);
  const int terms[] = {0, 1, 1, 0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(plan.steps[i].term, terms[i]);
    EXPECT_DOUBLE_EQ(plan.steps[i].duration, 0.5);
  }
}

TEST(SuzukiPlan, FourthOrderCoefficient) {
  EXPECT_NEAR(suzuki_s<double>(2), 0.4144908, 1e-7);
  const auto plan = suzuki_plan(x_plus_z(), 1.0, 1, 2);
  ASSERT_EQ(plan.s_values.size(), 1u);
  EXPECT_NEAR(plan.s_values[0], 0.4144908, 1e-7);
}

TEST(SuzukiPlan, LengthGrowsFivefoldPerLevel) {
  const auto h = x_plus_z();
  for (int chi = 1; chi <= 4; ++chi) {
    const auto a = suzuki_plan(h, 1.0, 3, chi);
    const auto b = suzuki_plan(h, 1.0, 3, chi + 1);
    EXPECT_EQ(b.steps.size(), 5 * a.steps.size());
  }
}

TEST(SuzukiPlan, DurationsPerTermSumToT) {
  Rng rng = make_stream(42, 0);
  const LocalHamiltonian<double> h(2, 2, {{{0}, pauli_x()}, {{1}, pauli_z()}, {{0, 1}, kron<double>(pauli_z(), pauli_z())}});
  for (int trial = 0; trial < 12; ++trial) {
    const int chi = 1 + trial % 3;
    const int r = 1 + static_cast<int>(uniform01(rng) * 7);
    const double t = 0.1 + 2 * uniform01(rng);
    const auto plan = suzuki_plan(h, t, r, chi);
    std::vector<double> total(3, 0.0);
    for (const auto& s : plan.steps) total[static_cast<std::size_t>(s.term)] += s.duration;
    for (const double v : total) EXPECT_NEAR(v, t, 1e-12);
    // Symmetric formulas are palindromic.
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      const auto& mirror = plan.steps[plan.steps.size() - 1 - i];
      EXPECT_EQ(plan.steps[i].term, mirror.term);
      EXPECT_NEAR(plan.steps[i].duration, mirror.duration, 1e-15);
    }
  }
}

TEST(SuzukiPlan, InvalidArguments) {
  EXPECT_THROW(suzuki_plan(x_plus_z(), 1.0, 0, 1), InvalidArgument);
  EXPECT_THROW(suzuki_plan(x_plus_z(), 1.0, 1, 0), InvalidArgument);
}

TEST(ExecutePlan, CommutingTermsAreExact) {
  const CMatrix<double> id = identity<double>(2);
  const LocalHamiltonian<double> h(2, 2, {{{0}, pauli_z()}, {{1}, pauli_z()}});
  const double t = 1.3;
  const auto exec = execute_plan(suzuki_plan(h, t, 1, 1), h);
  const CMatrix<double> exact = (C(0, -t) * h.full_matrix()).exp();
  EXPECT_LT(operator_norm_distance<double>(exec.unitary, exact), 1e-12);
}

TEST(ExecutePlan, XPlusZMatchesIndependentProduct) {
  const double t = 1.0;
  const int r = 10;
  const auto h = x_plus_z();
  const auto exec = execute_plan(suzuki_plan(h, t, r, 1), h);
  const double tau = t / r;
  const CMatrix<double> half_x = (C(0, -tau / 2) * pauli_x()).exp();
  const CMatrix<double> full_z = (C(0, -tau) * pauli_z()).exp();
  CMatrix<double> oracle = identity<double>(2);
  for (int k = 0; k < r; ++k) oracle = half_x * full_z * half_x * oracle;
  const CMatrix<double> exact = (C(0, -t) * (pauli_x() + pauli_z())).exp();
  EXPECT_LT((exec.unitary - oracle).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(operator_norm_distance<double>(exec.unitary, exact), operator_norm_distance<double>(oracle, exact), 1e-13);
  EXPECT_EQ(exec.exponentials, 2u);
}

TEST(ExecutePlan, ZeroTimeIsIdentity) {
  const auto h = x_plus_z();
  const auto exec = execute_plan(suzuki_plan(h, 0.0, 5, 2), h);
  EXPECT_LT((exec.unitary - identity<double>(2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExecutePlan, MapIsCompositionOfTermMaps) {
  Rng rng = make_stream(43, 0);
  const LocalHamiltonian<double> h(2, 2, {{{0}, random_hermitian<double>(2, rng)},
                                          {{0, 1}, random_hermitian<double>(4, rng)},
                                          {{1}, random_hermitian<double>(2, rng)}});
  const auto plan = suzuki_plan(h, 0.8, 2, 2);
  const auto exec = execute_plan(plan, h);
  ASSERT_TRUE(exec.map.has_value());
  RMatrix<double> composed = RMatrix<double>::Identity(8, 8);
  for (const auto& s : plan.steps) {
    composed = unitary_to_symplectic<double>(term_propagator(h, s.term, s.duration)).matrix() * composed;
  }
  EXPECT_LT((composed - exec.map->matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(exec.map->defect(), 1e-10);
}

TEST(ExecutePlan, TwoLocalTermMapCouplesAllModes) {
  Rng rng = make_stream(44, 0);
  const LocalHamiltonian<double> h(2, 2, {{{0, 1}, random_hermitian<double>(4, rng)}});
  EXPECT_EQ(hidden_particle_count(h), 4);
  const RMatrix<double> s = unitary_to_symplectic<double>(term_propagator(h, 0, 0.9)).matrix();
  // Mode i is (q_i, p_i) = rows/cols {i, i + 4}; every pair of modes is coupled.
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      const double coupling = std::hypot(std::hypot(s(i, j), s(i, j + 4)), std::hypot(s(i + 4, j), s(i + 4, j + 4)));
      EXPECT_GT(coupling, 1e-6) << i << "," << j;
    }
  }
}

TEST(ExecutePlan, DimensionGuard) {
  const LocalHamiltonian<double> h(13, 2, {{{0}, pauli_z()}});
  EXPECT_THROW(execute_plan(suzuki_plan(h, 1.0, 1, 1), h), InvalidArgument);
}

TEST(ErrorScan, SecondOrderSlope) {
  const auto scan = error_scan(x_plus_z(), 1.0, 1, {4, 8, 16, 32, 64});
  ASSERT_TRUE(scan.slope.has_value());
  EXPECT_NEAR(*scan.slope, -2.0, 0.2);
  EXPECT_EQ(scan.rows.size(), 5u);
  EXPECT_DOUBLE_EQ(scan.rows[0].bound, 1.0 / 16.0);
  for (std::size_t i = 1; i < scan.rows.size(); ++i) EXPECT_LT(scan.rows[i].error, scan.rows[i - 1].error);
}

TEST(ErrorScan, FourthOrderSlope) {
  const auto scan = error_scan(x_plus_z(), 1.0, 2, {4, 8, 16, 32, 64});
  ASSERT_TRUE(scan.slope.has_value());
  EXPECT_NEAR(*scan.slope, -4.0, 0.4);
}

TEST(ErrorScan, CommutingSkipsFit) {
  const LocalHamiltonian<double> h(2, 2, {{{0}, pauli_z()}, {{1}, pauli_z()}});
  const auto scan = error_scan(h, 1.0, 1, {1, 2, 4});
  EXPECT_TRUE(scan.fit_skipped);
  EXPECT_FALSE(scan.slope.has_value());
  for (const auto& row : scan.rows) EXPECT_LT(row.error, 1e-12);
}

TEST(ErrorScan, ManyBodySlope) {
  // Transverse-field Ising chain on 4 qubits.
  std::vector<LocalTerm<double>> terms;
  for (int i = 0; i < 3; ++i) terms.push_back({{i, i + 1}, kron<double>(pauli_z(), pauli_z())});
  for (int i = 0; i < 4; ++i) terms.push_back({{i}, CMatrix<double>(0.7 * pauli_x())});
  const LocalHamiltonian<double> h(4, 2, terms);
  const auto scan = error_scan(h, 1.0, 1, {8, 16, 32, 64});
  ASSERT_TRUE(scan.slope.has_value());
  EXPECT_NEAR(*scan.slope, -2.0, 0.2);
}

}  // namespace
