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

#include "sacsim/statespace.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "sacsim/random.hpp"

using namespace sacsim;

namespace {

using C = std::complex<double>;
constexpr double kInvSqrt2 = 0.70710678118654752440;

CVector<double> vec(std::initializer_list<C> xs) {
  CVector<double> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const C& x : xs) v(i++) = x;
  return v;
}

TEST(PureState, RejectsUnnormalizedAmplitudes) {
  EXPECT_THROW(PureState<double>(vec({1.0, 1.0})), InvalidArgument);
  EXPECT_THROW(PureState<double>(CVector<double>(0)), InvalidArgument);
  EXPECT_NO_THROW(PureState<double>(vec({kInvSqrt2, C(0, kInvSqrt2)})));
}

TEST(PureState, ConjugateMomentum) {
  const PureState<double> psi(vec({kInvSqrt2, C(0, kInvSqrt2)}));
  const CVector<double> pi = psi.conjugate_momenta();
  EXPECT_NEAR(std::abs(pi(0) - C(0, kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pi(1) - C(kInvSqrt2, 0)), 0.0, 1e-15);
  // normalization sum_i |psi_i|^2 = -i sum_i pi_i psi_i
  const C s = C(0, -1) * (pi.array() * psi.amplitudes().array()).sum();
  EXPECT_NEAR(std::abs(s - C(1, 0)), 0.0, 1e-15);
}

TEST(PhaseSpace, SplitsRealAndImaginaryParts) {
  const PureState<double> psi(vec({kInvSqrt2, C(0, kInvSqrt2)}));
  const auto hps = to_phase_space(psi, BasisLabel<double>::computational(2));
  EXPECT_NEAR(hps.q()(0), 0.70710678, 1e-8);
  EXPECT_NEAR(hps.q()(1), 0.0, 1e-15);
  EXPECT_NEAR(hps.p()(0), 0.0, 1e-15);
  EXPECT_NEAR(hps.p()(1), 0.70710678, 1e-8);
  EXPECT_NEAR(hps.norm_squared(), 1.0, 1e-15);
}

TEST(PhaseSpace, BasisVectorMapsToUnitPosition) {
  const auto hps = to_phase_space(PureState<double>::basis_state(2, 0), BasisLabel<double>::computational(2));
  EXPECT_EQ(hps.q()(0), 1.0);
  EXPECT_EQ(hps.q()(1), 0.0);
  EXPECT_EQ(hps.p()(0), 0.0);
  EXPECT_EQ(hps.p()(1), 0.0);
}

TEST(PhaseSpace, FromPhaseSpaceKeepsGlobalPhase) {
  const auto comp = BasisLabel<double>::computational(2);
  RVector<double> q(2), p(2);
  q << 1, 0;
  p << 0, 0;
  auto psi = from_phase_space(HiddenParticleSet<double>(comp, q, p));
  EXPECT_EQ(psi[0], C(1, 0));
  q << 0, 0;
  p << 1, 0;
  psi = from_phase_space(HiddenParticleSet<double>(comp, q, p));
  EXPECT_EQ(psi[0], C(0, 1));
  EXPECT_EQ(psi[1], C(0, 0));
}

TEST(PhaseSpace, FromPhaseSpaceRejectsBrokenConstraint) {
  const auto comp = BasisLabel<double>::computational(2);
  RVector<double> q(2), p(2);
  q << 1, 1e-4;
  p << 0, 0;
  EXPECT_THROW(from_phase_space(HiddenParticleSet<double>(comp, q, p)), InvalidParticleSet);
}

TEST(PhaseSpace, DimensionMismatch) {
  EXPECT_THROW(to_phase_space(PureState<double>::basis_state(3, 0), BasisLabel<double>::computational(2)),
               DimensionError);
}

TEST(PhaseSpace, RoundTripDimension3InBasisB11) {
  Rng rng = make_stream(11, 0);
  const auto psi = random_state(3, rng);
  const auto basis = hw_eigenbasis<double>(1, 1, 3);
  const auto back = from_phase_space(to_phase_space(psi, basis));
  EXPECT_LT((back.amplitudes() - psi.amplitudes()).norm(), 1e-12);
}

// Property: round trip in both directions for 100 random states, d in 2..16,
// every Heisenberg-Weyl basis of that dimension.
TEST(PhaseSpace, RoundTripPropertyAllBases) {
  Rng rng = make_stream(2026, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 15;
    const auto psi = random_state(d, rng);
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    const auto basis = hw_eigenbasis<double>(j, k, d);
    const auto hps = to_phase_space(psi, basis);
    EXPECT_NEAR(hps.norm_squared(), 1.0, 1e-12);
    const auto back = from_phase_space(hps);
    EXPECT_LT((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12) << "d=" << d;
    const auto again = to_phase_space(back, basis);
    EXPECT_LT((again.stacked() - hps.stacked()).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (Index d : {2, 3, 4, 6}) {
    const auto psi = random_state(d, rng);
    for (const auto& [j, k] : hw_index_pairs(d, true)) {
      const auto basis = hw_eigenbasis<double>(j, k, d);
      const auto back = from_phase_space(to_phase_space(psi, basis));
      EXPECT_LT((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(HeisenbergWeyl, IdentityAndPaulis) {
  for (Index d : {1, 2, 5}) {
    EXPECT_EQ(hw_operator<double>(0, 0, d), identity<double>(d));
  }
  CMatrix<double> x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EXPECT_LT((hw_operator<double>(1, 0, 2) - x).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((hw_operator<double>(0, 1, 2) - z).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HeisenbergWeyl, M11Dimension3Entries) {
  const C w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const auto m = hw_operator<double>(1, 1, 3);
  EXPECT_LT(std::abs(m(2, 0) - C(1, 0)), 1e-15);
  EXPECT_LT(std::abs(m(0, 1) - w), 1e-15);
  EXPECT_LT(std::abs(m(1, 2) - w * w), 1e-15);
  int nonzero = 0;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) nonzero += std::abs(m(i, j)) > 0 ? 1 : 0;
  EXPECT_EQ(nonzero, 3);
}

TEST(HeisenbergWeyl, RejectsOutOfRangeIndices) {
  EXPECT_THROW(hw_operator<double>(2, 0, 2), InvalidArgument);
  EXPECT_THROW(hw_operator<double>(0, -1, 2), InvalidArgument);
  EXPECT_THROW(hw_eigenbasis<double>(0, 3, 3), InvalidArgument);
}

// With X_j = sum |i><i+j| the clock and shift satisfy X_j Z_k = w^{jk} Z_k X_j,
// i.e. Z_k X_j = w^{-jk} X_j Z_k.
TEST(HeisenbergWeyl, CommutationRelation) {
  for (Index d : {2, 3, 4, 5}) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const auto x = hw_shift<double>(j, d);
        const auto z = hw_clock<double>(k, d);
        const C w_jk = std::polar(1.0, 2.0 * std::numbers::pi * j * k / static_cast<double>(d));
        EXPECT_LT((z * x - std::conj(w_jk) * x * z).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((x * z - hw_operator<double>(j, k, d)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(HeisenbergWeyl, Orthogonality) {
  for (Index d : {2, 3, 4, 5}) {
    const auto pairs = hw_index_pairs(d, true);
    for (const auto& [j, k] : pairs) {
      const auto m = hw_operator<double>(j, k, d);
      for (const auto& [j2, k2] : pairs) {
        const C ip = (m.adjoint() * hw_operator<double>(j2, k2, d)).trace();
        const double expected = (j == j2 && k == k2) ? static_cast<double>(d) : 0.0;
        EXPECT_LT(std::abs(ip - expected), 1e-12);
      }
    }
  }
}

TEST(HeisenbergWeyl, EigenbasisOfZIsComputational) {
  const auto b = hw_eigenbasis<double>(0, 1, 2);
  EXPECT_LT((b.vectors() - identity<double>(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(b.name(), "hw(0,1)");
  EXPECT_EQ(hw_eigenbasis<double>(0, 0, 3).kind(), BasisKind::computational);
}

TEST(HeisenbergWeyl, EigenbasisOfX) {
  const auto b = hw_eigenbasis<double>(1, 0, 2);
  CMatrix<double> expected(2, 2);
  expected << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  EXPECT_LT((b.vectors() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(std::abs(b.eigenvalues()(0) - C(1, 0)), 1e-15);
  EXPECT_LT(std::abs(b.eigenvalues()(1) - C(-1, 0)), 1e-15);
}

TEST(HeisenbergWeyl, DegenerateEigenbasisD4) {
  const auto m = hw_operator<double>(2, 0, 4);
  const auto b = hw_eigenbasis<double>(2, 0, 4);
  EXPECT_LT(unitarity_defect(b.vectors()), 1e-12);
  int plus = 0, minus = 0;
  for (Index c = 0; c < 4; ++c) {
    const CVector<double> v = b.vectors().col(c);
    EXPECT_LT((m * v - b.eigenvalues()(c) * v).norm(), 1e-10);
    if (std::abs(b.eigenvalues()(c) - C(1, 0)) < 1e-12) ++plus;
    if (std::abs(b.eigenvalues()(c) - C(-1, 0)) < 1e-12) ++minus;
  }
  EXPECT_EQ(plus, 2);
  EXPECT_EQ(minus, 2);
}

TEST(HeisenbergWeyl, EigenbasisValidityProperty) {
  for (Index d = 2; d <= 8; ++d) {
    for (const auto& [j, k] : hw_index_pairs(d, true)) {
      const auto m = hw_operator<double>(j, k, d);
      const auto b = hw_eigenbasis<double>(j, k, d);
      EXPECT_LT(unitarity_defect(b.vectors()), 1e-12);
      for (Index c = 0; c < d; ++c) {
        const CVector<double> v = b.vectors().col(c);
        EXPECT_LT((m * v - b.eigenvalues()(c) * v).norm(), 1e-10) << "d=" << d << " j=" << j << " k=" << k;
        // phase convention: first nonzero component real positive
        for (Index i = 0; i < d; ++i) {
          if (std::abs(v(i)) > 1e-8) {
            EXPECT_GT(v(i).real(), 0.0);
            EXPECT_LT(std::abs(v(i).imag()), 1e-15);
            break;
          }
        }
      }
    }
  }
}

TEST(HeisenbergWeyl, EigenbasisIsDeterministic) {
  const auto a = hw_eigenbasis<double>(2, 2, 6);
  const auto b = hw_eigenbasis<double>(2, 2, 6);
  EXPECT_EQ(a.vectors(), b.vectors());
}

TEST(Bloch, MaximallyMixedHasZeroVector) {
  for (Index d : {2, 3, 4}) {
    const auto n = bloch_vector(DensityMatrix<double>::maximally_mixed(d));
    EXPECT_EQ(n.size(), d * d - 1);
    EXPECT_LT(n.cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Bloch, GroundStateQubit) {
  const auto n = bloch_vector(DensityMatrix<double>::pure(PureState<double>::basis_state(2, 0)));
  ASSERT_EQ(n.size(), 3);
  EXPECT_LT(std::abs(n(0) - C(1, 0)), 1e-15);  // (0,1): Z
  EXPECT_LT(std::abs(n(1)), 1e-15);            // (1,0): X
  EXPECT_LT(std::abs(n(2)), 1e-15);            // (1,1): XZ
}

TEST(Bloch, PureStatesSaturateBound) {
  Rng rng = make_stream(5, 5);
  for (Index d = 2; d <= 7; ++d) {
    const auto n = bloch_vector(DensityMatrix<double>::pure(random_state(d, rng)));
    EXPECT_NEAR(n.squaredNorm(), static_cast<double>(d - 1), 1e-10);
  }
  for (Index d = 2; d <= 7; ++d) {
    const auto n = bloch_vector(random_density(d, rng));
    EXPECT_LE(n.norm(), std::sqrt(static_cast<double>(d - 1)) + 1e-9);
  }
}

TEST(Bloch, StateFromZeroVector) {
  const auto rho = state_from_bloch<double>(CVector<double>::Zero(8), 3);
  EXPECT_LT((rho.matrix() - identity<double>(3) / 3.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Bloch, StateFromUnitZComponent) {
  CVector<double> n = CVector<double>::Zero(3);
  n(0) = 1.0;
  const auto rho = state_from_bloch<double>(n, 2);
  CMatrix<double> expected = CMatrix<double>::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT((rho.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Bloch, RoundTripRandomDensityD3) {
  Rng rng = make_stream(3, 3);
  const auto rho = random_density(3, rng);
  const auto back = state_from_bloch<double>(bloch_vector(rho), 3);
  EXPECT_LT((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bloch, CoefficientRoundTripProperty) {
  Rng rng = make_stream(4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 2 + trial % 5;
    const auto n = bloch_vector(random_density(d, rng, 1 + trial % d));
    const auto n2 = bloch_vector(state_from_bloch<double>(n, d));
    EXPECT_LT((n - n2).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Bloch, NonphysicalCoefficientsRejected) {
  CVector<double> n = CVector<double>::Zero(3);
  n(0) = 2.0;  // Z coefficient beyond the Bloch ball
  EXPECT_THROW(state_from_bloch<double>(n, 2), NonphysicalState);
  const auto clipped = reconstruct_from_bloch<double>(n, 2, 1e-8, true);
  EXPECT_LT(clipped.min_eigenvalue, -0.4);
  EXPECT_GE(clipped.rho.min_eigenvalue(), -1e-12);
  EXPECT_THROW(state_from_bloch<double>(CVector<double>::Zero(4), 2), DimensionError);
}

TEST(Bloch, HermiticityDefectIsReported) {
  CVector<double> n = CVector<double>::Zero(3);
  n(1) = C(0, 0.2);  // imaginary X coefficient: not Hermitian before symmetrization
  const auto r = reconstruct_from_bloch<double>(n, 2);
  EXPECT_NEAR(r.hermiticity_defect, 0.2, 1e-15);
  EXPECT_LT(hermiticity_defect(r.rho.matrix()), 1e-15);
}

TEST(DensityMatrixTest, Validation) {
  CMatrix<double> m = CMatrix<double>::Identity(2, 2);
  EXPECT_THROW(DensityMatrix<double>{m}, NonphysicalState);  // trace 2
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix<double>{m}, NonphysicalState);  // negative eigenvalue
  m << 0.5, C(0, 0.1), C(0, 0.1), 0.5;
  EXPECT_THROW(DensityMatrix<double>{m}, NonphysicalState);  // not Hermitian
}

TEST(OperatorNorm, Examples) {
  Rng rng = make_stream(6, 6);
  const auto u = haar_unitary(4, rng);
  EXPECT_EQ(operator_norm_distance(u, u), 0.0);
  const double theta = 0.7;
  const CMatrix<double> id = identity<double>(3);
  const CMatrix<double> rotated = std::polar(1.0, theta) * id;
  EXPECT_NEAR(operator_norm_distance(id, rotated), std::abs(C(1, 0) - std::polar(1.0, theta)), 1e-14);
  EXPECT_NEAR(operator_norm_distance(hw_operator<double>(0, 1, 2), hw_operator<double>(1, 0, 2)), std::sqrt(2.0),
              1e-14);
  EXPECT_THROW(operator_norm_distance(identity<double>(2), identity<double>(3)), DimensionError);
}

// Brute-force oracle: sup over many random unit vectors never exceeds the
// operator norm and approaches it.
TEST(OperatorNorm, DominatesSampledSupremum) {
  Rng rng = make_stream(7, 7);
  const CMatrix<double> a = ginibre(5, 5, rng);
  const CMatrix<double> b = ginibre(5, 5, rng);
  const double norm = operator_norm_distance(a, b);
  double best = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const auto psi = random_state(5, rng);
    best = std::max(best, ((a - b) * psi.amplitudes()).norm());
  }
  EXPECT_LE(best, norm + 1e-12);
  EXPECT_GT(best, 0.9 * norm);
}

}  // namespace
