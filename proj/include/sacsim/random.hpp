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

// Seeded random streams and random quantum objects. Uniforms and normals are
// derived from raw 64-bit engine output so that a seed reproduces the same
// numbers on every standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include <Eigen/QR>

#include "sacsim/statespace.hpp"

namespace sacsim {

using Rng = std::mt19937_64;

// Independent stream `stream` derived from a master seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

// Cheap counter-based stream for per-shot draws: SplitMix64 started from a
// hash of (seed, index). Seeding is a few arithmetic ops, unlike Rng.
class ShotStream {
 public:
  ShotStream(std::uint64_t seed, std::uint64_t index) : state_(mix(seed ^ mix(index + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ull); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// FNV-1a of a component name, used to give named components their own stream.
inline std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <typename Real = double>
CMatrix<Real> ginibre(Index rows, Index cols, Rng& rng) {
  CMatrix<Real> g(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const Real re = static_cast<Real>(standard_normal(rng));
      const Real im = static_cast<Real>(standard_normal(rng));
      g(r, c) = Complex<Real>(re, im);
    }
  }
  return g;
}

template <typename Real = double>
PureState<Real> random_state(Index d, Rng& rng) {
  return PureState<Real>::normalized(ginibre<Real>(d, 1, rng).col(0));
}

// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases
// absorbed into Q.
template <typename Real = double>
CMatrix<Real> haar_unitary(Index d, Rng& rng) {
  const CMatrix<Real> g = ginibre<Real>(d, d, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ() * identity<Real>(d);
  const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index i = 0; i < d; ++i) {
    const Complex<Real> diag = r(i, i);
    const Real mag = std::abs(diag);
    if (mag > Real(0)) q.col(i) *= diag / mag;
  }
  return q;
}

template <typename Real = double>
CMatrix<Real> random_hermitian(Index d, Rng& rng) {
  const CMatrix<Real> g = ginibre<Real>(d, d, rng);
  return (g + g.adjoint()) / Real(2);
}

// Random full-rank (or rank-`rank`) density matrix from a Wishart draw.
template <typename Real = double>
DensityMatrix<Real> random_density(Index d, Rng& rng, Index rank = 0) {
  const Index cols = rank > 0 ? rank : d;
  const CMatrix<Real> g = ginibre<Real>(d, cols, rng);
  CMatrix<Real> w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix<Real>::symmetrized(w);
}

}  // namespace sacsim
