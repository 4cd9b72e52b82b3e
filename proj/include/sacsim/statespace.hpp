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

// State representations and the quantum <-> phase-space mapping.
//
// A pure state psi of dimension d is encoded, relative to an orthonormal
// basis {b_i}, as d "hidden particles" with position q_i = Re<b_i|psi> and
// momentum p_i = Im<b_i|psi>. Normalization of psi becomes the constraint
// sum_i (q_i^2 + p_i^2) = 1. Global phase is carried by (q, p) and is never
// normalized away here.
//
// The Heisenberg-Weyl operators M_jk = X_j Z_k, with
//   X_j = sum_i |i><i+j|,   Z_k = sum_l w^{lk} |l><l|,   w = exp(2 pi i / d),
// form an orthogonal operator basis, tr(M_jk^dag M_j'k') = d delta delta.
// Coefficient lists over that basis are always ordered j-major:
// (0,1), (0,2), ..., (1,0), (1,1), ... with (0,0) omitted for Bloch vectors.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sacsim/linalg.hpp"
#include "sacsim/types.hpp"

namespace sacsim {

enum class BasisKind { computational, heisenberg_weyl };

template <typename Real = double>
class PureState {
 public:
  explicit PureState(CVector<Real> amps, Real tol = Real(1e-12)) : amps_(std::move(amps)) {
    if (amps_.size() < 1) throw InvalidArgument("PureState: dimension must be >= 1");
    const Real n2 = amps_.squaredNorm();
    if (std::abs(n2 - Real(1)) > tol) {
      throw InvalidArgument("PureState: amplitudes not normalized (|psi|^2 = " +
                            std::to_string(static_cast<double>(n2)) + ")");
    }
  }

  static PureState normalized(const CVector<Real>& v) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw InvalidArgument("PureState: zero vector");
    return PureState(v / n);
  }

  static PureState basis_state(Index d, Index i) {
    if (i < 0 || i >= d) throw InvalidArgument("PureState: basis index out of range");
    CVector<Real> v = CVector<Real>::Zero(d);
    v(i) = Real(1);
    return PureState(std::move(v));
  }

  Index dim() const { return amps_.size(); }
  const CVector<Real>& amplitudes() const { return amps_; }
  Complex<Real> operator[](Index i) const { return amps_(i); }

  // pi_i = i conj(psi_i), the conjugate momentum of psi_i.
  CVector<Real> conjugate_momenta() const {
    return Complex<Real>(0, 1) * amps_.conjugate();
  }

 private:
  CVector<Real> amps_;
};

template <typename Real = double>
class BasisLabel {
 public:
  // `vectors` holds the basis as columns; `eigenvalues(m)` is the eigenvalue
  // of M_jk attached to column m (all ones for the computational basis).
  BasisLabel(BasisKind kind, int j, int k, CMatrix<Real> vectors, CVector<Real> eigenvalues,
             Real tol = Real(1e-12))
      : kind_(kind), j_(j), k_(k), vectors_(std::move(vectors)), eigenvalues_(std::move(eigenvalues)) {
    if (vectors_.rows() != vectors_.cols() || vectors_.rows() < 1) {
      throw DimensionError("BasisLabel: basis matrix must be square and non-empty");
    }
    require_same_dim(eigenvalues_.size(), vectors_.cols(), "BasisLabel eigenvalues");
    if (unitarity_defect(vectors_) > tol) {
      throw InvalidArgument("BasisLabel: basis vectors are not orthonormal");
    }
  }

  static BasisLabel computational(Index d) {
    return BasisLabel(BasisKind::computational, 0, 0, identity<Real>(d), CVector<Real>::Ones(d));
  }

  BasisKind kind() const { return kind_; }
  int j() const { return j_; }
  int k() const { return k_; }
  Index dim() const { return vectors_.rows(); }
  const CMatrix<Real>& vectors() const { return vectors_; }
  const CVector<Real>& eigenvalues() const { return eigenvalues_; }

  std::string name() const {
    if (kind_ == BasisKind::computational) return "computational";
    return "hw(" + std::to_string(j_) + "," + std::to_string(k_) + ")";
  }

 private:
  BasisKind kind_;
  int j_;
  int k_;
  CMatrix<Real> vectors_;
  CVector<Real> eigenvalues_;
};

template <typename Real = double>
class HiddenParticleSet {
 public:
  HiddenParticleSet(BasisLabel<Real> basis, RVector<Real> q, RVector<Real> p)
      : basis_(std::move(basis)), q_(std::move(q)), p_(std::move(p)) {
    require_same_dim(q_.size(), basis_.dim(), "HiddenParticleSet q");
    require_same_dim(p_.size(), basis_.dim(), "HiddenParticleSet p");
  }

  // Build from stacked phase-space coordinates y = (q_1..q_d, p_1..p_d).
  static HiddenParticleSet from_stacked(BasisLabel<Real> basis, const RVector<Real>& y) {
    const Index d = basis.dim();
    require_same_dim(y.size(), 2 * d, "HiddenParticleSet stacked");
    return HiddenParticleSet(std::move(basis), y.head(d), y.tail(d));
  }

  Index dim() const { return q_.size(); }
  const BasisLabel<Real>& basis() const { return basis_; }
  const RVector<Real>& q() const { return q_; }
  const RVector<Real>& p() const { return p_; }

  RVector<Real> stacked() const {
    RVector<Real> y(2 * dim());
    y << q_, p_;
    return y;
  }

  // Amplitudes in the coordinates of basis(): q + i p.
  CVector<Real> coordinates() const {
    CVector<Real> c(dim());
    for (Index i = 0; i < dim(); ++i) c(i) = Complex<Real>(q_(i), p_(i));
    return c;
  }

  Real norm_squared() const { return q_.squaredNorm() + p_.squaredNorm(); }

 private:
  BasisLabel<Real> basis_;
  RVector<Real> q_;
  RVector<Real> p_;
};

// Positivity and trace/Hermiticity thresholds used when validating a
// density matrix.
template <typename Real = double>
struct DensityChecks {
  Real hermitian = Real(1e-12);
  Real trace = Real(1e-12);
  Real min_eigenvalue = Real(-1e-10);
};

template <typename Real = double>
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix<Real> rho, const DensityChecks<Real>& checks = {})
      : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
      throw DimensionError("DensityMatrix: matrix must be square and non-empty");
    }
    if (hermiticity_defect(rho_) > checks.hermitian) {
      throw NonphysicalState("DensityMatrix: not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex<Real>(1)) > checks.trace) {
      throw NonphysicalState("DensityMatrix: trace differs from 1");
    }
    const Real lo = min_eigenvalue();
    if (lo < checks.min_eigenvalue) {
      throw NonphysicalState("DensityMatrix: negative eigenvalue " +
                             std::to_string(static_cast<double>(lo)));
    }
  }

  // Hermitian-symmetrize before validating; for matrices produced by
  // floating-point pipelines.
  static DensityMatrix symmetrized(const CMatrix<Real>& m, DensityChecks<Real> checks = {}) {
    CMatrix<Real> h = (m + m.adjoint()) / Real(2);
    return DensityMatrix(std::move(h), checks);
  }

  static DensityMatrix pure(const PureState<Real>& psi) {
    const CMatrix<Real> m = psi.amplitudes() * psi.amplitudes().adjoint();
    return symmetrized(m);
  }

  static DensityMatrix maximally_mixed(Index d) {
    return DensityMatrix(identity<Real>(d) / Real(d));
  }

  Index dim() const { return rho_.rows(); }
  const CMatrix<Real>& matrix() const { return rho_; }
  Complex<Real> operator()(Index i, Index j) const { return rho_(i, j); }

  Real purity() const { return (rho_ * rho_).trace().real(); }

  Real min_eigenvalue() const {
    const CMatrix<Real> h = (rho_ + rho_.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  CMatrix<Real> rho_;
};

// <psi| rho |psi>
template <typename Real>
Real fidelity(const DensityMatrix<Real>& rho, const PureState<Real>& psi) {
  require_same_dim(rho.dim(), psi.dim(), "fidelity");
  return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

// ---------------------------------------------------------------------------
// Phase-space mapping

template <typename Real>
HiddenParticleSet<Real> to_phase_space(const PureState<Real>& state, const BasisLabel<Real>& basis) {
  require_same_dim(state.dim(), basis.dim(), "to_phase_space");
  const CVector<Real> c = basis.vectors().adjoint() * state.amplitudes();
  return HiddenParticleSet<Real>(basis, c.real(), c.imag());
}

template <typename Real>
PureState<Real> from_phase_space(const HiddenParticleSet<Real>& hps, Real tol = Real(1e-9)) {
  const Real n2 = hps.norm_squared();
  if (!(std::abs(n2 - Real(1)) <= tol)) {
    throw InvalidParticleSet("from_phase_space: sum(q^2 + p^2) = " +
                             std::to_string(static_cast<double>(n2)) + " deviates from 1");
  }
  const CVector<Real> psi = hps.basis().vectors() * hps.coordinates();
  return PureState<Real>(psi / psi.norm());
}

// ---------------------------------------------------------------------------
// Heisenberg-Weyl operators

namespace detail {

// w^m with m reduced mod d, so large exponents stay exact.
template <typename Real>
Complex<Real> root_of_unity(long long m, long long d) {
  long long r = m % d;
  if (r < 0) r += d;
  return std::polar(Real(1), Real(2) * std::numbers::pi_v<Real> * Real(r) / Real(d));
}

inline void check_hw_indices(int j, int k, Index d) {
  if (d < 1) throw InvalidArgument("Heisenberg-Weyl: dimension must be >= 1");
  if (j < 0 || k < 0 || j >= d || k >= d) {
    throw InvalidArgument("Heisenberg-Weyl: index out of range (j=" + std::to_string(j) +
                          ", k=" + std::to_string(k) + ", d=" + std::to_string(d) + ")");
  }
}

}  // namespace detail

// X_j = sum_i |i><i+j| (mod d)
template <typename Real = double>
CMatrix<Real> hw_shift(int j, Index d) {
  detail::check_hw_indices(j, 0, d);
  CMatrix<Real> x = CMatrix<Real>::Zero(d, d);
  for (Index i = 0; i < d; ++i) x(i, (i + j) % d) = Real(1);
  return x;
}

// Z_k = sum_l w^{lk} |l><l|
template <typename Real = double>
CMatrix<Real> hw_clock(int k, Index d) {
  detail::check_hw_indices(0, k, d);
  CMatrix<Real> z = CMatrix<Real>::Zero(d, d);
  for (Index l = 0; l < d; ++l) z(l, l) = detail::root_of_unity<Real>(static_cast<long long>(l) * k, d);
  return z;
}

// M_jk = X_j Z_k; a monomial matrix with M[i, i+j] = w^{(i+j)k}.
template <typename Real = double>
CMatrix<Real> hw_operator(int j, int k, Index d) {
  detail::check_hw_indices(j, k, d);
  CMatrix<Real> m = CMatrix<Real>::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const Index col = (i + j) % d;
    m(i, col) = detail::root_of_unity<Real>(static_cast<long long>(col) * k, d);
  }
  return m;
}

// All (j, k) pairs in j-major order, optionally skipping (0, 0).
inline std::vector<std::pair<int, int>> hw_index_pairs(Index d, bool include_identity) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      if (!include_identity && j == 0 && k == 0) continue;
      out.emplace_back(j, k);
    }
  }
  return out;
}

// Eigenbasis B_jk of M_jk.
//
// M^d = mu * 1 with mu = w^{-jk d(d-1)/2}, so every eigenvalue has the form
// c w^m with c = mu^{1/d} (principal root). The eigenprojector for
// lambda_m is the group average P_m = (1/d) sum_s (M / lambda_m)^s.
// Eigenvalues are ordered by m; inside each eigenspace the projector columns
// are orthonormalized with column pivoting and every vector is phase-fixed
// so its first nonzero component is real positive.
template <typename Real = double>
BasisLabel<Real> hw_eigenbasis(int j, int k, Index d) {
  detail::check_hw_indices(j, k, d);
  if (j == 0 && k == 0) return BasisLabel<Real>::computational(d);

  const long long dd = d;
  // exponent of w in mu, reduced mod d (d(d-1)/2 computed before the product)
  const long long tri = (dd % 2 == 0) ? (dd / 2) * (dd - 1) : dd * ((dd - 1) / 2);
  long long mu_exp = (-static_cast<long long>(j) * k % dd) * (tri % dd) % dd;
  if (mu_exp < 0) mu_exp += dd;
  // c = exp(2 pi i mu_exp / d^2)
  const Complex<Real> c = std::polar(
      Real(1), Real(2) * std::numbers::pi_v<Real> * Real(mu_exp) / (Real(d) * Real(d)));

  const CMatrix<Real> m = hw_operator<Real>(j, k, d);

  std::vector<CMatrix<Real>> projectors(static_cast<std::size_t>(d), CMatrix<Real>::Zero(d, d));
  std::vector<Complex<Real>> lambdas(static_cast<std::size_t>(d));
  for (Index mi = 0; mi < d; ++mi) lambdas[static_cast<std::size_t>(mi)] = c * detail::root_of_unity<Real>(mi, dd);

  // power = M^s, updated monomially: (P M)[r, col] = P[r, col - j] w^{col k}
  CMatrix<Real> power = identity<Real>(d);
  for (Index s = 0; s < d; ++s) {
    for (Index mi = 0; mi < d; ++mi) {
      // conj(lambda_m)^s = exp(-2 pi i (mu_exp + m d) s / d^2), reduced exactly
      const long long e = ((mu_exp + static_cast<long long>(mi) * dd) % (dd * dd)) * s % (dd * dd);
      const Complex<Real> weight = std::conj(detail::root_of_unity<Real>(e, dd * dd));
      projectors[static_cast<std::size_t>(mi)] += weight * power;
    }
    CMatrix<Real> next(d, d);
    for (Index col = 0; col < d; ++col) {
      const Index src = ((col - j) % d + d) % d;
      next.col(col) = power.col(src) * m(src, col);
    }
    power = std::move(next);
  }

  CMatrix<Real> vectors(d, d);
  CVector<Real> eigenvalues(d);
  Index filled = 0;
  for (Index mi = 0; mi < d; ++mi) {
    CMatrix<Real>& proj = projectors[static_cast<std::size_t>(mi)];
    proj /= Real(d);
    const Index rank = static_cast<Index>(std::llround(static_cast<double>(proj.trace().real())));
    if (rank == 0) continue;
    if (filled + rank > d) throw InvariantViolation("hw_eigenbasis: eigenspace ranks exceed d");
    const CMatrix<Real> q = pivoted_orthonormalize<Real>(proj, rank);
    for (Index r = 0; r < rank; ++r) {
      vectors.col(filled) = phase_fixed<Real>(q.col(r), Real(1e-8));
      eigenvalues(filled) = lambdas[static_cast<std::size_t>(mi)];
      ++filled;
    }
  }
  if (filled != d) throw InvariantViolation("hw_eigenbasis: eigenspace ranks do not sum to d");
  return BasisLabel<Real>(BasisKind::heisenberg_weyl, j, k, std::move(vectors), std::move(eigenvalues));
}

// ---------------------------------------------------------------------------
// Bloch vectors over the Heisenberg-Weyl basis

// tr(M_jk^dag A)
template <typename Real>
Complex<Real> hw_coefficient(const CMatrix<Real>& a, int j, int k) {
  const Index d = a.rows();
  Complex<Real> acc(0);
  for (Index i = 0; i < d; ++i) {
    const Index col = (i + j) % d;
    acc += std::conj(detail::root_of_unity<Real>(static_cast<long long>(col) * k, d)) * a(i, col);
  }
  return acc;
}

// n_jk = tr(M_jk^dag rho) for (j,k) != (0,0), j-major order.
template <typename Real>
CVector<Real> bloch_vector(const DensityMatrix<Real>& rho) {
  const Index d = rho.dim();
  const auto pairs = hw_index_pairs(d, false);
  CVector<Real> n(static_cast<Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    n(static_cast<Index>(i)) = hw_coefficient<Real>(rho.matrix(), pairs[i].first, pairs[i].second);
  }
  return n;
}

template <typename Real>
struct BlochReconstruction {
  DensityMatrix<Real> rho;
  Real hermiticity_defect;  // before symmetrization
  Real min_eigenvalue;
};

// rho = (1 + sum n_jk M_jk) / d, Hermitian-symmetrized. Throws
// NonphysicalState when the smallest eigenvalue is below -nonphysical_tol;
// with `clip` set, negative eigenvalues are clipped and the trace restored.
template <typename Real>
BlochReconstruction<Real> reconstruct_from_bloch(const CVector<Real>& n, Index d,
                                                 Real nonphysical_tol = Real(1e-8), bool clip = false) {
  if (d < 1) throw InvalidArgument("state_from_bloch: dimension must be >= 1");
  require_same_dim(n.size(), d * d - 1, "state_from_bloch coefficients");
  CMatrix<Real> raw = identity<Real>(d);
  const auto pairs = hw_index_pairs(d, false);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Complex<Real> coeff = n(static_cast<Index>(i));
    if (coeff == Complex<Real>(0)) continue;
    const int j = pairs[i].first;
    const int k = pairs[i].second;
    for (Index r = 0; r < d; ++r) {
      const Index col = (r + j) % d;
      raw(r, col) += coeff * detail::root_of_unity<Real>(static_cast<long long>(col) * k, d);
    }
  }
  raw /= Real(d);
  const Real defect = hermiticity_defect(raw);
  CMatrix<Real> h = (raw + raw.adjoint()) / Real(2);

  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h);
  const Real lo = es.eigenvalues().minCoeff();
  if (lo < -nonphysical_tol) {
    if (!clip) {
      throw NonphysicalState("state_from_bloch: minimum eigenvalue " +
                             std::to_string(static_cast<double>(lo)));
    }
    RVector<Real> vals = es.eigenvalues().cwiseMax(Real(0));
    vals /= vals.sum();
    h = es.eigenvectors() * vals.template cast<Complex<Real>>().asDiagonal() * es.eigenvectors().adjoint();
    h = (h + h.adjoint()) / Real(2);
  }
  DensityChecks<Real> checks;
  checks.hermitian = Real(1e-12);
  checks.trace = Real(1e-10);
  checks.min_eigenvalue = -std::max(nonphysical_tol, Real(1e-10));
  return {DensityMatrix<Real>(std::move(h), checks), defect, lo};
}

template <typename Real>
DensityMatrix<Real> state_from_bloch(const CVector<Real>& n, Index d, Real nonphysical_tol = Real(1e-8)) {
  return reconstruct_from_bloch<Real>(n, d, nonphysical_tol, false).rho;
}

// sup_psi ||(A - B) psi||, the largest singular value of A - B.
template <typename Real>
Real operator_norm_distance(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  require_same_dim(a.rows(), b.rows(), "operator_norm_distance rows");
  require_same_dim(a.cols(), b.cols(), "operator_norm_distance cols");
  return spectral_norm<Real>(a - b);
}

}  // namespace sacsim
