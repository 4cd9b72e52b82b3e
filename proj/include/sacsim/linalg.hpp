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

// Dense helpers shared by every module: Kronecker products, structural
// defects, norms and exponentials.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "sacsim/types.hpp"

namespace sacsim {

template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
CMatrix<Real> identity(Index d) {
  return CMatrix<Real>::Identity(d, d);
}

// max_ij |A_ij - conj(A_ji)|
template <typename Real>
Real hermiticity_defect(const CMatrix<Real>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<Real>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// max_ij |(U^dagger U - 1)_ij|
template <typename Real>
Real unitarity_defect(const CMatrix<Real>& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<Real>::infinity();
  return (u.adjoint() * u - identity<Real>(u.rows())).cwiseAbs().maxCoeff();
}

// Largest singular value.
template <typename Real>
Real spectral_norm(const CMatrix<Real>& a) {
  if (a.size() == 0) return Real(0);
  Eigen::JacobiSVD<CMatrix<Real>> svd(a);
  return svd.singularValues()(0);
}

// Half the nuclear norm of a Hermitian difference.
template <typename Real>
Real trace_distance(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  require_same_dim(a.rows(), b.rows(), "trace_distance");
  const CMatrix<Real> diff = a - b;
  const CMatrix<Real> herm = (diff + diff.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum() / Real(2);
}

// exp(-i t H) for Hermitian H through its eigendecomposition.
template <typename Real>
CMatrix<Real> hermitian_propagator(const CMatrix<Real>& h, Real t) {
  if (t == Real(0)) return CMatrix<Real>::Identity(h.rows(), h.cols());
  const CMatrix<Real> herm = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm);
  const auto& vals = es.eigenvalues();
  CVector<Real> phases(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    phases(i) = std::polar(Real(1), -vals(i) * t);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(A) for a general complex matrix (Pade scaling and squaring).
template <typename Real>
CMatrix<Real> expm(const CMatrix<Real>& a) {
  return a.exp();
}

// Row-major vectorization |A> = sum_ij A_ij |i j>.
template <typename Real>
CVector<Real> vec_row_major(const CMatrix<Real>& a) {
  CVector<Real> v(a.size());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

template <typename Real>
CMatrix<Real> unvec_row_major(const CVector<Real>& v, Index rows, Index cols) {
  require_same_dim(v.size(), rows * cols, "unvec_row_major");
  CMatrix<Real> a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  }
  return a;
}

// Modified Gram-Schmidt with pivoting on the largest residual column.
// Returns `rank` orthonormal columns spanning the leading part of range(a).
// Ties go to the lowest column index, so the output is reproducible.
template <typename Real>
CMatrix<Real> pivoted_orthonormalize(const CMatrix<Real>& a, Index rank) {
  CMatrix<Real> residual = a;
  CMatrix<Real> q(a.rows(), rank);
  std::vector<bool> used(static_cast<std::size_t>(a.cols()), false);
  for (Index r = 0; r < rank; ++r) {
    Index best = -1;
    Real best_norm = Real(-1);
    for (Index c = 0; c < residual.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const Real n = residual.col(c).norm();
      // strict comparison with a small relative margin keeps the lowest
      // index among numerically equal candidates
      if (n > best_norm * (Real(1) + Real(1e-9)) || best < 0) {
        best = c;
        best_norm = n;
      }
    }
    if (best < 0 || best_norm <= Real(0)) {
      throw InvariantViolation("pivoted_orthonormalize: rank deficient input");
    }
    used[static_cast<std::size_t>(best)] = true;
    CVector<Real> v = residual.col(best) / best_norm;
    // one reorthogonalization pass against already accepted columns
    for (Index k = 0; k < r; ++k) v -= q.col(k) * q.col(k).dot(v);
    v.normalize();
    q.col(r) = v;
    for (Index c = 0; c < residual.cols(); ++c) {
      if (!used[static_cast<std::size_t>(c)]) residual.col(c) -= v * v.dot(residual.col(c));
    }
  }
  return q;
}

// Rotate the phase of v so that its first entry with modulus above `tol`
// is real and positive.
template <typename Real>
CVector<Real> phase_fixed(CVector<Real> v, Real tol) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      const Complex<Real> phase = std::conj(v(i)) / std::abs(v(i));
      v *= phase;
      v(i) = Complex<Real>(std::abs(v(i)), Real(0));
      break;
    }
  }
  return v;
}

}  // namespace sacsim
