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

// Symmetric Trotter-Suzuki product formulas for k-local Hamiltonians on
// n parties of dimension d, and measured error scaling.
//
// Parties are ordered most significant first: party 0 is the leftmost
// Kronecker factor. Order chi = 1 is the symmetric second-order splitting
// U_1(tau) = prod_l U_l(tau/2) prod_rev U_l(tau/2); order chi uses the
// five-fold Suzuki recursion
//   U_p(tau) = U_{p-1}(s tau)^2 U_{p-1}((1 - 4s) tau) U_{p-1}(s tau)^2,
//   s = 1 / (4 - 4^{1/(2p-1)}).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sacsim/dynamics.hpp"
#include "sacsim/linalg.hpp"
#include "sacsim/types.hpp"

namespace sacsim {

// Largest total Hilbert dimension for dense plan execution.
inline constexpr Index kMaxTrotterDim = 4096;

template <typename Real = double>
struct LocalTerm {
  std::vector<int> support;  // distinct parties
  CMatrix<Real> matrix;      // acts on the support parties in the listed order
};

template <typename Real = double>
class LocalHamiltonian {
 public:
  LocalHamiltonian(int parties, Index local_dim, std::vector<LocalTerm<Real>> terms, Real tol = Real(1e-10))
      : n_(parties), d_(local_dim), terms_(std::move(terms)) {
    if (n_ < 1 || d_ < 2) throw InvalidArgument("LocalHamiltonian: need n >= 1 parties of dimension >= 2");
    if (terms_.empty()) throw InvalidArgument("LocalHamiltonian: no terms");
    for (const auto& term : terms_) {
      if (term.support.empty()) throw InvalidArgument("LocalHamiltonian: empty support");
      std::vector<int> sorted = term.support;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("LocalHamiltonian: repeated party in support");
      }
      if (sorted.front() < 0 || sorted.back() >= n_) throw InvalidArgument("LocalHamiltonian: party out of range");
      Index expected = 1;
      for (std::size_t i = 0; i < term.support.size(); ++i) expected *= d_;
      if (term.matrix.rows() != expected || term.matrix.cols() != expected) {
        throw DimensionError("LocalHamiltonian: term matrix does not match its support");
      }
      if (hermiticity_defect(term.matrix) > tol) throw InvalidArgument("LocalHamiltonian: term is not Hermitian");
    }
  }

  int parties() const { return n_; }
  Index local_dim() const { return d_; }
  const std::vector<LocalTerm<Real>>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  // Largest support size k.
  int locality() const {
    std::size_t k = 0;
    for (const auto& t : terms_) k = std::max(k, t.support.size());
    return static_cast<int>(k);
  }

  // d^n, saturating at max Index.
  Index total_dim() const {
    Index out = 1;
    for (int i = 0; i < n_; ++i) {
      if (out > std::numeric_limits<Index>::max() / d_) return std::numeric_limits<Index>::max();
      out *= d_;
    }
    return out;
  }

  // Term lambda as a d^n x d^n matrix.
  CMatrix<Real> embedded_term(int lambda) const {
    const auto& term = terms_.at(static_cast<std::size_t>(lambda));
    const Index dim = checked_dim();
    const Index k = static_cast<Index>(term.support.size());
    const Index sub_dim = term.matrix.rows();
    std::vector<Index> stride(static_cast<std::size_t>(n_));
    Index s = 1;
    for (int p = n_ - 1; p >= 0; --p) {
      stride[static_cast<std::size_t>(p)] = s;
      s *= d_;
    }
    CMatrix<Real> out = CMatrix<Real>::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
      // Sub-index of `col` on the support and the column with the support zeroed.
      Index sub = 0;
      Index rest = col;
      for (Index i = 0; i < k; ++i) {
        const Index st = stride[static_cast<std::size_t>(term.support[static_cast<std::size_t>(i)])];
        const Index digit = (col / st) % d_;
        sub = sub * d_ + digit;
        rest -= digit * st;
      }
      for (Index sub_row = 0; sub_row < sub_dim; ++sub_row) {
        const Complex<Real> v = term.matrix(sub_row, sub);
        if (v == Complex<Real>(0)) continue;
        Index row = rest;
        Index rem = sub_row;
        for (Index i = k - 1; i >= 0; --i) {
          row += (rem % d_) * stride[static_cast<std::size_t>(term.support[static_cast<std::size_t>(i)])];
          rem /= d_;
        }
        out(row, col) += v;
      }
    }
    return out;
  }

  CMatrix<Real> full_matrix() const {
    CMatrix<Real> h = embedded_term(0);
    for (int l = 1; l < term_count(); ++l) h += embedded_term(l);
    return h;
  }

 private:
  Index checked_dim() const {
    const Index dim = total_dim();
    if (dim > kMaxTrotterDim) {
      throw InvalidArgument("LocalHamiltonian: total dimension " + std::to_string(dim) + " exceeds " +
                            std::to_string(kMaxTrotterDim));
    }
    return dim;
  }

  int n_;
  Index d_;
  std::vector<LocalTerm<Real>> terms_;
};

template <typename Real = double>
struct PlanStep {
  int term;
  Real duration;
};

template <typename Real = double>
struct TrotterPlan {
  std::vector<PlanStep<Real>> steps;  // execution order
  int chi = 1;
  int r = 1;
  Real t = Real(0);
  Real tau = Real(0);
  std::vector<Real> s_values;  // s_p for p = 2..chi
};

template <typename Real = double>
Real suzuki_s(int p) {
  if (p < 2) throw InvalidArgument("suzuki_s: level must be >= 2");
  return Real(1) / (Real(4) - std::pow(Real(4), Real(1) / Real(2 * p - 1)));
}

namespace detail {

template <typename Real>
void append_suzuki(std::vector<PlanStep<Real>>& out, int p, Real tau, int terms) {
  if (p == 1) {
    for (int l = 0; l < terms; ++l) out.push_back({l, tau / Real(2)});
    for (int l = terms - 1; l >= 0; --l) out.push_back({l, tau / Real(2)});
    return;
  }
  const Real s = suzuki_s<Real>(p);
  append_suzuki(out, p - 1, s * tau, terms);
  append_suzuki(out, p - 1, s * tau, terms);
  append_suzuki(out, p - 1, (Real(1) - Real(4) * s) * tau, terms);
  append_suzuki(out, p - 1, s * tau, terms);
  append_suzuki(out, p - 1, s * tau, terms);
}

}  // namespace detail

template <typename Real>
TrotterPlan<Real> suzuki_plan(const LocalHamiltonian<Real>& h, Real t, int r, int chi) {
  if (r < 1) throw InvalidArgument("suzuki_plan: r must be >= 1");
  if (chi < 1) throw InvalidArgument("suzuki_plan: chi must be >= 1");
  if (chi > 6) throw InvalidArgument("suzuki_plan: chi above 6 is not supported (plan length 5^(chi-1))");
  TrotterPlan<Real> plan;
  plan.chi = chi;
  plan.r = r;
  plan.t = t;
  plan.tau = t / Real(r);
  for (int p = 2; p <= chi; ++p) plan.s_values.push_back(suzuki_s<Real>(p));
  std::vector<PlanStep<Real>> one;
  detail::append_suzuki(one, chi, plan.tau, h.term_count());
  plan.steps.reserve(one.size() * static_cast<std::size_t>(r));
  for (int rep = 0; rep < r; ++rep) plan.steps.insert(plan.steps.end(), one.begin(), one.end());
  return plan;
}

template <typename Real = double>
struct PlanExecution {
  CMatrix<Real> unitary;
  std::optional<SymplecticMap<Real>> map;
  std::size_t exponentials = 0;  // distinct (term, duration) exponentials computed
};

// exp(-i duration H_lambda) on the full space.
template <typename Real>
CMatrix<Real> term_propagator(const LocalHamiltonian<Real>& h, int lambda, Real duration) {
  return hermitian_propagator<Real>(h.embedded_term(lambda), duration);
}

// Multiplies the term exponentials in plan order (first step applied
// first). The symplectic image is S_U = R(U), R being a homomorphism, so
// it equals the composition of the per-term maps.
template <typename Real>
PlanExecution<Real> execute_plan(const TrotterPlan<Real>& plan, const LocalHamiltonian<Real>& h, bool emit_map = true) {
  const Index dim = h.total_dim();
  if (dim > kMaxTrotterDim) throw InvalidArgument("execute_plan: total dimension exceeds " + std::to_string(kMaxTrotterDim));
  std::vector<CMatrix<Real>> embedded;
  for (int l = 0; l < h.term_count(); ++l) embedded.push_back(h.embedded_term(l));
  std::map<std::pair<int, Real>, CMatrix<Real>> cache;
  CMatrix<Real> u = identity<Real>(dim);
  for (const auto& step : plan.steps) {
    if (step.term < 0 || step.term >= h.term_count()) throw InvalidArgument("execute_plan: plan refers to a missing term");
    const auto key = std::make_pair(step.term, step.duration);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, hermitian_propagator<Real>(embedded[static_cast<std::size_t>(step.term)], step.duration))
               .first;
    }
    u = it->second * u;
  }
  PlanExecution<Real> out{std::move(u), std::nullopt, cache.size()};
  if (emit_map) out.map = unitary_to_symplectic<Real>(out.unitary, Real(1e-9));
  return out;
}

template <typename Real = double>
struct ScanRow {
  int r;
  Real error;
  Real bound;  // t^(2 chi + 1) / r^(2 chi)
};

template <typename Real = double>
struct ScanResult {
  int chi = 1;
  Real t = Real(0);
  std::vector<ScanRow<Real>> rows;
  std::optional<Real> slope;  // log-log least squares of error vs r
  bool fit_skipped = false;   // fewer than two errors above the roundoff floor
  int fit_points = 0;
};

inline constexpr double kScanRoundoffFloor = 1e-12;

// Operator-norm distance between each plan and exp(-i t H).
template <typename Real>
ScanResult<Real> error_scan(const LocalHamiltonian<Real>& h, Real t, int chi, const std::vector<int>& r_values) {
  ScanResult<Real> res;
  res.chi = chi;
  res.t = t;
  const CMatrix<Real> exact = hermitian_propagator<Real>(h.full_matrix(), t);
  std::vector<Real> xs;
  std::vector<Real> ys;
  for (const int r : r_values) {
    if (r < 1) throw InvalidArgument("error_scan: r values must be >= 1");
    const auto exec = execute_plan(suzuki_plan(h, t, r, chi), h, false);
    const Real err = operator_norm_distance<Real>(exec.unitary, exact);
    const Real bound = std::pow(std::abs(t), Real(2 * chi + 1)) / std::pow(Real(r), Real(2 * chi));
    res.rows.push_back({r, err, bound});
    if (err >= Real(kScanRoundoffFloor)) {
      xs.push_back(std::log(Real(r)));
      ys.push_back(std::log(err));
    }
  }
  res.fit_points = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    res.fit_skipped = true;
    return res;
  }
  const Real n = Real(xs.size());
  Real mx = Real(0), my = Real(0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  Real sxy = Real(0), sxx = Real(0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= Real(0)) {
    res.fit_skipped = true;
    return res;
  }
  res.slope = sxy / sxx;
  return res;
}

// Hidden particles per basis for an n-party system: d^n.
template <typename Real>
Index hidden_particle_count(const LocalHamiltonian<Real>& h) {
  return h.total_dim();
}

}  // namespace sacsim
