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

// Hamiltonian flow of hidden particles and discrete symplectic maps.
//
// Phase-space coordinates are stacked as y = (q_1..q_d, p_1..p_d). A complex
// matrix M = X + iY acts on y through its real representation
//
//   R(M) = [[X, -Y],
//           [Y,  X]],
//
// so a unitary U = V + iW becomes S_U = R(U), which is both orthogonal and
// symplectic with respect to Delta = [[0, -1], [1, 0]].
//
// For a Hermitian H written in the particle basis as A + iB, the classical
// energy is E(y) = <psi|H|psi> = y^T R(H) y and Schroedinger evolution reads
//
//   dq/dt =  B q + A p =  (1/2) dE/dp
//   dp/dt = -A q + B p = -(1/2) dE/dq.
//
// The factor 1/2 comes from using q = Re psi, p = Im psi directly rather
// than the canonical pair (psi, i psi*); in those variables the same energy
// generates the flow without the factor.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "sacsim/linalg.hpp"
#include "sacsim/statespace.hpp"

namespace sacsim {

template <typename Real = double>
class QuadraticHamiltonian {
 public:
  using Schedule = std::function<CMatrix<Real>(Real)>;

  explicit QuadraticHamiltonian(CMatrix<Real> h, Real tol = Real(1e-12)) : dim_(h.rows()), tol_(tol), h_(std::move(h)) {
    if (h_.rows() != h_.cols() || dim_ < 1) throw DimensionError("QuadraticHamiltonian: matrix must be square");
    if (hermiticity_defect(h_) > tol_) throw InvalidArgument("QuadraticHamiltonian: matrix is not Hermitian");
  }

  QuadraticHamiltonian(Index dim, Schedule schedule, Real tol = Real(1e-12))
      : dim_(dim), tol_(tol), schedule_(std::move(schedule)) {
    if (dim_ < 1) throw DimensionError("QuadraticHamiltonian: dimension must be >= 1");
    if (!schedule_) throw InvalidArgument("QuadraticHamiltonian: empty schedule");
  }

  Index dim() const { return dim_; }
  bool time_dependent() const { return static_cast<bool>(schedule_); }

  // Matrix at time t; Hermiticity checked on every evaluation.
  CMatrix<Real> at(Real t) const {
    if (!schedule_) return h_;
    CMatrix<Real> h = schedule_(t);
    require_same_dim(h.rows(), dim_, "QuadraticHamiltonian schedule");
    if (hermiticity_defect(h) > tol_) {
      throw InvalidArgument("QuadraticHamiltonian: H(t) is not Hermitian at t=" + std::to_string(static_cast<double>(t)));
    }
    return h;
  }

  const CMatrix<Real>& matrix() const {
    if (schedule_) throw InvalidArgument("QuadraticHamiltonian: time-dependent Hamiltonian has no single matrix");
    return h_;
  }

 private:
  Index dim_;
  Real tol_;
  CMatrix<Real> h_;
  Schedule schedule_;
};

// R(M) = [[Re M, -Im M], [Im M, Re M]]
template <typename Real>
RMatrix<Real> real_representation(const CMatrix<Real>& m) {
  const Index r = m.rows();
  const Index c = m.cols();
  RMatrix<Real> out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

template <typename Real = double>
RMatrix<Real> symplectic_form(Index d) {
  RMatrix<Real> delta = RMatrix<Real>::Zero(2 * d, 2 * d);
  delta.topRightCorner(d, d) = -RMatrix<Real>::Identity(d, d);
  delta.bottomLeftCorner(d, d) = RMatrix<Real>::Identity(d, d);
  return delta;
}

// ||S Delta S^T - Delta||_inf (maximum absolute row sum).
template <typename Real>
Real symplectic_defect(const RMatrix<Real>& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return std::numeric_limits<Real>::infinity();
  const RMatrix<Real> delta = symplectic_form<Real>(s.rows() / 2);
  return (s * delta * s.transpose() - delta).cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Real>
Real orthogonality_defect(const RMatrix<Real>& s) {
  return (s.transpose() * s - RMatrix<Real>::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

template <typename Real = double>
class SymplecticMap {
 public:
  explicit SymplecticMap(RMatrix<Real> s, Real tol = Real(1e-10)) : s_(std::move(s)) {
    if (s_.rows() != s_.cols() || s_.rows() % 2 != 0 || s_.rows() == 0) {
      throw DimensionError("SymplecticMap: matrix must be square with even size");
    }
    const Real defect = symplectic_defect(s_);
    if (!(defect < tol)) {
      throw InvariantViolation("SymplecticMap: S Delta S^T deviates from Delta by " +
                               std::to_string(static_cast<double>(defect)));
    }
  }

  // S_U with its (V, W) blocks retained.
  static SymplecticMap from_unitary(const CMatrix<Real>& u, Real tol = Real(1e-10)) {
    SymplecticMap map(real_representation(u), tol);
    map.unitary_ = u;
    return map;
  }

  static SymplecticMap identity_map(Index d) { return SymplecticMap(RMatrix<Real>::Identity(2 * d, 2 * d)); }

  Index dim() const { return s_.rows() / 2; }
  const RMatrix<Real>& matrix() const { return s_; }
  Real defect() const { return symplectic_defect(s_); }

  bool has_blocks() const { return unitary_.has_value(); }
  // V = Re U, W = Im U when derived from a unitary.
  RMatrix<Real> block_v() const { return s_.topLeftCorner(dim(), dim()); }
  RMatrix<Real> block_w() const { return s_.bottomLeftCorner(dim(), dim()); }
  const std::optional<CMatrix<Real>>& unitary() const { return unitary_; }

  // this * other: apply `other` first.
  SymplecticMap compose(const SymplecticMap& other) const {
    require_same_dim(dim(), other.dim(), "SymplecticMap::compose");
    SymplecticMap out(s_ * other.s_);
    if (unitary_ && other.unitary_) out.unitary_ = (*unitary_) * (*other.unitary_);
    return out;
  }

 private:
  RMatrix<Real> s_;
  std::optional<CMatrix<Real>> unitary_;
};

template <typename Real>
SymplecticMap<Real> unitary_to_symplectic(const CMatrix<Real>& u, Real tol = Real(1e-10)) {
  if (u.rows() != u.cols()) throw DimensionError("unitary_to_symplectic: matrix must be square");
  if (unitarity_defect(u) > tol) throw InvalidArgument("unitary_to_symplectic: matrix is not unitary");
  return SymplecticMap<Real>::from_unitary(u);
}

// S_U expressed in the coordinates of `basis`: R(B^dag U B).
template <typename Real>
SymplecticMap<Real> unitary_to_symplectic(const CMatrix<Real>& u, const BasisLabel<Real>& basis,
                                          Real tol = Real(1e-10)) {
  require_same_dim(u.rows(), basis.dim(), "unitary_to_symplectic basis");
  return unitary_to_symplectic<Real>(CMatrix<Real>(basis.vectors().adjoint() * u * basis.vectors()), tol);
}

template <typename Real>
HiddenParticleSet<Real> apply_symplectic(const SymplecticMap<Real>& s, const HiddenParticleSet<Real>& hps) {
  require_same_dim(s.dim(), hps.dim(), "apply_symplectic");
  return HiddenParticleSet<Real>::from_stacked(hps.basis(), s.matrix() * hps.stacked());
}

// ---------------------------------------------------------------------------
// Classical Hamiltonian and flow

namespace detail {

template <typename Real>
CMatrix<Real> in_basis(const CMatrix<Real>& h, const BasisLabel<Real>& basis) {
  if (basis.kind() == BasisKind::computational) return h;
  return basis.vectors().adjoint() * h * basis.vectors();
}

}  // namespace detail

// E = <psi|H|psi> = y^T R(H_b) y.
template <typename Real>
Real classical_hamiltonian(const CMatrix<Real>& h, const HiddenParticleSet<Real>& hps) {
  require_same_dim(h.rows(), hps.dim(), "classical_hamiltonian");
  const RVector<Real> y = hps.stacked();
  return y.dot(real_representation<Real>(detail::in_basis(h, hps.basis())) * y);
}

template <typename Real>
Real classical_hamiltonian(const QuadraticHamiltonian<Real>& h, const HiddenParticleSet<Real>& hps, Real t = Real(0)) {
  return classical_hamiltonian<Real>(h.at(t), hps);
}

template <typename Real>
struct PhaseVelocity {
  RVector<Real> dq;
  RVector<Real> dp;
};

// Generator G of dy/dt = G y, G = -Delta R(H_b) = R(-i H_b).
template <typename Real>
RMatrix<Real> flow_generator(const CMatrix<Real>& h_b) {
  return real_representation<Real>(CMatrix<Real>(Complex<Real>(0, -1) * h_b));
}

template <typename Real>
PhaseVelocity<Real> flow_field(const QuadraticHamiltonian<Real>& h, const HiddenParticleSet<Real>& hps, Real t = Real(0)) {
  require_same_dim(h.dim(), hps.dim(), "flow_field");
  const RVector<Real> ydot = flow_generator<Real>(detail::in_basis(h.at(t), hps.basis())) * hps.stacked();
  const Index d = hps.dim();
  return {ydot.head(d), ydot.tail(d)};
}

// ---------------------------------------------------------------------------
// Time evolution

enum class Integrator { exact, midpoint };

template <typename Real = double>
struct EvolveOptions {
  Integrator method = Integrator::exact;
  Real dt = Real(1e-3);
  int samples = 200;          // evenly spaced, including t = 0 and the final time
  Real norm_tol = Real(1e-9);  // per-sample constraint check
};

template <typename Real = double>
struct Trajectory {
  std::vector<Real> times;
  std::vector<HiddenParticleSet<Real>> states;
  std::vector<Real> energies;

  const HiddenParticleSet<Real>& final_state() const { return states.back(); }
};

namespace detail {

// Step indices at which samples are recorded, spread evenly over [0, steps].
inline std::vector<long long> sample_steps(long long steps, int samples) {
  std::vector<long long> out;
  if (samples <= 1) {
    out.push_back(steps);
    return out;
  }
  for (int s = 0; s < samples; ++s) {
    const long long idx = static_cast<long long>(std::llround(static_cast<double>(s) * static_cast<double>(steps) /
                                                              static_cast<double>(samples - 1)));
    if (out.empty() || idx != out.back()) out.push_back(idx);
  }
  return out;
}

template <typename Real>
void check_norm(const HiddenParticleSet<Real>& hps, Real tol, Real t) {
  const Real drift = std::abs(hps.norm_squared() - Real(1));
  if (!(drift <= tol)) {
    std::ostringstream msg;
    msg << "evolve: normalization constraint drifted by " << static_cast<double>(drift) << " at t=" << static_cast<double>(t);
    throw InvariantViolation(msg.str());
  }
}

}  // namespace detail

// Evolve hidden particles under H for time t.
//
// exact:    the map S of exp(-i dt_s H) between consecutive samples, built
//           from a Hermitian eigendecomposition (time-independent H only).
// midpoint: implicit midpoint steps of size <= dt. For this linear system a
//           step is the Cayley transform (1 - hG/2)^{-1}(1 + hG/2), which is
//           symplectic and norm preserving up to roundoff. Time-dependent H
//           is frozen at each step midpoint (second order).
template <typename Real>
Trajectory<Real> evolve(const QuadraticHamiltonian<Real>& h, const HiddenParticleSet<Real>& hps0, Real t,
                        const EvolveOptions<Real>& opts = {}) {
  require_same_dim(h.dim(), hps0.dim(), "evolve");
  if (!(t >= Real(0))) throw InvalidArgument("evolve: t must be >= 0");
  if (opts.samples < 1) throw InvalidArgument("evolve: samples must be >= 1");
  const BasisLabel<Real>& basis = hps0.basis();
  const Index d = hps0.dim();

  Trajectory<Real> traj;
  auto record = [&](Real time, const RVector<Real>& y) {
    auto state = HiddenParticleSet<Real>::from_stacked(basis, y);
    detail::check_norm(state, opts.norm_tol, time);
    traj.energies.push_back(classical_hamiltonian(h, state, time));
    traj.times.push_back(time);
    traj.states.push_back(std::move(state));
  };

  if (opts.method == Integrator::exact) {
    if (h.time_dependent()) throw InvalidArgument("evolve: exact method requires a time-independent Hamiltonian");
    const auto marks = detail::sample_steps(std::max(opts.samples - 1, 1), opts.samples);
    const Real denom = Real(std::max(opts.samples - 1, 1));
    const Real step = t / denom;
    const RMatrix<Real> s = step == Real(0)
                                ? RMatrix<Real>::Identity(2 * d, 2 * d)
                                : real_representation<Real>(hermitian_propagator<Real>(detail::in_basis(h.matrix(), basis), step));
    RVector<Real> y = hps0.stacked();
    long long at = 0;
    for (const long long mark : marks) {
      while (at < mark) {
        y = s * y;
        ++at;
      }
      record(t * Real(mark) / denom, y);
    }
    return traj;
  }

  if (!(opts.dt > Real(0))) throw InvalidArgument("evolve: dt must be > 0");
  const long long steps =
      t == Real(0) ? 0 : std::max<long long>(1, static_cast<long long>(std::ceil(static_cast<double>(t / opts.dt) - 1e-9)));
  const Real hstep = steps > 0 ? t / Real(steps) : Real(0);
  const RMatrix<Real> eye = RMatrix<Real>::Identity(2 * d, 2 * d);

  auto cayley = [&](const CMatrix<Real>& h_b) {
    const RMatrix<Real> g = flow_generator<Real>(h_b) * (hstep / Real(2));
    return RMatrix<Real>(Eigen::PartialPivLU<RMatrix<Real>>(eye - g).solve(eye + g));
  };

  RMatrix<Real> fixed_step;
  if (!h.time_dependent() && steps > 0) fixed_step = cayley(detail::in_basis(h.matrix(), basis));

  const auto marks = detail::sample_steps(steps, opts.samples);
  RVector<Real> y = hps0.stacked();
  long long at = 0;
  for (const long long mark : marks) {
    while (at < mark) {
      if (h.time_dependent()) {
        const Real mid = (Real(at) + Real(0.5)) * hstep;
        y = cayley(detail::in_basis(h.at(mid), basis)) * y;
      } else {
        y = fixed_step * y;
      }
      ++at;
    }
    record(Real(mark) * hstep, y);
  }
  return traj;
}

// Jacobian of the time-t flow in the computational basis: S of exp(-itH).
template <typename Real>
SymplecticMap<Real> flow_jacobian(const QuadraticHamiltonian<Real>& h, Real t) {
  if (h.time_dependent()) throw InvalidArgument("flow_jacobian: requires a time-independent Hamiltonian");
  return SymplecticMap<Real>::from_unitary(hermitian_propagator<Real>(h.matrix(), t));
}

}  // namespace sacsim
