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

// Mixed states and open-system dynamics, two ways:
//
//  * density vectors: rho expanded over all d^2 Heisenberg-Weyl operators,
//    n_jk = tr(M_jk^dagger rho) with n_00 = 1, evolved under the Lindblad
//    superoperator i d|rho>/dt = L |rho>;
//  * mixture plus dilation: a channel embedded as a unitary on
//    system (x) ancilla, run on hidden particles for each pure component,
//    with the ancilla readout sampled shot by shot.
//
// Vectorization is row-major, |rho>_(i*d + j) = rho_ij, so
// vec(A rho B) = (A (x) B^T) vec(rho). Mixture weights are called w_i.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sacsim/dynamics.hpp"
#include "sacsim/random.hpp"
#include "sacsim/statespace.hpp"

namespace sacsim {

// Largest system dimension for dense superoperator exponentials.
inline constexpr Index kMaxDenseLindbladDim = 64;

template <typename Real = double>
class DensityVector {
 public:
  DensityVector(Index d, CVector<Real> n, Real trace_tol = Real(1e-10)) : d_(d), n_(std::move(n)) {
    require_same_dim(n_.size(), d * d, "DensityVector coefficients");
    if (std::abs(n_(0) - Complex<Real>(1)) > trace_tol) {
      throw InvariantViolation("DensityVector: n_00 = " + std::to_string(static_cast<double>(n_(0).real())) +
                               " instead of 1");
    }
  }

  Index dim() const { return d_; }
  // j-major over all (j,k), (0,0) first.
  const CVector<Real>& coefficients() const { return n_; }
  RVector<Real> Q() const { return n_.real(); }
  RVector<Real> P() const { return n_.imag(); }
  Complex<Real> trace_coordinate() const { return n_(0); }
  // (1/d) sum (Q^2 + P^2), equal to tr rho^2.
  Real purity() const { return n_.squaredNorm() / Real(d_); }

 private:
  Index d_;
  CVector<Real> n_;
};

// Columns are row-major vec(M_jk), j-major. T^dagger T = d 1.
template <typename Real = double>
CMatrix<Real> hw_vectorization_basis(Index d) {
  CMatrix<Real> t(d * d, d * d);
  Index col = 0;
  for (const auto& [j, k] : hw_index_pairs(d, true)) t.col(col++) = vec_row_major<Real>(hw_operator<Real>(j, k, d));
  return t;
}

template <typename Real>
DensityVector<Real> vectorize_density(const DensityMatrix<Real>& rho) {
  const Index d = rho.dim();
  CVector<Real> n = hw_vectorization_basis<Real>(d).adjoint() * vec_row_major<Real>(rho.matrix());
  return DensityVector<Real>(d, std::move(n));
}

template <typename Real>
CMatrix<Real> devectorize_matrix(const DensityVector<Real>& dv) {
  const Index d = dv.dim();
  const CVector<Real> v = hw_vectorization_basis<Real>(d) * dv.coefficients() / Real(d);
  return unvec_row_major<Real>(v, d, d);
}

template <typename Real>
DensityMatrix<Real> devectorize(const DensityVector<Real>& dv, DensityChecks<Real> checks = {}) {
  return DensityMatrix<Real>(devectorize_matrix(dv), checks);
}

// H (x) 1 - 1 (x) H^*.
template <typename Real>
CMatrix<Real> unitary_liouvillian(const CMatrix<Real>& h, Real tol = Real(1e-10)) {
  if (h.rows() != h.cols()) throw DimensionError("unitary_liouvillian: matrix must be square");
  if (hermiticity_defect(h) > tol) throw InvalidArgument("unitary_liouvillian: Hamiltonian is not Hermitian");
  const Index d = h.rows();
  const CMatrix<Real> id = identity<Real>(d);
  return kron<Real>(h, id) - kron<Real>(id, CMatrix<Real>(h.conjugate()));
}

template <typename Real = double>
struct JumpTerm {
  Real rate;
  CMatrix<Real> op;
};

template <typename Real = double>
class LindbladGenerator {
 public:
  LindbladGenerator(CMatrix<Real> h, std::vector<JumpTerm<Real>> jumps, Real tol = Real(1e-10))
      : h_(std::move(h)), jumps_(std::move(jumps)) {
    const Index d = h_.rows();
    superop_ = unitary_liouvillian<Real>(h_, tol);
    const CMatrix<Real> id = identity<Real>(d);
    const Complex<Real> i(0, 1);
    for (const auto& jt : jumps_) {
      if (!(jt.rate >= Real(0))) throw InvalidArgument("lindblad_generator: negative jump rate");
      require_same_dim(jt.op.rows(), d, "lindblad_generator jump operator");
      require_same_dim(jt.op.cols(), d, "lindblad_generator jump operator");
      const CMatrix<Real> ldl = jt.op.adjoint() * jt.op;
      superop_ += i * jt.rate *
                  (kron<Real>(jt.op, CMatrix<Real>(jt.op.conjugate())) - Real(0.5) * kron<Real>(ldl, id) -
                   Real(0.5) * kron<Real>(id, CMatrix<Real>(ldl.transpose())));
    }
    if (trace_defect() > tol) {
      throw InvariantViolation("lindblad_generator: generator does not preserve the trace");
    }
  }

  Index dim() const { return h_.rows(); }
  const CMatrix<Real>& hamiltonian() const { return h_; }
  const std::vector<JumpTerm<Real>>& jumps() const { return jumps_; }
  // Effective operator on row-major vec(rho).
  const CMatrix<Real>& superoperator() const { return superop_; }

  // Same operator in the Heisenberg-Weyl coefficient basis:
  // i dn/dt = G n with G = (1/d) T^dagger L T.
  CMatrix<Real> hw_generator() const {
    const CMatrix<Real> t = hw_vectorization_basis<Real>(dim());
    return t.adjoint() * superop_ * t / Real(dim());
  }

  // max |<eta| L|, eta = vec(1).
  Real trace_defect() const {
    const CVector<Real> eta = vec_row_major<Real>(identity<Real>(dim()));
    return (eta.adjoint() * superop_).cwiseAbs().maxCoeff();
  }

  // sum_i gamma_i [L_i, L_i^dagger] = 0: the maximally mixed state is fixed.
  bool unital(Real tol = Real(1e-12)) const {
    CMatrix<Real> acc = CMatrix<Real>::Zero(dim(), dim());
    for (const auto& jt : jumps_) acc += jt.rate * (jt.op * jt.op.adjoint() - jt.op.adjoint() * jt.op);
    return acc.cwiseAbs().maxCoeff() <= tol;
  }

 private:
  CMatrix<Real> h_;
  std::vector<JumpTerm<Real>> jumps_;
  CMatrix<Real> superop_;
};

template <typename Real>
LindbladGenerator<Real> lindblad_generator(const CMatrix<Real>& h, std::vector<JumpTerm<Real>> jumps = {}) {
  return LindbladGenerator<Real>(h, std::move(jumps));
}

// Classical energy <rho| L |rho> = (1/d) n^dagger G n. For a unitary
// generator, (d/2) dE/dP = dQ/dt and (d/2) dE/dQ = -dP/dt.
template <typename Real>
Real density_vector_energy(const LindbladGenerator<Real>& gen, const DensityVector<Real>& dv) {
  require_same_dim(gen.dim(), dv.dim(), "density_vector_energy");
  return (dv.coefficients().dot(gen.hw_generator() * dv.coefficients())).real() / Real(dv.dim());
}

template <typename Real = double>
struct DensityTrajectory {
  std::vector<Real> times;
  std::vector<DensityVector<Real>> states;
  std::vector<Real> purities;  // (1/d)|n|^2, logged, not enforced
  std::vector<Real> traces;    // Re n_00

  const DensityVector<Real>& final_state() const { return states.back(); }
};

template <typename Real = double>
struct DensityEvolveOptions {
  int samples = 101;
  Real trace_tol = Real(1e-10);
  Real dt = Real(1e-3);  // step size for time-dependent generators
};

namespace detail {

template <typename Real>
void record_density_sample(DensityTrajectory<Real>& traj, Index d, const CVector<Real>& n, Real t, Real trace_tol) {
  if (std::abs(n(0) - Complex<Real>(1)) > trace_tol) {
    throw InvariantViolation("evolve_density_vector: trace coordinate drifted to " +
                             std::to_string(static_cast<double>(n(0).real())) +
                             " at t=" + std::to_string(static_cast<double>(t)));
  }
  traj.times.push_back(t);
  traj.states.emplace_back(d, n, trace_tol);
  traj.purities.push_back(traj.states.back().purity());
  traj.traces.push_back(n(0).real());
}

}  // namespace detail

// Dense exponentiation exp(-i G t_s) at each of `samples` evenly spaced
// times in [0, t].
template <typename Real>
DensityTrajectory<Real> evolve_density_vector(const LindbladGenerator<Real>& gen, const DensityVector<Real>& dv0, Real t,
                                              const DensityEvolveOptions<Real>& opts = {}) {
  require_same_dim(gen.dim(), dv0.dim(), "evolve_density_vector");
  if (!(t >= Real(0))) throw InvalidArgument("evolve_density_vector: t must be >= 0");
  if (opts.samples < 1) throw InvalidArgument("evolve_density_vector: samples must be >= 1");
  if (gen.dim() > kMaxDenseLindbladDim) throw InvalidArgument("evolve_density_vector: dimension above dense limit");
  const Index d = gen.dim();
  const CMatrix<Real> g = gen.hw_generator();
  DensityTrajectory<Real> traj;
  const int samples = opts.samples;
  for (int s = 0; s < samples; ++s) {
    const Real ts = samples == 1 ? t : t * Real(s) / Real(samples - 1);
    CVector<Real> n;
    if (ts == Real(0)) {
      n = dv0.coefficients();
    } else {
      n = expm<Real>(CMatrix<Real>(Complex<Real>(0, -ts) * g)) * dv0.coefficients();
    }
    detail::record_density_sample(traj, d, n, ts, opts.trace_tol);
  }
  return traj;
}

template <typename Real = double>
using GeneratorSchedule = std::function<LindbladGenerator<Real>(Real)>;

// Step-wise mode for time-dependent generators: the generator is frozen at
// each step midpoint and the step is exponentiated exactly.
template <typename Real>
DensityTrajectory<Real> evolve_density_vector(const GeneratorSchedule<Real>& schedule, const DensityVector<Real>& dv0,
                                              Real t, const DensityEvolveOptions<Real>& opts = {}) {
  if (!(t >= Real(0))) throw InvalidArgument("evolve_density_vector: t must be >= 0");
  if (!(opts.dt > Real(0))) throw InvalidArgument("evolve_density_vector: dt must be > 0");
  if (opts.samples < 1) throw InvalidArgument("evolve_density_vector: samples must be >= 1");
  const Index d = dv0.dim();
  const long long steps = t == Real(0) ? 0 : std::max<long long>(1, std::llround(static_cast<double>(t / opts.dt)));
  const Real h = steps == 0 ? Real(0) : t / Real(steps);
  const auto marks = detail::sample_steps(steps, opts.samples);
  DensityTrajectory<Real> traj;
  CVector<Real> n = dv0.coefficients();
  std::size_t next = 0;
  for (long long step = 0; step <= steps; ++step) {
    if (next < marks.size() && marks[next] == step) {
      detail::record_density_sample(traj, d, n, h * Real(step), opts.trace_tol);
      ++next;
    }
    if (step == steps) break;
    const auto gen = schedule(h * (Real(step) + Real(0.5)));
    require_same_dim(gen.dim(), d, "evolve_density_vector schedule");
    n = expm<Real>(CMatrix<Real>(Complex<Real>(0, -h) * gen.hw_generator())) * n;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Dilation

template <typename Real = double>
struct ChannelDilation {
  Index system_dim = 0;
  Index ancilla_dim = 0;
  // Unitary on system (x) ancilla, index s * ancilla_dim + a.
  CMatrix<Real> unitary;
  std::vector<CMatrix<Real>> kraus;
};

// K_j = <j|U|0> on the ancilla.
template <typename Real>
std::vector<CMatrix<Real>> kraus_from_dilation(const CMatrix<Real>& u, Index d, Index a) {
  if (u.rows() != d * a || u.cols() != d * a) throw DimensionError("kraus_from_dilation: unitary has wrong shape");
  std::vector<CMatrix<Real>> out;
  for (Index j = 0; j < a; ++j) {
    CMatrix<Real> k(d, d);
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) k(r, c) = u(r * a + j, c * a);
    }
    out.push_back(std::move(k));
  }
  return out;
}

template <typename Real>
Real trace_preservation_defect(const std::vector<CMatrix<Real>>& kraus) {
  if (kraus.empty()) throw InvalidArgument("Kraus set is empty");
  const Index d = kraus.front().cols();
  CMatrix<Real> acc = -identity<Real>(d);
  for (const auto& k : kraus) acc += k.adjoint() * k;
  return acc.cwiseAbs().maxCoeff();
}

// Kraus set of exp(-i L t) from the eigendecomposition of its Choi matrix
// sum_ij E(|i><j|) (x) |i><j|; eigenvalues at or below `tol` are dropped.
template <typename Real>
std::vector<CMatrix<Real>> kraus_from_generator(const LindbladGenerator<Real>& gen, Real t, Real tol = Real(1e-12)) {
  if (!(t >= Real(0))) throw InvalidArgument("kraus_from_generator: t must be >= 0");
  const Index d = gen.dim();
  const CMatrix<Real> e = expm<Real>(CMatrix<Real>(Complex<Real>(0, -t) * gen.superoperator()));
  CMatrix<Real> choi = CMatrix<Real>::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      CMatrix<Real> unit = CMatrix<Real>::Zero(d, d);
      unit(i, j) = Real(1);
      choi += kron<Real>(unvec_row_major<Real>(CVector<Real>(e.col(i * d + j)), d, d), unit);
    }
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(CMatrix<Real>((choi + choi.adjoint()) / Real(2)));
  std::vector<CMatrix<Real>> kraus;
  for (Index m = d * d - 1; m >= 0; --m) {
    const Real lambda = eig.eigenvalues()(m);
    if (lambda <= tol) continue;
    CMatrix<Real> k(d, d);
    for (Index a = 0; a < d; ++a) {
      for (Index i = 0; i < d; ++i) k(a, i) = std::sqrt(lambda) * eig.eigenvectors()(a * d + i, m);
    }
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) throw InvariantViolation("kraus_from_generator: channel has no positive Choi eigenvalue");
  return kraus;
}

// Isometry columns V e_s = sum_j K_j e_s (x) |j> go to the |s,0> columns of
// U unchanged; the remaining columns are a pivoted Gram-Schmidt complement
// drawn from the standard basis, so the result is reproducible.
template <typename Real>
ChannelDilation<Real> dilate_kraus_set(const std::vector<CMatrix<Real>>& kraus, Real tp_tol = Real(1e-8)) {
  if (kraus.empty()) throw InvalidArgument("dilate_kraus_set: Kraus set is empty");
  const Index d = kraus.front().rows();
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("dilate_kraus_set: Kraus operators must be d x d");
  }
  const Real tp = trace_preservation_defect(kraus);
  if (tp > tp_tol) throw InvalidArgument("dilate_kraus_set: Kraus set is not trace preserving");
  const Index a = static_cast<Index>(kraus.size());
  const Index n = d * a;

  CMatrix<Real> u = CMatrix<Real>::Zero(n, n);
  for (Index s = 0; s < d; ++s) {
    for (Index j = 0; j < a; ++j) {
      for (Index r = 0; r < d; ++r) u(r * a + j, s * a) = kraus[static_cast<std::size_t>(j)](r, s);
    }
  }
  if (a > 1) {
    CMatrix<Real> v(n, d);
    for (Index s = 0; s < d; ++s) v.col(s) = u.col(s * a);
    // Project the standard basis off range(V) and orthonormalize.
    CMatrix<Real> candidates = identity<Real>(n) - v * v.adjoint();
    const CMatrix<Real> complement = pivoted_orthonormalize<Real>(candidates, n - d);
    Index next = 0;
    for (Index s = 0; s < d; ++s) {
      for (Index j = 1; j < a; ++j) u.col(s * a + j) = complement.col(next++);
    }
  }
  const Real tol = std::max(Real(1e-10), Real(4) * tp);
  if (unitarity_defect(u) > tol) throw InvariantViolation("dilate_kraus_set: completed dilation is not unitary");
  return {d, a, u, kraus};
}

template <typename Real = double>
struct Mixture {
  std::vector<Real> weights;  // w_i
  std::vector<PureState<Real>> states;
};

template <typename Real = double>
struct MixtureEstimate {
  DensityMatrix<Real> rho;
  // counts[i][j]: shots with component i and ancilla outcome j.
  std::vector<std::vector<std::uint64_t>> counts;
  // q[i][j] = <psi_i|K_j^dagger K_j|psi_i>, from the hidden-particle runs.
  std::vector<std::vector<Real>> outcome_probabilities;
  std::uint64_t shots = 0;
};

namespace detail {

template <typename Real>
std::size_t sample_index(const std::vector<Real>& cumulative, Real u) {
  std::size_t i = 0;
  while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
  return i;
}

}  // namespace detail

// Each component psi_i (x) |0> is evolved once through the symplectic map of
// U; the ancilla slices give q_ij and the normalized branches K_j psi_i.
// Shot s draws (i, j) from its own stream ShotStream(seed, s); the estimate
// is sum_ij (count_ij / shots) |phi_ij><phi_ij|.
template <typename Real>
MixtureEstimate<Real> mixture_dilation_simulate(const ChannelDilation<Real>& channel, const Mixture<Real>& mixture,
                                                std::uint64_t shots, std::uint64_t seed) {
  const Index d = channel.system_dim;
  const Index a = channel.ancilla_dim;
  if (shots < 1) throw InvalidArgument("mixture_dilation_simulate: shots must be >= 1");
  if (mixture.weights.empty() || mixture.weights.size() != mixture.states.size()) {
    throw InvalidArgument("mixture_dilation_simulate: mixture needs one weight per state");
  }
  Real total = Real(0);
  for (const Real w : mixture.weights) {
    if (!(w >= Real(0))) throw InvalidArgument("mixture_dilation_simulate: negative weight");
    total += w;
  }
  if (std::abs(total - Real(1)) > Real(1e-10)) throw InvalidArgument("mixture_dilation_simulate: weights must sum to 1");

  const auto map = unitary_to_symplectic<Real>(channel.unitary);
  const auto big_basis = BasisLabel<Real>::computational(d * a);
  const std::size_t m = mixture.states.size();
  std::vector<std::vector<Real>> q(m, std::vector<Real>(static_cast<std::size_t>(a)));
  std::vector<std::vector<CVector<Real>>> branch(m, std::vector<CVector<Real>>(static_cast<std::size_t>(a)));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& psi = mixture.states[i];
    require_same_dim(psi.dim(), d, "mixture_dilation_simulate state");
    CVector<Real> joint = CVector<Real>::Zero(d * a);
    for (Index s = 0; s < d; ++s) joint(s * a) = psi[s];
    const auto out = apply_symplectic(map, to_phase_space(PureState<Real>(joint, Real(1e-9)), big_basis));
    const CVector<Real> amps = out.coordinates();
    for (Index j = 0; j < a; ++j) {
      CVector<Real> phi(d);
      for (Index s = 0; s < d; ++s) phi(s) = amps(s * a + j);
      const Real qij = phi.squaredNorm();
      q[i][static_cast<std::size_t>(j)] = qij;
      branch[i][static_cast<std::size_t>(j)] = qij > Real(0) ? CVector<Real>(phi / std::sqrt(qij)) : phi;
    }
  }

  std::vector<Real> w_cum(m);
  Real acc = Real(0);
  for (std::size_t i = 0; i < m; ++i) w_cum[i] = (acc += mixture.weights[i]);
  std::vector<std::vector<Real>> q_cum(m, std::vector<Real>(static_cast<std::size_t>(a)));
  for (std::size_t i = 0; i < m; ++i) {
    Real c = Real(0);
    for (std::size_t j = 0; j < q[i].size(); ++j) q_cum[i][j] = (c += q[i][j]);
  }

  std::vector<std::vector<std::uint64_t>> counts(m, std::vector<std::uint64_t>(static_cast<std::size_t>(a), 0));
  for (std::uint64_t s = 0; s < shots; ++s) {
    ShotStream rng(seed, s);
    const std::size_t i = detail::sample_index(w_cum, static_cast<Real>(rng.uniform01()) * w_cum.back());
    const std::size_t j = detail::sample_index(q_cum[i], static_cast<Real>(rng.uniform01()) * q_cum[i].back());
    ++counts[i][j];
  }

  CMatrix<Real> rho = CMatrix<Real>::Zero(d, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      if (counts[i][j] == 0) continue;
      rho += (Real(counts[i][j]) / Real(shots)) * branch[i][j] * branch[i][j].adjoint();
    }
  }
  return {DensityMatrix<Real>::symmetrized(rho), std::move(counts), std::move(q), shots};
}

}  // namespace sacsim
