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

// State and process tomography over the Heisenberg-Weyl eigenbases, run on
// fixed-basis hidden particles, and the strong/weak simulator check built
// on top of it.
//
// One "run" prepares the hidden particles of the state in one basis B_jk
// and reads out (q, p) classically; probabilities are q^2 + p^2. A full
// state tomography uses all d^2 bases, process tomography repeats it for
// d^2 input states, d^4 runs in total.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sacsim/dynamics.hpp"
#include "sacsim/random.hpp"
#include "sacsim/statespace.hpp"

namespace sacsim {

template <typename Real = double>
struct MeasurementRecord {
  BasisLabel<Real> basis;
  RVector<Real> probabilities;
  // Raw classical readout; present for pure-state runs.
  std::optional<RVector<Real>> q;
  std::optional<RVector<Real>> p;
};

namespace detail {

template <typename Real>
void check_probabilities(const RVector<Real>& probs, Real tol) {
  if (probs.size() > 0 && probs.minCoeff() < -tol) throw InvariantViolation("measurement: negative probability");
  if (std::abs(probs.sum() - Real(1)) > tol) {
    throw InvariantViolation("measurement: probabilities sum to " + std::to_string(static_cast<double>(probs.sum())));
  }
}

}  // namespace detail

template <typename Real>
MeasurementRecord<Real> measure_basis_probabilities(const PureState<Real>& state, const BasisLabel<Real>& basis,
                                                    Real tol = Real(1e-10)) {
  const auto hps = to_phase_space(state, basis);
  RVector<Real> probs = hps.q().array().square() + hps.p().array().square();
  detail::check_probabilities(probs, tol);
  return {basis, std::move(probs), hps.q(), hps.p()};
}

// <b_m| rho |b_m> for a mixed state.
template <typename Real>
MeasurementRecord<Real> measure_basis_probabilities(const DensityMatrix<Real>& rho, const BasisLabel<Real>& basis,
                                                    Real tol = Real(1e-10)) {
  require_same_dim(rho.dim(), basis.dim(), "measure_basis_probabilities");
  const CMatrix<Real> rotated = basis.vectors().adjoint() * rho.matrix() * basis.vectors();
  RVector<Real> probs = rotated.diagonal().real();
  detail::check_probabilities(probs, tol);
  return {basis, std::move(probs), std::nullopt, std::nullopt};
}

// Replace exact probabilities by multinomial frequencies from `shots` draws.
template <typename Real>
MeasurementRecord<Real> sample_record(const MeasurementRecord<Real>& exact, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw InvalidArgument("sample_record: shots must be >= 1");
  const Index d = exact.probabilities.size();
  RVector<Real> cumulative(d);
  Real acc = Real(0);
  for (Index i = 0; i < d; ++i) {
    acc += std::max(exact.probabilities(i), Real(0));
    cumulative(i) = acc;
  }
  RVector<Real> counts = RVector<Real>::Zero(d);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const Real u = static_cast<Real>(uniform01(rng)) * acc;
    Index i = 0;
    while (i + 1 < d && u >= cumulative(i)) ++i;
    counts(i) += Real(1);
  }
  MeasurementRecord<Real> out{exact.basis, counts / Real(shots), std::nullopt, std::nullopt};
  return out;
}

// n_jk = sum_m conj(lambda_m) Pr(m) for every (j,k) != (0,0), j-major.
// Degenerate eigenvalues pool correctly because the sum runs over an
// orthonormal basis of each eigenspace.
template <typename Real>
CVector<Real> expectations_from_probabilities(const std::vector<MeasurementRecord<Real>>& records, Index d) {
  std::map<std::pair<int, int>, const MeasurementRecord<Real>*> by_index;
  for (const auto& r : records) {
    require_same_dim(r.basis.dim(), d, "expectations_from_probabilities");
    require_same_dim(r.probabilities.size(), d, "expectations_from_probabilities probabilities");
    if (r.basis.kind() == BasisKind::heisenberg_weyl) by_index[{r.basis.j(), r.basis.k()}] = &r;
  }
  const auto pairs = hw_index_pairs(d, false);
  CVector<Real> n(static_cast<Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto it = by_index.find(pairs[i]);
    if (it == by_index.end()) {
      throw InvalidArgument("expectations_from_probabilities: missing record for basis hw(" +
                            std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ")");
    }
    const MeasurementRecord<Real>& rec = *it->second;
    Complex<Real> acc(0);
    for (Index m = 0; m < d; ++m) acc += std::conj(rec.basis.eigenvalues()(m)) * rec.probabilities(m);
    n(static_cast<Index>(i)) = acc;
  }
  return n;
}

// Plain linear inversion rho = (1 + sum n M) / d. Nonphysical estimates throw
// unless `clip` is set.
template <typename Real>
DensityMatrix<Real> qst_linear_inversion(const CVector<Real>& n, Index d, bool clip = false,
                                         Real nonphysical_tol = Real(1e-8)) {
  return reconstruct_from_bloch<Real>(n, d, nonphysical_tol, clip).rho;
}

template <typename Real = double>
struct ReadoutOptions {
  std::uint64_t shots = 0;  // 0: exact readout (infinite statistics)
  std::uint64_t seed = 0;
  bool clip = false;
  Real nonphysical_tol = Real(1e-8);
};

template <typename Real = double>
struct QstResult {
  DensityMatrix<Real> rho;
  CVector<Real> bloch;
  // [Re n_1, Im n_1, Re n_2, Im n_2, ...]: 2(d^2 - 1) reals
  RVector<Real> description;
  std::vector<MeasurementRecord<Real>> records;
  std::uint64_t runs = 0;
  std::optional<Real> fidelity;  // against the input when it was a pure state
};

// All d^2 bases B_jk, j-major, (0,0) being the computational basis.
template <typename Real = double>
std::vector<BasisLabel<Real>> tomography_bases(Index d) {
  std::vector<BasisLabel<Real>> out;
  for (const auto& [j, k] : hw_index_pairs(d, true)) out.push_back(hw_eigenbasis<Real>(j, k, d));
  return out;
}

namespace detail {

template <typename Real>
QstResult<Real> finish_qst(std::vector<MeasurementRecord<Real>> records, Index d, const ReadoutOptions<Real>& opts) {
  if (opts.shots > 0) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      Rng rng = make_stream(opts.seed, i);
      records[i] = sample_record(records[i], opts.shots, rng);
    }
  }
  CVector<Real> n = expectations_from_probabilities(records, d);
  RVector<Real> description(2 * n.size());
  for (Index i = 0; i < n.size(); ++i) {
    description(2 * i) = n(i).real();
    description(2 * i + 1) = n(i).imag();
  }
  DensityMatrix<Real> rho = qst_linear_inversion<Real>(n, d, opts.clip, opts.nonphysical_tol);
  const auto runs = static_cast<std::uint64_t>(records.size());
  return {std::move(rho), std::move(n), std::move(description), std::move(records), runs, std::nullopt};
}

}  // namespace detail

// SAC state tomography: hidden particles prepared in each of the d^2 bases,
// classical (q, p) readout, linear inversion.
template <typename Real>
QstResult<Real> sac_qst(const PureState<Real>& state, const ReadoutOptions<Real>& opts = {},
                        const std::vector<BasisLabel<Real>>* bases = nullptr) {
  const Index d = state.dim();
  std::vector<BasisLabel<Real>> own;
  if (bases == nullptr) {
    own = tomography_bases<Real>(d);
    bases = &own;
  }
  std::vector<MeasurementRecord<Real>> records;
  records.reserve(bases->size());
  for (const auto& b : *bases) records.push_back(measure_basis_probabilities(state, b));
  auto result = detail::finish_qst(std::move(records), d, opts);
  result.fidelity = fidelity(result.rho, state);
  return result;
}

// Same pipeline for a mixed state (channel outputs).
template <typename Real>
QstResult<Real> tomograph_density(const DensityMatrix<Real>& rho, const ReadoutOptions<Real>& opts = {},
                                  const std::vector<BasisLabel<Real>>* bases = nullptr) {
  const Index d = rho.dim();
  std::vector<BasisLabel<Real>> own;
  if (bases == nullptr) {
    own = tomography_bases<Real>(d);
    bases = &own;
  }
  std::vector<MeasurementRecord<Real>> records;
  records.reserve(bases->size());
  for (const auto& b : *bases) records.push_back(measure_basis_probabilities(rho, b));
  return detail::finish_qst(std::move(records), d, opts);
}

// ---------------------------------------------------------------------------
// Process tomography

template <typename Real = double>
using Channel = std::function<DensityMatrix<Real>(const PureState<Real>&)>;

// Informationally complete inputs: |i>, then (|i>+|j>)/sqrt2 and
// (|i>+i|j>)/sqrt2 for i < j. d^2 states in total.
template <typename Real = double>
std::vector<PureState<Real>> qpt_input_states(Index d) {
  std::vector<PureState<Real>> out;
  for (Index i = 0; i < d; ++i) out.push_back(PureState<Real>::basis_state(d, i));
  const Real s = Real(1) / std::sqrt(Real(2));
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      CVector<Real> v = CVector<Real>::Zero(d);
      v(i) = s;
      v(j) = s;
      out.emplace_back(v);
    }
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      CVector<Real> v = CVector<Real>::Zero(d);
      v(i) = s;
      v(j) = Complex<Real>(0, s);
      out.emplace_back(v);
    }
  }
  return out;
}

template <typename Real = double>
struct ProcessEstimate {
  Index dim = 0;
  // Normalized Choi matrix (1/d) sum_ij E(|i><j|) (x) |i><j|, output factor first.
  CMatrix<Real> choi;
  std::uint64_t run_count = 0;
};

template <typename Real>
ProcessEstimate<Real> sac_qpt(const Channel<Real>& channel, Index d, const ReadoutOptions<Real>& opts = {}) {
  if (d < 1) throw InvalidArgument("sac_qpt: dimension must be >= 1");
  const auto inputs = qpt_input_states<Real>(d);
  const auto bases = tomography_bases<Real>(d);
  std::vector<CMatrix<Real>> outputs;
  std::uint64_t runs = 0;
  for (std::size_t idx = 0; idx < inputs.size(); ++idx) {
    const DensityMatrix<Real> out = channel(inputs[idx]);
    require_same_dim(out.dim(), d, "sac_qpt channel output");
    ReadoutOptions<Real> per_input = opts;
    per_input.seed = opts.seed ^ (0x9E3779B97F4A7C15ull * (idx + 1));
    const auto qst = tomograph_density(out, per_input, &bases);
    runs += qst.runs;
    outputs.push_back(qst.rho.matrix());
  }

  // E(|i><j|) from the estimates by linearity.
  std::vector<CMatrix<Real>> unit(static_cast<std::size_t>(d * d));
  auto at = [&](Index i, Index j) -> CMatrix<Real>& { return unit[static_cast<std::size_t>(i * d + j)]; };
  for (Index i = 0; i < d; ++i) at(i, i) = outputs[static_cast<std::size_t>(i)];
  std::size_t plus = static_cast<std::size_t>(d);
  std::size_t plus_i = plus + static_cast<std::size_t>(d * (d - 1) / 2);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      const CMatrix<Real> diag = at(i, i) + at(j, j);
      const CMatrix<Real> sym = Real(2) * outputs[plus++] - diag;     // E(|i><j| + |j><i|)
      const CMatrix<Real> asym = Real(2) * outputs[plus_i++] - diag;  // E(-i|i><j| + i|j><i|)
      at(i, j) = (sym + Complex<Real>(0, 1) * asym) / Real(2);
      at(j, i) = (sym - Complex<Real>(0, 1) * asym) / Real(2);
    }
  }

  CMatrix<Real> choi = CMatrix<Real>::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      CMatrix<Real> eij = CMatrix<Real>::Zero(d, d);
      eij(i, j) = Real(1);
      choi += kron<Real>(at(i, j), eij);
    }
  }
  choi /= Real(d);
  if (hermiticity_defect(choi) > Real(1e-10) || std::abs(choi.trace() - Complex<Real>(1)) > Real(1e-10)) {
    throw InvariantViolation("sac_qpt: Choi estimate is not a normalized Hermitian matrix");
  }
  return {d, std::move(choi), runs};
}

// ---------------------------------------------------------------------------
// Simulator verification

template <typename Real = double>
struct SimulatorUnderTest {
  std::function<CVector<Real>(const CVector<Real>&)> run;
  // When the simulator exposes its matrix the strong distance is the exact
  // supremum (operator norm) instead of a supremum over probes.
  std::optional<CMatrix<Real>> matrix;
};

template <typename Real = double>
struct VerificationOptions {
  Real epsilon = Real(1e-8);
  Real epsilon0 = Real(0);  // declared initialization error
  std::vector<PureState<Real>> probes;  // default: the process-tomography inputs
  std::vector<std::pair<std::string, CMatrix<Real>>> observables;  // f_O(psi) = <psi|O|psi>
};

template <typename Real = double>
struct VerificationReport {
  Real strong_distance = Real(0);
  std::map<std::string, Real> weak_distances;
  Real epsilon = Real(0);
  Real epsilon0 = Real(0);
  Real total_bound = Real(0);  // strong_distance + epsilon0
  bool pass = false;
  std::uint64_t runs = 0;
};

template <typename Real>
VerificationReport<Real> verify_simulator(const CMatrix<Real>& u, const SimulatorUnderTest<Real>& sim,
                                          const VerificationOptions<Real>& opts = {}) {
  const Index d = u.rows();
  VerificationReport<Real> report;
  report.epsilon = opts.epsilon;
  report.epsilon0 = opts.epsilon0;

  std::vector<PureState<Real>> probes = opts.probes.empty() ? qpt_input_states<Real>(d) : opts.probes;

  Real probe_sup = Real(0);
  std::map<std::string, Real> weak;
  for (const auto& [name, o] : opts.observables) {
    require_same_dim(o.rows(), d, "verify_simulator observable " + name);
    weak[name] = Real(0);
  }
  if (sim.run) {
    for (const auto& psi : probes) {
      require_same_dim(psi.dim(), d, "verify_simulator probe");
      const CVector<Real> expected = u * psi.amplitudes();
      const CVector<Real> got = sim.run(psi.amplitudes());
      ++report.runs;
      require_same_dim(got.size(), d, "verify_simulator output");
      probe_sup = std::max(probe_sup, (expected - got).norm());
      for (const auto& [name, o] : opts.observables) {
        const Real fe = expected.dot(o * expected).real();
        const Real fg = got.dot(o * got).real();
        weak[name] = std::max(weak[name], std::abs(fe - fg));
      }
    }
  }
  if (sim.matrix) {
    report.strong_distance = operator_norm_distance<Real>(u, *sim.matrix);
  } else {
    if (!sim.run) throw InvalidArgument("verify_simulator: simulator exposes neither a run function nor a matrix");
    report.strong_distance = probe_sup;
  }
  report.weak_distances = std::move(weak);
  report.total_bound = report.strong_distance + report.epsilon0;
  report.pass = report.strong_distance <= report.epsilon;
  return report;
}

// Wrap exact hidden-particle evolution under H for time t as a simulator.
template <typename Real>
SimulatorUnderTest<Real> sac_evolution_simulator(const CMatrix<Real>& h, Real t) {
  QuadraticHamiltonian<Real> ham(h);
  return {[ham, t](const CVector<Real>& psi) {
            const PureState<Real> state(psi, Real(1e-9));
            EvolveOptions<Real> opts;
            opts.samples = 1;
            const auto traj = evolve(ham, to_phase_space(state, BasisLabel<Real>::computational(state.dim())), t, opts);
            return traj.final_state().coordinates();
          },
          std::nullopt};
}

}  // namespace sacsim
