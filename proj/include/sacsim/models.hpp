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

// Worked systems: the coined quantum walk, beam-splitter meshes for linear
// optics, Hilbert-space bandwidth, hidden-particle cost accounting, and a
// finite-difference field on a 1-D grid.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sacsim/dynamics.hpp"
#include "sacsim/linalg.hpp"
#include "sacsim/statespace.hpp"

namespace sacsim {

// ---------------------------------------------------------------------------
// Coined walk on the cycle x = -d..d. Index (c, x) -> c (2d+1) + (x + d).

template <typename Real = double>
CMatrix<Real> hadamard_coin() {
  CMatrix<Real> h(2, 2);
  const Real s = Real(1) / std::sqrt(Real(2));
  h << s, s, s, -s;
  return h;
}

template <typename Real = double>
struct WalkSpec {
  int half_width = 0;  // d
  int steps = 0;       // T <= d
  CVector<Real> coin_state = CVector<Real>::Unit(2, 0);
  CMatrix<Real> coin = hadamard_coin<Real>();

  Index sites() const { return 2 * static_cast<Index>(half_width) + 1; }
  Index dim() const { return 2 * sites(); }
  Index index(int c, int x) const { return static_cast<Index>(c) * sites() + (x + half_width); }

  void validate() const {
    if (half_width < 1) throw InvalidArgument("WalkSpec: half width must be >= 1");
    if (steps < 0) throw InvalidArgument("WalkSpec: steps must be >= 0");
    if (steps > half_width) throw InvalidArgument("WalkSpec: steps must not exceed the half width");
    if (coin_state.size() != 2 || std::abs(coin_state.norm() - Real(1)) > Real(1e-12)) {
      throw InvalidArgument("WalkSpec: coin state must be a normalized 2-vector");
    }
    if (coin.rows() != 2 || coin.cols() != 2 || unitarity_defect(coin) > Real(1e-12)) {
      throw InvalidArgument("WalkSpec: coin operator must be a 2x2 unitary");
    }
  }
};

// X |x+1> = |x>, cyclic on 2d+1 sites.
template <typename Real = double>
CMatrix<Real> walk_shift(int half_width) {
  const Index n = 2 * static_cast<Index>(half_width) + 1;
  CMatrix<Real> x = CMatrix<Real>::Zero(n, n);
  for (Index i = 0; i < n; ++i) x(i, (i + 1) % n) = Real(1);
  return x;
}

// U = S (C (x) 1), S = P_0 (x) X^dagger + P_1 (x) X.
template <typename Real>
CMatrix<Real> walk_step_unitary(const WalkSpec<Real>& spec) {
  spec.validate();
  const CMatrix<Real> x = walk_shift<Real>(spec.half_width);
  const Index n = x.rows();
  CMatrix<Real> p0 = CMatrix<Real>::Zero(2, 2);
  CMatrix<Real> p1 = CMatrix<Real>::Zero(2, 2);
  p0(0, 0) = Real(1);
  p1(1, 1) = Real(1);
  const CMatrix<Real> s = kron<Real>(p0, CMatrix<Real>(x.adjoint())) + kron<Real>(p1, x);
  return s * kron<Real>(spec.coin, identity<Real>(n));
}

template <typename Real = double>
struct WalkResult {
  // Row t holds (q, p) of every mode after t steps, column = mode index.
  RMatrix<Real> q;
  RMatrix<Real> p;
  RVector<Real> distribution;  // P(x) at T, x = -d..d
  std::vector<Real> sigma;     // sigma(t) for t = 0..T
  bool light_cone_exact = true;

  Real sigma_final() const { return sigma.back(); }
  Real sigma_half() const { return sigma[sigma.size() / 2]; }
};

namespace detail {

template <typename Real>
Real position_sigma(const RVector<Real>& q, const RVector<Real>& p, int half_width) {
  const Index n = 2 * static_cast<Index>(half_width) + 1;
  Real mean = Real(0), second = Real(0);
  for (int c = 0; c < 2; ++c) {
    for (Index i = 0; i < n; ++i) {
      const Index m = c * n + i;
      const Real prob = q(m) * q(m) + p(m) * p(m);
      const Real x = Real(i - half_width);
      mean += prob * x;
      second += prob * x * x;
    }
  }
  return std::sqrt(std::max(Real(0), second - mean * mean));
}

}  // namespace detail

// Each step applies the symplectic map of U to the hidden particles of all
// 2(2d+1) modes. Light-cone zeros are checked bit-exactly.
template <typename Real>
WalkResult<Real> run_walk(const WalkSpec<Real>& spec) {
  spec.validate();
  const auto map = unitary_to_symplectic<Real>(walk_step_unitary(spec), Real(1e-12));
  const Index dim = spec.dim();
  const Index n = spec.sites();
  CVector<Real> psi0 = CVector<Real>::Zero(dim);
  psi0(spec.index(0, 0)) = spec.coin_state(0);
  psi0(spec.index(1, 0)) = spec.coin_state(1);
  RVector<Real> y(2 * dim);
  y << psi0.real(), psi0.imag();

  WalkResult<Real> res;
  res.q.resize(spec.steps + 1, dim);
  res.p.resize(spec.steps + 1, dim);
  for (int t = 0; t <= spec.steps; ++t) {
    if (t > 0) y = map.matrix() * y;
    res.q.row(t) = y.head(dim).transpose();
    res.p.row(t) = y.tail(dim).transpose();
    for (int c = 0; c < 2; ++c) {
      for (int x = -spec.half_width; x <= spec.half_width; ++x) {
        if (std::abs(x) <= t) continue;
        const Index m = spec.index(c, x);
        if (y(m) != Real(0) || y(dim + m) != Real(0)) res.light_cone_exact = false;
      }
    }
    res.sigma.push_back(detail::position_sigma<Real>(y.head(dim), y.tail(dim), spec.half_width));
    const Real norm = y.squaredNorm();
    if (std::abs(norm - Real(1)) > Real(1e-10)) throw InvariantViolation("run_walk: normalization drifted");
  }
  res.distribution = RVector<Real>::Zero(n);
  for (int c = 0; c < 2; ++c) {
    for (Index i = 0; i < n; ++i) {
      const Index m = c * n + i;
      res.distribution(i) += y(m) * y(m) + y(dim + m) * y(dim + m);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Beam-splitter mesh

enum class ElementKind { beam_splitter, phase_shifter };

template <typename Real = double>
struct MeshElement {
  ElementKind kind;
  Index mode;  // splitters act on (mode, mode + 1)
  Real theta;  // splitters only
  Real phi;
};

// B(theta, phi) = [[cos, -e^{-i phi} sin], [e^{i phi} sin, cos]] on (m, m+1);
// a phase shifter multiplies mode m by e^{i phi}.
template <typename Real>
CMatrix<Real> element_unitary(const MeshElement<Real>& e, Index n) {
  CMatrix<Real> u = identity<Real>(n);
  if (e.kind == ElementKind::phase_shifter) {
    u(e.mode, e.mode) = std::polar(Real(1), e.phi);
    return u;
  }
  const Real c = std::cos(e.theta), s = std::sin(e.theta);
  u(e.mode, e.mode) = c;
  u(e.mode, e.mode + 1) = -std::polar(s, -e.phi);
  u(e.mode + 1, e.mode) = std::polar(s, e.phi);
  u(e.mode + 1, e.mode + 1) = c;
  return u;
}

template <typename Real = double>
struct OpticalMesh {
  Index modes = 0;
  std::vector<MeshElement<Real>> elements;  // application order
  CMatrix<Real> target;

  CMatrix<Real> unitary() const {
    CMatrix<Real> u = identity<Real>(modes);
    for (const auto& e : elements) u = element_unitary(e, modes) * u;
    return u;
  }

  std::size_t splitter_count() const {
    std::size_t k = 0;
    for (const auto& e : elements) k += e.kind == ElementKind::beam_splitter ? 1 : 0;
    return k;
  }

  Real reconstruction_error() const { return (unitary() - target).cwiseAbs().maxCoeff(); }
};

// Triangular nulling: column by column, entries below the diagonal are
// zeroed bottom-up by splitters on neighbouring rows, B_K^dagger...B_1^dagger U = D.
// Hence U = B_1 ... B_K D: the phases of D act first, then B_K down to B_1.
template <typename Real>
OpticalMesh<Real> mesh_decompose(const CMatrix<Real>& u, Real tol = Real(1e-10)) {
  if (u.rows() != u.cols()) throw DimensionError("mesh_decompose: matrix must be square");
  if (unitarity_defect(u) > tol) throw InvalidArgument("mesh_decompose: matrix is not unitary");
  const Index n = u.rows();
  CMatrix<Real> w = u;
  std::vector<MeshElement<Real>> splitters;
  for (Index c = 0; c + 1 < n; ++c) {
    for (Index r = n - 1; r > c; --r) {
      const Complex<Real> a = w(r - 1, c);
      const Complex<Real> b = w(r, c);
      const Real theta = std::atan2(std::abs(b), std::abs(a));
      const Real phi = (std::abs(b) > Real(0) ? std::arg(b) : Real(0)) - (std::abs(a) > Real(0) ? std::arg(a) : Real(0));
      const MeshElement<Real> e{ElementKind::beam_splitter, r - 1, theta, phi};
      // Apply B^dagger to rows (r-1, r).
      const CMatrix<Real> bd = element_unitary(e, n).block(r - 1, r - 1, 2, 2).adjoint();
      w.middleRows(r - 1, 2) = (bd * w.middleRows(r - 1, 2)).eval();
      w(r, c) = Real(0);
      splitters.push_back(e);
    }
  }
  OpticalMesh<Real> mesh;
  mesh.modes = n;
  mesh.target = u;
  for (Index m = 0; m < n; ++m) mesh.elements.push_back({ElementKind::phase_shifter, m, Real(0), std::arg(w(m, m))});
  for (auto it = splitters.rbegin(); it != splitters.rend(); ++it) mesh.elements.push_back(*it);
  if (mesh.reconstruction_error() > tol) throw InvariantViolation("mesh_decompose: reconstruction failed");
  return mesh;
}

// ---------------------------------------------------------------------------
// Hilbert-space bandwidth

template <typename Real = double>
struct Bandwidth {
  Index linear = 0;  // max |i - j| over nonzero entries
  Index cyclic = 0;  // same with the distance taken mod D
};

inline constexpr double kBandwidthThreshold = 1e-12;

// `ordering[k]` is the original basis index placed at position k; empty
// means the natural order.
template <typename Real>
Bandwidth<Real> hilbert_bandwidth(const CMatrix<Real>& a, const std::vector<Index>& ordering = {},
                                  Real threshold = Real(kBandwidthThreshold)) {
  if (a.rows() != a.cols()) throw DimensionError("hilbert_bandwidth: matrix must be square");
  const Index n = a.rows();
  std::vector<Index> pos(static_cast<std::size_t>(n));
  if (ordering.empty()) {
    std::iota(pos.begin(), pos.end(), Index(0));
  } else {
    if (static_cast<Index>(ordering.size()) != n) throw DimensionError("hilbert_bandwidth: ordering has wrong length");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Index k = 0; k < n; ++k) {
      const Index orig = ordering[static_cast<std::size_t>(k)];
      if (orig < 0 || orig >= n || seen[static_cast<std::size_t>(orig)]) {
        throw InvalidArgument("hilbert_bandwidth: ordering is not a permutation");
      }
      seen[static_cast<std::size_t>(orig)] = true;
      pos[static_cast<std::size_t>(orig)] = k;
    }
  }
  Bandwidth<Real> bw;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(a(i, j)) <= threshold) continue;
      const Index dist = std::abs(pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]);
      bw.linear = std::max(bw.linear, dist);
      bw.cyclic = std::max(bw.cyclic, std::min(dist, n - dist));
    }
  }
  return bw;
}

// ---------------------------------------------------------------------------
// Cost accounting

struct QuditSystem {
  std::uint64_t d;
};
struct MultiPartySystem {
  std::uint64_t parties;
  std::uint64_t local_dim;
};
struct OpticalSystem {
  std::uint64_t modes;
};
struct WalkSystem {
  std::uint64_t half_width;
};
struct ClusterSystem {
  std::uint64_t qubits;
};

using SystemDescriptor = std::variant<QuditSystem, MultiPartySystem, OpticalSystem, WalkSystem, ClusterSystem>;

enum class Verdict { efficient, inefficient };

inline const char* verdict_name(Verdict v) { return v == Verdict::efficient ? "efficient" : "inefficient"; }

struct CostReport {
  std::string system;
  std::string size_parameter;
  std::uint64_t size = 0;
  std::uint64_t particles_per_run = 0;
  std::uint64_t bases = 0;
  std::uint64_t qst_runs = 0;
  std::uint64_t qpt_runs = 0;
  std::optional<std::int64_t> hilbert_bandwidth;
  Verdict verdict = Verdict::efficient;
  // log2(f(2s) / f(s)) over successive doublings of the size parameter.
  std::vector<double> growth_exponents;
  bool extrapolated = false;
  bool saturated = false;  // some count exceeded 64 bits and was clamped
  std::string note;
};

namespace detail {

// Multiplication saturating at 2^64 - 1; `saturated` records the clamp.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, bool& saturated) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > kMax / a) {
    saturated = true;
    return kMax;
  }
  return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, bool& saturated) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp && !saturated; ++i) out = saturating_mul(out, base, saturated);
  return out;
}

// Nonzero amplitudes of the 1-D cluster state CZ-chain |+>^n, enumerated.
inline std::uint64_t cluster_nonzero_amplitudes(std::uint64_t n) {
  if (n > 16) throw InvalidArgument("cluster enumeration is limited to 16 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::uint64_t count = 0;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  for (std::uint64_t x = 0; x < dim; ++x) {
    int sign = 1;
    for (std::uint64_t i = 0; i + 1 < n; ++i) {
      if (((x >> i) & 1u) && ((x >> (i + 1)) & 1u)) sign = -sign;
    }
    if (std::abs(sign * amp) > kBandwidthThreshold) ++count;
  }
  return count;
}

// Growth is polynomial when the doubling exponents stay bounded; an
// exponential count has exponents that grow with the size.
inline bool grows_polynomially(const std::vector<double>& exps) {
  if (exps.size() < 2) return true;
  return exps.back() <= exps.front() + 0.5;
}

inline std::vector<double> doubling_exponents(const std::function<double(std::uint64_t)>& f, std::uint64_t s0,
                                              int doublings) {
  std::vector<double> out;
  std::uint64_t s = s0;
  for (int k = 0; k < doublings; ++k) {
    out.push_back(std::log2(f(2 * s) / f(s)));
    s *= 2;
  }
  return out;
}

}  // namespace detail

// Hidden particles per run, tomography run counts and an
// efficient/inefficient verdict from the growth of particles_per_run in the
// declared size parameter.
inline CostReport sac_cost(const SystemDescriptor& system) {
  CostReport rep;
  auto checked_mul = [&rep](std::uint64_t a, std::uint64_t b) { return detail::saturating_mul(a, b, rep.saturated); };
  auto checked_pow = [&rep](std::uint64_t a, std::uint64_t b) { return detail::saturating_pow(a, b, rep.saturated); };
  auto fill_runs = [&rep, &checked_mul](std::uint64_t dim) {
    rep.particles_per_run = dim;
    rep.bases = checked_mul(dim, dim);
    rep.qst_runs = rep.bases;
    rep.qpt_runs = checked_mul(rep.bases, rep.qst_runs);  // d^2 inputs x d^2 bases
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuditSystem>) {
          if (s.d < 2) throw InvalidArgument("sac_cost: qudit dimension must be >= 2");
          rep.system = "qudit";
          rep.size_parameter = "d";
          rep.size = s.d;
          fill_runs(s.d);
          rep.growth_exponents = detail::doubling_exponents([](std::uint64_t d) { return double(d); }, 2, 4);
        } else if constexpr (std::is_same_v<T, MultiPartySystem>) {
          if (s.parties < 1 || s.local_dim < 2) throw InvalidArgument("sac_cost: need n >= 1 parties, d >= 2");
          rep.system = "multiparty";
          rep.size_parameter = "n";
          rep.size = s.parties;
          fill_runs(checked_pow(s.local_dim, s.parties));
          const double d = double(s.local_dim);
          rep.growth_exponents =
              detail::doubling_exponents([d](std::uint64_t n) { return std::pow(d, double(n)); }, 2, 4);
          rep.note = "d^n hidden particles per basis";
        } else if constexpr (std::is_same_v<T, OpticalSystem>) {
          if (s.modes < 1) throw InvalidArgument("sac_cost: need at least one mode");
          rep.system = "optics";
          rep.size_parameter = "N";
          rep.size = s.modes;
          fill_runs(s.modes);
          rep.hilbert_bandwidth = 1;  // nearest-neighbour splitters
          rep.growth_exponents = detail::doubling_exponents([](std::uint64_t n) { return double(n); }, 2, 4);
        } else if constexpr (std::is_same_v<T, WalkSystem>) {
          if (s.half_width < 1) throw InvalidArgument("sac_cost: walk half width must be >= 1");
          rep.system = "walk";
          rep.size_parameter = "d";
          rep.size = s.half_width;
          fill_runs(checked_mul(2, checked_mul(2, s.half_width) + 1));
          // Step unitary in walker-major order (x, c) -> 2 (x + d) + c.
          if (s.half_width <= 64) {
            WalkSpec<double> spec;
            spec.half_width = static_cast<int>(s.half_width);
            const CMatrix<double> u = walk_step_unitary(spec);
            std::vector<Index> order;
            const Index sites = spec.sites();
            for (Index i = 0; i < sites; ++i) {
              order.push_back(i);
              order.push_back(sites + i);
            }
            rep.hilbert_bandwidth = hilbert_bandwidth<double>(u, order).cyclic;
          }
          rep.growth_exponents =
              detail::doubling_exponents([](std::uint64_t d) { return 2.0 * (2.0 * double(d) + 1.0); }, 2, 4);
        } else {
          if (s.qubits < 1) throw InvalidArgument("sac_cost: cluster state needs at least one qubit");
          rep.system = "cluster";
          rep.size_parameter = "n";
          rep.size = s.qubits;
          std::vector<double> counts;  // counts at n = 2, 4, 8, 16
          for (std::uint64_t n = 2; n <= 16; n *= 2) {
            counts.push_back(double(detail::cluster_nonzero_amplitudes(n)));
          }
          for (std::size_t k = 0; k + 1 < counts.size(); ++k) rep.growth_exponents.push_back(std::log2(counts[k + 1] / counts[k]));
          std::uint64_t particles = 0;
          if (s.qubits <= 16) {
            particles = detail::cluster_nonzero_amplitudes(s.qubits);
          } else {
            // Every enumerated size has all 2^n amplitudes nonzero.
            particles = checked_pow(2, s.qubits);
            rep.extrapolated = true;
            rep.note = "nonzero amplitude count extrapolated from n <= 16 enumeration";
          }
          rep.particles_per_run = particles;
          rep.bases = checked_mul(particles, particles);
          rep.qst_runs = rep.bases;
          rep.qpt_runs = checked_mul(rep.bases, rep.qst_runs);
        }
      },
      system);
  rep.verdict = detail::grows_polynomially(rep.growth_exponents) ? Verdict::efficient : Verdict::inefficient;
  return rep;
}

// ---------------------------------------------------------------------------
// 1-D field on a grid

template <typename Real = double>
struct FieldGrid {
  std::vector<Real> x;  // x_i = a + i h
  Real spacing = Real(0);
  QuadraticHamiltonian<Real> hamiltonian;
};

// H = -(1/2) d^2/dx^2 + V(x) with the three-point Laplacian and zero
// boundary values outside [a, b].
template <typename Real>
FieldGrid<Real> field_grid(const std::function<Real(Real)>& potential, Index n, Real a, Real b) {
  if (n < 8) throw InvalidArgument("field_grid: need at least 8 grid points");
  if (!(b > a)) throw InvalidArgument("field_grid: degenerate box");
  const Real h = (b - a) / Real(n - 1);
  std::vector<Real> xs(static_cast<std::size_t>(n));
  CMatrix<Real> m = CMatrix<Real>::Zero(n, n);
  const Real kin = Real(1) / (h * h);
  for (Index i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = a + Real(i) * h;
    m(i, i) = kin + potential(xs[static_cast<std::size_t>(i)]);
    if (i + 1 < n) {
      m(i, i + 1) = -kin / Real(2);
      m(i + 1, i) = -kin / Real(2);
    }
  }
  return {std::move(xs), h, QuadraticHamiltonian<Real>(m)};
}

// exp(-(x - x0)^2 / (4 sigma^2) + i k0 x) sampled on the grid, unit 2-norm.
template <typename Real>
PureState<Real> gaussian_packet(const FieldGrid<Real>& grid, Real x0, Real sigma, Real k0 = Real(0)) {
  CVector<Real> v(static_cast<Index>(grid.x.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const Real x = grid.x[static_cast<std::size_t>(i)];
    v(i) = std::polar(std::exp(-(x - x0) * (x - x0) / (Real(4) * sigma * sigma)), k0 * x);
  }
  return PureState<Real>::normalized(v);
}

template <typename Real>
std::pair<Real, Real> position_moments(const FieldGrid<Real>& grid, const CVector<Real>& psi) {
  Real mean = Real(0), second = Real(0);
  for (Index i = 0; i < psi.size(); ++i) {
    const Real prob = std::norm(psi(i));
    const Real x = grid.x[static_cast<std::size_t>(i)];
    mean += prob * x;
    second += prob * x * x;
  }
  return {mean, second - mean * mean};
}

}  // namespace sacsim
