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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sacsim/io.hpp"
#include "sacsim/random.hpp"

namespace sacsim::cli {

namespace fs = std::filesystem;

namespace {

using CMat = CMatrix<double>;
using CVec = CVector<double>;

constexpr long long kMaxEvolveDim = 1024;
constexpr long long kMaxTomographyDim = 8;
constexpr long long kMaxLindbladDim = 16;

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    files_.push_back(name);
    return out;
  }

  void json_file(const std::string& name, const json& doc) { open(name) << doc.dump(2) << '\n'; }

  CommandOutcome finish(std::optional<std::string> breach = std::nullopt) { return {files_, std::move(breach)}; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

// Records the first failed check.
class BreachLog {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok && !first_) first_ = what;
  }
  std::optional<std::string> take() { return std::move(first_); }

 private:
  std::optional<std::string> first_;
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

CMat matrix_param(const ExperimentConfig& cfg, const std::string& key) {
  try {
    return io::matrix_from_json(cfg.params.at(key));
  } catch (const std::exception& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

CVec vector_param(const ExperimentConfig& cfg, const std::string& key) {
  try {
    return io::vector_from_json(cfg.params.at(key));
  } catch (const std::exception& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

PureState<double> state_param(const ExperimentConfig& cfg, const std::string& key, Index d) {
  const CVec v = vector_param(cfg, key);
  if (v.size() != d) throw ConfigError("parameter '" + key + "' has dimension " + std::to_string(v.size()));
  try {
    return PureState<double>(v, 1e-9);
  } catch (const InvalidArgument& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

std::uint64_t sub_seed(const ExperimentConfig& cfg, const std::string& component) {
  Rng rng = cfg.stream(component);
  return rng();
}

CMat number_operator(Index d) {
  CMat n = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i) n(i, i) = double(i);
  return n;
}

// sum_k sqrt(k) |k-1><k|
CMat lowering_operator(Index d) {
  CMat a = CMat::Zero(d, d);
  for (Index k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

// ---------------------------------------------------------------------------
// evolve

CommandOutcome run_evolve(const ExperimentConfig& cfg, const fs::path& dir) {
  CMat h;
  if (cfg.has("hamiltonian")) {
    h = matrix_param(cfg, "hamiltonian");
    if (h.rows() != h.cols() || h.rows() > kMaxEvolveDim) throw ConfigError("'hamiltonian' must be square, d <= 1024");
    if (hermiticity_defect(h) > 1e-12) throw ConfigError("'hamiltonian' is not Hermitian");
  } else {
    const Index d = cfg.get_int("d", 4, 1, kMaxEvolveDim);
    Rng rng = cfg.stream("hamiltonian");
    h = random_hermitian<double>(d, rng);
  }
  const Index d = h.rows();
  if (cfg.has("d") && cfg.get_int("d", d, 1, kMaxEvolveDim) != d) throw ConfigError("'d' disagrees with 'hamiltonian'");
  PureState<double> psi0 = [&] {
    if (cfg.has("state")) return state_param(cfg, "state", d);
    Rng rng = cfg.stream("state");
    return random_state<double>(d, rng);
  }();
  const double t = cfg.get_real("t", 1.0, 0.0, 1e6);
  const std::string method = cfg.get_text("method", "exact", {"exact", "midpoint"});
  EvolveOptions<double> opts;
  opts.method = method == "exact" ? Integrator::exact : Integrator::midpoint;
  opts.dt = cfg.get_real("dt", 1e-3, 1e-9, 1.0);
  opts.samples = static_cast<int>(cfg.get_int("samples", 101, 1, 1000000));
  opts.norm_tol = cfg.tolerance_or(1e-9);
  if (opts.method == Integrator::midpoint && t / opts.dt > 1e9) throw ConfigError("t / dt exceeds 1e9 steps");
  const int bj = static_cast<int>(cfg.get_int("basis_j", 0, 0, d - 1));
  const int bk = static_cast<int>(cfg.get_int("basis_k", 0, 0, d - 1));
  const auto basis = (bj == 0 && bk == 0) ? BasisLabel<double>::computational(d) : hw_eigenbasis<double>(bj, bk, d);

  const QuadraticHamiltonian<double> ham(h);
  const auto traj = evolve(ham, to_phase_space(psi0, basis), t, opts);

  const CVec final_amps = basis.vectors() * traj.final_state().coordinates();
  const CVec oracle = hermitian_propagator<double>(h, t) * psi0.amplitudes();
  double norm_drift = 0, energy_drift = 0;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    norm_drift = std::max(norm_drift, std::abs(traj.states[s].norm_squared() - 1.0));
    energy_drift = std::max(energy_drift, std::abs(traj.energies[s] - traj.energies.front()));
  }
  const double oracle_error = (final_amps - oracle).norm();
  const double energy_tol = 1e-7 * std::max(1.0, std::abs(traj.energies.front()));

  OutputSet out(dir);
  {
    auto f = out.open("trajectory.csv");
    io::write_trajectory_csv(f, traj);
  }
  out.json_file("evolve_summary.json", {{"d", d},
                                        {"t", t},
                                        {"method", method},
                                        {"dt", opts.dt},
                                        {"basis", basis.name()},
                                        {"samples", traj.times.size()},
                                        {"hamiltonian", io::to_json(h)},
                                        {"initial_state", io::to_json(psi0.amplitudes())},
                                        {"final_state", io::to_json(final_amps)},
                                        {"oracle_error", oracle_error},
                                        {"norm_drift", norm_drift},
                                        {"energy_drift", energy_drift}});
  BreachLog log;
  log.check(energy_drift <= energy_tol, "energy drift " + sci(energy_drift) + " above " + sci(energy_tol));
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// walk

CommandOutcome run_walk(const ExperimentConfig& cfg, const fs::path& dir) {
  WalkSpec<double> spec;
  spec.half_width = static_cast<int>(cfg.get_int("d", 100, 1, 2000));
  spec.steps = static_cast<int>(cfg.get_int("T", std::min(100, spec.half_width), 0, 2000));
  if (spec.steps > spec.half_width) throw ConfigError("'T' must not exceed the half width 'd'");
  const std::string coin = cfg.get_text("coin", "hadamard", {"hadamard", "random"});
  if (coin == "random") {
    Rng rng = cfg.stream("coin");
    spec.coin = haar_unitary<double>(2, rng);
  }
  const std::string coin_state = cfg.get_text("coin_state", "up", {"up", "down", "symmetric", "random"});
  if (coin_state == "down") {
    spec.coin_state = CVec::Unit(2, 1);
  } else if (coin_state == "symmetric") {
    spec.coin_state = CVec(2);
    spec.coin_state << 1.0 / std::sqrt(2.0), Complex<double>(0, 1.0 / std::sqrt(2.0));
  } else if (coin_state == "random") {
    Rng rng = cfg.stream("coin_state");
    spec.coin_state = random_state<double>(2, rng).amplitudes();
  }
  const auto walk = sacsim::run_walk(spec);

  double norm_drift = 0;
  for (Index s = 0; s < walk.q.rows(); ++s) {
    const double n2 = walk.q.row(s).squaredNorm() + walk.p.row(s).squaredNorm();
    norm_drift = std::max(norm_drift, std::abs(n2 - 1.0));
  }
  const Index last = walk.q.rows() - 1;
  double origin = 0;
  for (int c = 0; c < 2; ++c) {
    const Index m = spec.index(c, 0);
    origin = std::max(origin, walk.q(last, m) * walk.q(last, m) + walk.p(last, m) * walk.p(last, m));
  }
  const double half = walk.sigma_half();
  json summary = {{"d", spec.half_width},
                  {"T", spec.steps},
                  {"coin", io::to_json(spec.coin)},
                  {"coin_state", io::to_json(spec.coin_state)},
                  {"light_cone_exact", walk.light_cone_exact},
                  {"norm_drift", norm_drift},
                  {"origin_mode_probability", origin},
                  {"sigma", walk.sigma},
                  {"sigma_final", walk.sigma_final()},
                  {"sigma_half", half},
                  {"classical_ratio", std::sqrt(2.0)}};
  summary["sigma_ratio"] = half > 0 ? json(walk.sigma_final() / half) : json();

  OutputSet out(dir);
  {
    auto f = out.open("walk_trajectory.csv");
    io::write_walk_trajectory_csv(f, walk);
  }
  {
    auto f = out.open("walk_distribution.csv");
    io::write_distribution_csv(f, walk);
  }
  out.json_file("walk_summary.json", summary);
  BreachLog log;
  log.check(walk.light_cone_exact, "amplitude found outside the light cone");
  log.check(norm_drift <= cfg.tolerance_or(1e-10), "norm drift " + sci(norm_drift));
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// tomography

struct KrausChannel {
  std::string name;
  std::vector<CMat> kraus;

  DensityMatrix<double> apply(const PureState<double>& psi) const {
    const Index d = psi.dim();
    CMat rho = CMat::Zero(d, d);
    for (const auto& k : kraus) {
      const CVec v = k * psi.amplitudes();
      rho += v * v.adjoint();
    }
    return DensityMatrix<double>::symmetrized(rho);
  }

  // (1/d) sum_ij E(|i><j|) (x) |i><j|
  CMat choi(Index d) const {
    CMat c = CMat::Zero(d * d, d * d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        CMat unit = CMat::Zero(d, d);
        unit(i, j) = 1.0;
        CMat image = CMat::Zero(d, d);
        for (const auto& k : kraus) image += k * unit * k.adjoint();
        c += kron<double>(image, unit);
      }
    }
    return c / double(d);
  }
};

KrausChannel make_channel(const ExperimentConfig& cfg, Index d) {
  const std::string name =
      cfg.get_text("channel", "unitary", {"unitary", "dephasing", "depolarizing", "amplitude_damping"});
  const double p = cfg.get_real("p", 0.3, 0.0, 1.0);
  KrausChannel ch{name, {}};
  if (name == "unitary") {
    Rng rng = cfg.stream("channel");
    ch.kraus.push_back(haar_unitary<double>(d, rng));
  } else if (name == "dephasing") {
    ch.kraus.push_back(std::sqrt(1 - p) * identity<double>(d));
    for (Index k = 0; k < d; ++k) {
      CMat proj = CMat::Zero(d, d);
      proj(k, k) = std::sqrt(p);
      ch.kraus.push_back(proj);
    }
  } else if (name == "depolarizing") {
    ch.kraus.push_back(std::sqrt(1 - p) * identity<double>(d));
    for (const auto& [j, k] : hw_index_pairs(d, true)) {
      ch.kraus.push_back(std::sqrt(p) / double(d) * hw_operator<double>(j, k, d));
    }
  } else {
    CMat k0 = identity<double>(d);
    k0(d - 1, d - 1) = std::sqrt(1 - p);
    CMat k1 = CMat::Zero(d, d);
    k1(0, d - 1) = std::sqrt(p);
    ch.kraus = {k0, k1};
  }
  return ch;
}

CommandOutcome run_tomography(const ExperimentConfig& cfg, const fs::path& dir) {
  const Index d = cfg.get_int("d", 3, 2, kMaxTomographyDim);
  const std::string mode = cfg.get_text("mode", "all", {"all", "qst", "qpt", "verify"});
  ReadoutOptions<double> ropts;
  ropts.shots = static_cast<std::uint64_t>(cfg.get_int("shots", 0, 0, 1000000000));
  ropts.seed = sub_seed(cfg, "readout");
  ropts.clip = cfg.get_int("clip", ropts.shots > 0 ? 1 : 0, 0, 1) == 1;
  const bool exact = ropts.shots == 0;

  OutputSet out(dir);
  BreachLog log;
  if (mode == "all" || mode == "qst") {
    PureState<double> psi = [&] {
      if (cfg.has("state")) return state_param(cfg, "state", d);
      Rng rng = cfg.stream("state");
      return random_state<double>(d, rng);
    }();
    const auto qst = sac_qst(psi, ropts);
    json doc = io::to_json(qst);
    doc["input_state"] = io::to_json(psi.amplitudes());
    doc["shots"] = ropts.shots;
    out.json_file("qst.json", doc);
    const double tol = cfg.tolerance_or(1e-9);
    if (exact) log.check(*qst.fidelity >= 1 - tol, "QST fidelity " + std::to_string(*qst.fidelity));
  }
  if (mode == "all" || mode == "qpt") {
    const KrausChannel ch = make_channel(cfg, d);
    const auto est = sac_qpt<double>([&ch](const PureState<double>& psi) { return ch.apply(psi); }, d, ropts);
    const double dist = trace_distance<double>(est.choi, ch.choi(d));
    json doc = io::to_json(est);
    doc["channel"] = ch.name;
    doc["oracle_trace_distance"] = dist;
    doc["shots"] = ropts.shots;
    out.json_file("qpt.json", doc);
    const double tol = cfg.tolerance_or(1e-8);
    if (exact) log.check(dist < tol, "QPT Choi trace distance " + sci(dist));
  }
  if (mode == "all" || mode == "verify") {
    Rng rng = cfg.stream("hamiltonian");
    const CMat h = random_hermitian<double>(d, rng);
    const double t = cfg.get_real("t", 1.0, 0.0, 1e6);
    VerificationOptions<double> vopts;
    vopts.epsilon = cfg.tolerance_or(1e-8);
    vopts.observables = {{"number", number_operator(d)},
                         {"shift_quadrature", CMat((hw_shift<double>(1, d) + hw_shift<double>(1, d).adjoint()) / 2.0)}};
    const auto report = verify_simulator<double>(hermitian_propagator<double>(h, t), sac_evolution_simulator<double>(h, t), vopts);
    json doc = io::to_json(report);
    doc["hamiltonian"] = io::to_json(h);
    doc["t"] = t;
    out.json_file("verification.json", doc);
    log.check(report.pass, "strong distance " + sci(report.strong_distance) + " above epsilon");
  }
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// lindblad

CommandOutcome run_lindblad(const ExperimentConfig& cfg, const fs::path& dir) {
  const Index d = cfg.get_int("d", 2, 2, kMaxLindbladDim);
  const std::string model = cfg.get_text("model", "amplitude_damping", {"amplitude_damping", "dephasing", "random"});
  const double gamma = cfg.get_real("gamma", 0.5, 0.0, 1e3);
  const double omega = cfg.get_real("omega", 1.0, -1e3, 1e3);
  const double t = cfg.get_real("t", 5.0, 0.0, 1e4);
  DensityEvolveOptions<double> opts;
  opts.samples = static_cast<int>(cfg.get_int("samples", 101, 1, 100000));
  opts.trace_tol = cfg.tolerance_or(1e-10);

  CMat h = omega * number_operator(d);
  std::vector<JumpTerm<double>> jumps;
  if (model == "amplitude_damping") {
    jumps.push_back({gamma, lowering_operator(d)});
  } else if (model == "dephasing") {
    jumps.push_back({gamma, number_operator(d)});
  } else {
    Rng rng = cfg.stream("generator");
    h = omega * random_hermitian<double>(d, rng);
    jumps.push_back({gamma, CMat(ginibre<double>(d, d, rng) / std::sqrt(double(d)))});
  }
  const std::string init = cfg.get_text("initial", "superposition", {"excited", "superposition", "random"});
  DensityMatrix<double> rho0 = [&] {
    if (init == "excited") return DensityMatrix<double>::pure(PureState<double>::basis_state(d, d - 1));
    if (init == "random") {
      Rng rng = cfg.stream("state");
      return random_density<double>(d, rng);
    }
    return DensityMatrix<double>::pure(PureState<double>::normalized(CVec::Ones(d)));
  }();

  const auto gen = lindblad_generator<double>(h, jumps);
  const auto traj = evolve_density_vector(gen, vectorize_density(rho0), t, opts);

  double purity_defect = 0, trace_drift = 0, closed_form_error = 0;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const CMat rho = devectorize_matrix(traj.states[s]);
    purity_defect = std::max(purity_defect, std::abs(traj.purities[s] - (rho * rho).trace().real()));
    trace_drift = std::max(trace_drift, std::abs(traj.states[s].trace_coordinate() - Complex<double>(1)));
    const double ts = traj.times[s];
    if (model == "amplitude_damping") {
      // Nothing feeds the top level; it decays at rate gamma (d - 1).
      const double expected = std::exp(-gamma * double(d - 1) * ts) * rho0.matrix()(d - 1, d - 1).real();
      closed_form_error = std::max(closed_form_error, std::abs(rho(d - 1, d - 1).real() - expected));
    } else if (model == "dephasing") {
      for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
          const double djk = double(j - k);
          const Complex<double> expected =
              rho0.matrix()(j, k) * std::exp(Complex<double>(-gamma * djk * djk * ts / 2, -omega * djk * ts));
          closed_form_error = std::max(closed_form_error, std::abs(rho(j, k) - expected));
        }
      }
    }
  }
  const CMat rho_t = devectorize_matrix(traj.final_state());

  OutputSet out(dir);
  {
    auto f = out.open("density_trajectory.csv");
    io::write_density_csv(f, traj);
  }
  json summary = {{"d", d},
                  {"model", model},
                  {"gamma", gamma},
                  {"omega", omega},
                  {"t", t},
                  {"initial", init},
                  {"rho0", io::to_json(rho0.matrix())},
                  {"rho_final", io::to_json(rho_t)},
                  {"purity_final", traj.purities.back()},
                  {"purity_identity_defect", purity_defect},
                  {"trace_drift", trace_drift}};
  summary["closed_form_error"] = model == "random" ? json() : json(closed_form_error);
  out.json_file("lindblad_summary.json", summary);

  const auto shots = static_cast<std::uint64_t>(cfg.get_int("shots", 0, 0, 100000000));
  if (shots > 0) {
    const auto channel = dilate_kraus_set(kraus_from_generator(gen, t));
    const Eigen::SelfAdjointEigenSolver<CMat> eig(rho0.matrix());
    Mixture<double> mixture;
    for (Index i = 0; i < d; ++i) {
      if (eig.eigenvalues()(i) <= 1e-14) continue;
      mixture.weights.push_back(eig.eigenvalues()(i));
      mixture.states.push_back(PureState<double>::normalized(eig.eigenvectors().col(i)));
    }
    const auto est = mixture_dilation_simulate(channel, mixture, shots, sub_seed(cfg, "mixture"));
    out.json_file("mixture.json", {{"shots", shots},
                                   {"ancilla_dim", channel.ancilla_dim},
                                   {"components", mixture.weights.size()},
                                   {"rho_estimate", io::to_json(est.rho.matrix())},
                                   {"counts", est.counts},
                                   {"oracle_trace_distance", trace_distance<double>(est.rho.matrix(), rho_t)}});
  }

  BreachLog log;
  log.check(purity_defect <= 1e-10, "purity identity defect " + sci(purity_defect));
  if (model != "random") log.check(closed_form_error <= 1e-8, "closed-form error " + sci(closed_form_error));
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// trotter-scan

CMat pauli(char which) {
  CMat m(2, 2);
  if (which == 'X') m << 0, 1, 1, 0;
  if (which == 'Z') m << 1, 0, 0, -1;
  return m;
}

LocalHamiltonian<double> trotter_model(const ExperimentConfig& cfg, const std::string& model) {
  if (model == "xz") {
    if (cfg.has("n") && cfg.get_int("n", 1, 1, 1) != 1) throw ConfigError("model 'xz' has a single qubit");
    return LocalHamiltonian<double>(1, 2, {{{0}, pauli('X')}, {{0}, pauli('Z')}});
  }
  const int n = static_cast<int>(cfg.get_int("n", 3, 2, 12));
  const double hx = cfg.get_real("hx", 1.0, -1e3, 1e3);
  const double hz = cfg.get_real("hz", 0.5, -1e3, 1e3);
  const CMat zz = kron<double>(pauli('Z'), pauli('Z'));
  std::vector<LocalTerm<double>> terms;
  for (int i = 0; i + 1 < n; ++i) terms.push_back({{i, i + 1}, zz});
  for (int i = 0; i < n; ++i) terms.push_back({{i}, CMat(hz * pauli('Z'))});
  if (model == "ising") {
    for (int i = 0; i < n; ++i) terms.push_back({{i}, CMat(hx * pauli('X'))});
  }
  return LocalHamiltonian<double>(n, 2, std::move(terms));
}

CommandOutcome run_trotter_scan(const ExperimentConfig& cfg, const fs::path& dir) {
  const std::string model = cfg.get_text("model", "xz", {"xz", "ising", "commuting"});
  const auto h = trotter_model(cfg, model);
  const int chi = static_cast<int>(cfg.get_int("chi", 1, 1, 6));
  const double t = cfg.get_real("t", 1.0, 0.0, 1e4);
  const std::vector<int> rs = cfg.get_int_list("r", {4, 8, 16, 32, 64}, 1);
  const auto scan = error_scan(h, t, chi, rs);

  OutputSet out(dir);
  {
    auto f = out.open("trotter_scan.csv");
    io::write_scan_csv(f, scan);
  }
  json summary = io::to_json(scan);
  summary["model"] = model;
  summary["parties"] = h.parties();
  summary["hidden_particles"] = hidden_particle_count(h);
  const double expected = -2.0 * chi;
  summary["slope_within_10_percent"] =
      scan.slope ? json(std::abs(*scan.slope - expected) <= 0.1 * std::abs(expected)) : json();
  out.json_file("trotter_summary.json", summary);

  BreachLog log;
  if (model == "commuting") {
    double worst = 0;
    for (const auto& row : scan.rows) worst = std::max(worst, row.error);
    log.check(worst <= cfg.tolerance_or(1e-12), "commuting Trotter error " + sci(worst));
  }
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// optics

CommandOutcome run_optics(const ExperimentConfig& cfg, const fs::path& dir) {
  CMat u;
  if (cfg.has("unitary")) {
    u = matrix_param(cfg, "unitary");
    if (u.rows() != u.cols() || u.rows() > 64) throw ConfigError("'unitary' must be square with at most 64 modes");
    if (unitarity_defect(u) > 1e-10) throw ConfigError("'unitary' is not unitary");
  } else {
    const Index n = cfg.get_int("modes", 6, 1, 64);
    Rng rng = cfg.stream("unitary");
    u = haar_unitary<double>(n, rng);
  }
  const Index n = u.rows();
  const auto mesh = mesh_decompose<double>(u);
  const auto s = SymplecticMap<double>::from_unitary(u);
  const double err = mesh.reconstruction_error();
  const double sdef = s.defect();
  const double odef = orthogonality_defect<double>(s.matrix());
  const auto max_splitters = static_cast<std::size_t>(n * (n - 1) / 2);

  OutputSet out(dir);
  out.json_file("mesh.json", io::to_json(mesh));
  out.json_file("optics_summary.json", {{"modes", n},
                                        {"splitters", mesh.splitter_count()},
                                        {"max_splitters", max_splitters},
                                        {"reconstruction_error", err},
                                        {"symplectic_defect", sdef},
                                        {"orthogonality_defect", odef}});
  const double tol = cfg.tolerance_or(1e-10);
  BreachLog log;
  log.check(err < tol, "mesh reconstruction error " + sci(err));
  log.check(mesh.splitter_count() <= max_splitters, "too many beam splitters");
  log.check(sdef < tol && odef < tol, "S_U is not orthogonal-symplectic");
  return out.finish(log.take());
}

// ---------------------------------------------------------------------------
// cost

CommandOutcome run_cost(const ExperimentConfig& cfg, const fs::path& dir) {
  const std::string system = cfg.get_text("system", "multiparty", {"qudit", "multiparty", "optical", "walk", "cluster"});
  constexpr long long kMaxSize = 1LL << 40;
  SystemDescriptor desc;
  if (system == "qudit") {
    desc = QuditSystem{static_cast<std::uint64_t>(cfg.get_int("d", 2, 2, kMaxSize))};
  } else if (system == "multiparty") {
    desc = MultiPartySystem{static_cast<std::uint64_t>(cfg.get_int("n", 3, 1, 4096)),
                            static_cast<std::uint64_t>(cfg.get_int("d", 2, 2, 1 << 20))};
  } else if (system == "optical") {
    desc = OpticalSystem{static_cast<std::uint64_t>(cfg.get_int("modes", 8, 1, kMaxSize))};
  } else if (system == "walk") {
    desc = WalkSystem{static_cast<std::uint64_t>(cfg.get_int("d", 100, 1, kMaxSize))};
  } else {
    desc = ClusterSystem{static_cast<std::uint64_t>(cfg.get_int("n", 4, 1, 4096))};
  }
  OutputSet out(dir);
  out.json_file("cost.json", io::to_json(sac_cost(desc)));
  return out.finish();
}

// ---------------------------------------------------------------------------
// field

CommandOutcome run_field(const ExperimentConfig& cfg, const fs::path& dir) {
  const Index n = cfg.get_int("N", 256, 8, 4096);
  const std::string potential = cfg.get_text("potential", "harmonic", {"harmonic", "free", "double_well"});
  const double omega = cfg.get_real("omega", 1.0, 1e-6, 1e3);
  const double half_box = cfg.get_real("L", 10.0, 1e-3, 1e6);
  const double x0 = cfg.get_real("x0", 1.0, -half_box, half_box);
  const double sigma = cfg.get_real("sigma", 1.0 / std::sqrt(2.0 * omega), 1e-6, half_box);
  const double k0 = cfg.get_real("k0", 0.0, -1e6, 1e6);
  const double t = cfg.get_real("t", 2 * std::numbers::pi / omega, 0.0, 1e6);
  const double well = cfg.get_real("a", 1.5, 1e-3, half_box);

  std::function<double(double)> v;
  if (potential == "harmonic") {
    v = [omega](double x) { return 0.5 * omega * omega * x * x; };
  } else if (potential == "free") {
    v = [](double) { return 0.0; };
  } else {
    // Minima at +-a with curvature omega^2.
    v = [omega, well](double x) { return omega * omega * (x * x - well * well) * (x * x - well * well) / (8 * well * well); };
  }
  const auto grid = field_grid<double>(v, n, -half_box, half_box);
  const auto psi0 = gaussian_packet(grid, x0, sigma, k0);
  EvolveOptions<double> opts;
  opts.method = cfg.get_text("method", "exact", {"exact", "midpoint"}) == "exact" ? Integrator::exact : Integrator::midpoint;
  opts.dt = cfg.get_real("dt", 1e-3, 1e-9, 1.0);
  opts.samples = static_cast<int>(cfg.get_int("samples", 101, 1, 100000));
  opts.norm_tol = cfg.tolerance_or(1e-9);
  const auto basis = BasisLabel<double>::computational(n);
  const auto traj = evolve(grid.hamiltonian, to_phase_space(psi0, basis), t, opts);

  const CVec final_amps = traj.final_state().coordinates();
  const double return_fidelity = std::norm(psi0.amplitudes().dot(final_amps));
  double norm_drift = 0;
  for (const auto& s : traj.states) norm_drift = std::max(norm_drift, std::abs(s.norm_squared() - 1.0));
  const auto [mean0, var0] = position_moments(grid, psi0.amplitudes());
  const auto [mean1, var1] = position_moments(grid, final_amps);

  OutputSet out(dir);
  {
    auto f = out.open("field_trajectory.csv");
    f << "step,t,index,x,q,p,prob\n";
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
      const auto& hps = traj.states[s];
      const std::string ts = io::format_real(traj.times[s]);
      for (Index i = 0; i < n; ++i) {
        const double q = hps.q()(i), p = hps.p()(i);
        f << s << ',' << ts << ',' << i << ',' << io::format_real(grid.x[static_cast<std::size_t>(i)]) << ','
          << io::format_real(q) << ',' << io::format_real(p) << ',' << io::format_real(q * q + p * p) << '\n';
      }
    }
  }
  out.json_file("field_summary.json", {{"N", n},
                                       {"potential", potential},
                                       {"omega", omega},
                                       {"box", {-half_box, half_box}},
                                       {"spacing", grid.spacing},
                                       {"t", t},
                                       {"x0", x0},
                                       {"sigma", sigma},
                                       {"k0", k0},
                                       {"return_fidelity", return_fidelity},
                                       {"norm_drift", norm_drift},
                                       {"mean", {mean0, mean1}},
                                       {"variance", {var0, var1}}});
  return out.finish();
}

ParamSpec integer(std::string name, std::string help) { return {std::move(name), ParamType::integer, std::move(help)}; }
ParamSpec real(std::string name, std::string help) { return {std::move(name), ParamType::real, std::move(help)}; }
ParamSpec text(std::string name, std::string help) { return {std::move(name), ParamType::text, std::move(help)}; }
ParamSpec structured(std::string name, std::string help) {
  return {std::move(name), ParamType::structured, std::move(help)};
}

std::vector<CommandSpec> build_table() {
  return {
      {"evolve",
       "hidden-particle trajectory under a fixed Hamiltonian",
       {integer("d", "dimension of the random Hamiltonian (default 4)"), real("t", "final time (default 1)"),
        text("method", "exact | midpoint"), real("dt", "midpoint step (default 1e-3)"),
        integer("samples", "recorded samples (default 101)"), integer("basis_j", "HW basis index j (default 0)"),
        integer("basis_k", "HW basis index k (default 0)"), structured("hamiltonian", "matrix JSON"),
        structured("state", "vector JSON")},
       run_evolve},
      {"walk",
       "coined walk on 2d+1 sites",
       {integer("d", "half width (default 100)"), integer("T", "steps, at most d (default 100)"),
        text("coin", "hadamard | random"), text("coin_state", "up | down | symmetric | random")},
       run_walk},
      {"tomography",
       "state and process tomography plus a verification report",
       {integer("d", "dimension (default 3)"), text("mode", "all | qst | qpt | verify"),
        integer("shots", "shots per basis, 0 for exact readout"), integer("clip", "1 to clip nonphysical estimates"),
        text("channel", "unitary | dephasing | depolarizing | amplitude_damping"),
        real("p", "channel strength (default 0.3)"), real("t", "verification evolution time (default 1)"),
        structured("state", "vector JSON")},
       run_tomography},
      {"lindblad",
       "density-vector evolution under a Lindblad generator",
       {integer("d", "dimension (default 2)"), text("model", "amplitude_damping | dephasing | random"),
        real("gamma", "jump rate (default 0.5)"), real("omega", "level spacing (default 1)"),
        real("t", "final time (default 5)"), integer("samples", "recorded samples (default 101)"),
        text("initial", "excited | superposition | random"),
        integer("shots", "dilation Monte Carlo shots, 0 to skip")},
       run_lindblad},
      {"trotter-scan",
       "Trotter-Suzuki error versus step count",
       {text("model", "xz | ising | commuting"), integer("n", "qubits for ising/commuting (default 3)"),
        real("hx", "transverse field (default 1)"), real("hz", "longitudinal field (default 0.5)"),
        integer("chi", "Suzuki order, 1..6 (default 1)"), real("t", "total time (default 1)"),
        {"r", ParamType::int_list, "comma-separated step counts (default 4,8,16,32,64)"}},
       run_trotter_scan},
      {"optics",
       "beam-splitter mesh for a random or given unitary",
       {integer("modes", "number of modes (default 6)"), structured("unitary", "matrix JSON")},
       run_optics},
      {"cost",
       "resource counts and efficiency verdict",
       {text("system", "qudit | multiparty | optical | walk | cluster"), integer("d", "local dimension or half width"),
        integer("n", "parties or qubits"), integer("modes", "optical modes")},
       run_cost},
      {"field",
       "wave packet on a discretized line",
       {integer("N", "grid points (default 256)"), text("potential", "harmonic | free | double_well"),
        real("omega", "trap frequency (default 1)"), real("L", "box half width (default 10)"),
        real("x0", "packet center (default 1)"), real("sigma", "packet width"), real("k0", "packet momentum"),
        real("t", "final time (default one period)"), real("a", "double-well minimum"),
        text("method", "exact | midpoint"), real("dt", "midpoint step"), integer("samples", "recorded samples")},
       run_field},
  };
}

}  // namespace

const ParamSpec* CommandSpec::find(const std::string& param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

const std::vector<CommandSpec>& command_table() {
  static const std::vector<CommandSpec> table = build_table();
  return table;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : command_table()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace sacsim::cli
