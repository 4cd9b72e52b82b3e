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

#include "sacsim/io.hpp"

#include <cstdio>

namespace sacsim::io {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json to_json(const CMatrix<double>& m) {
  json re = json::array(), im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", {m.rows(), m.cols()}}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json to_json(const CVector<double>& v) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"dim", v.size()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json real_to_json(const RVector<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

CMatrix<double> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw InvalidArgument("matrix JSON needs \"dim\" and \"re\"");
  }
  const auto& dim = j.at("dim");
  if (!dim.is_array() || dim.size() != 2) throw InvalidArgument("matrix JSON \"dim\" must be [rows, cols]");
  const Index rows = dim[0].get<Index>(), cols = dim[1].get<Index>();
  if (rows < 1 || cols < 1) throw InvalidArgument("matrix JSON has an empty dimension");
  const json& re = j.at("re");
  const json im = j.contains("im") ? j.at("im") : json();
  CMatrix<double> m(rows, cols);
  if (!re.is_array() || static_cast<Index>(re.size()) != rows) throw InvalidArgument("matrix JSON row count mismatch");
  for (Index r = 0; r < rows; ++r) {
    const json& rr = re[static_cast<std::size_t>(r)];
    if (!rr.is_array() || static_cast<Index>(rr.size()) != cols) {
      throw InvalidArgument("matrix JSON column count mismatch");
    }
    for (Index c = 0; c < cols; ++c) {
      const double imag = im.is_null() ? 0.0 : im.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
      m(r, c) = Complex<double>(rr[static_cast<std::size_t>(c)].get<double>(), imag);
    }
  }
  return m;
}

CVector<double> vector_from_json(const json& j) {
  if (j.is_array()) {  // plain real list
    CVector<double> v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
    return v;
  }
  if (!j.is_object() || !j.contains("re")) throw InvalidArgument("vector JSON needs \"re\"");
  const json& re = j.at("re");
  const json im = j.contains("im") ? j.at("im") : json();
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != re.size()) {
    throw InvalidArgument("vector JSON \"dim\" does not match its entries");
  }
  if (!im.is_null() && im.size() != re.size()) throw InvalidArgument("vector JSON re/im length mismatch");
  CVector<double> v(static_cast<Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    v(static_cast<Index>(i)) = Complex<double>(re[i].get<double>(), im.is_null() ? 0.0 : im[i].get<double>());
  }
  return v;
}

json to_json(const OpticalMesh<double>& mesh) {
  json elements = json::array();
  for (const auto& e : mesh.elements) {
    if (e.kind == ElementKind::beam_splitter) {
      elements.push_back({{"type", "beam_splitter"}, {"modes", {e.mode, e.mode + 1}}, {"theta", e.theta}, {"phi", e.phi}});
    } else {
      elements.push_back({{"type", "phase_shifter"}, {"mode", e.mode}, {"phi", e.phi}});
    }
  }
  return {{"modes", mesh.modes},
          {"splitters", mesh.splitter_count()},
          {"elements", std::move(elements)},
          {"target", to_json(mesh.target)}};
}

json to_json(const CostReport& r) {
  json out = {{"system", r.system},
              {"size_parameter", r.size_parameter},
              {"size", r.size},
              {"particles_per_run", r.particles_per_run},
              {"bases", r.bases},
              {"qst_runs", r.qst_runs},
              {"qpt_runs", r.qpt_runs},
              {"verdict", verdict_name(r.verdict)},
              {"growth_exponents", r.growth_exponents},
              {"extrapolated", r.extrapolated},
              {"saturated", r.saturated}};
  out["hilbert_bandwidth"] = r.hilbert_bandwidth ? json(*r.hilbert_bandwidth) : json();
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json to_json(const VerificationReport<double>& r) {
  json weak = json::object();
  for (const auto& [name, v] : r.weak_distances) weak[name] = v;
  return {{"strong_distance", r.strong_distance},
          {"weak_distances", std::move(weak)},
          {"epsilon", r.epsilon},
          {"epsilon0", r.epsilon0},
          {"total_bound", r.total_bound},
          {"pass", r.pass},
          {"runs", r.runs}};
}

json to_json(const QstResult<double>& r) {
  json bases = json::array();
  for (const auto& rec : r.records) bases.push_back(rec.basis.name());
  json out = {{"runs", r.runs},
              {"bases", std::move(bases)},
              {"description", real_to_json(r.description)},
              {"rho", to_json(r.rho.matrix())},
              {"purity", r.rho.purity()}};
  out["fidelity"] = r.fidelity ? json(*r.fidelity) : json();
  return out;
}

json to_json(const ProcessEstimate<double>& e) {
  return {{"dim", e.dim}, {"run_count", e.run_count}, {"choi", to_json(e.choi)}};
}

json to_json(const ScanResult<double>& s) {
  json rows = json::array();
  for (const auto& row : s.rows) rows.push_back({{"r", row.r}, {"error", row.error}, {"bound", row.bound}});
  json out = {{"chi", s.chi},
              {"t", s.t},
              {"expected_slope", -2 * s.chi},
              {"fit_skipped", s.fit_skipped},
              {"fit_points", s.fit_points},
              {"rows", std::move(rows)}};
  out["slope"] = s.slope ? json(*s.slope) : json();
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj) {
  os << "step,t,basis,index,q,p,energy\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& hps = traj.states[s];
    const std::string basis = hps.basis().name();
    const std::string t = format_real(traj.times[s]);
    const std::string e = format_real(traj.energies[s]);
    for (Index i = 0; i < hps.dim(); ++i) {
      os << s << ',' << t << ",\"" << basis << "\"," << i << ',' << format_real(hps.q()(i)) << ','
         << format_real(hps.p()(i)) << ',' << e << '\n';
    }
  }
}

void write_walk_trajectory_csv(std::ostream& os, const WalkResult<double>& walk) {
  os << "step,t,basis,index,q,p,energy\n";
  for (Index s = 0; s < walk.q.rows(); ++s) {
    for (Index m = 0; m < walk.q.cols(); ++m) {
      os << s << ',' << s << ",\"computational\"," << m << ',' << format_real(walk.q(s, m)) << ','
         << format_real(walk.p(s, m)) << ",\n";
    }
  }
}

void write_distribution_csv(std::ostream& os, const WalkResult<double>& walk) {
  os << "x,prob\n";
  const Index n = walk.distribution.size();
  const Index d = (n - 1) / 2;
  for (Index i = 0; i < n; ++i) os << (i - d) << ',' << format_real(walk.distribution(i)) << '\n';
}

void write_density_csv(std::ostream& os, const DensityTrajectory<double>& traj) {
  os << "step,t,j,k,Q,P,purity,trace\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& dv = traj.states[s];
    const auto pairs = hw_index_pairs(dv.dim(), true);
    const std::string t = format_real(traj.times[s]);
    const std::string purity = format_real(traj.purities[s]);
    const std::string trace = format_real(traj.traces[s]);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Complex<double> n = dv.coefficients()(static_cast<Index>(i));
      os << s << ',' << t << ',' << pairs[i].first << ',' << pairs[i].second << ',' << format_real(n.real()) << ','
         << format_real(n.imag()) << ',' << purity << ',' << trace << '\n';
    }
  }
}

void write_scan_csv(std::ostream& os, const ScanResult<double>& scan) {
  os << "r,error,bound\n";
  for (const auto& row : scan.rows) os << row.r << ',' << format_real(row.error) << ',' << format_real(row.bound) << '\n';
}

}  // namespace sacsim::io
