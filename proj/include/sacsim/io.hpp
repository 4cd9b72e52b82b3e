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

// CSV and JSON serialization of results (double precision only).
//
// Matrices are {"dim": [rows, cols], "re": [[...]], "im": [[...]]} with
// row-major nested arrays; vectors are {"dim": n, "re": [...], "im": [...]}.
// CSV reals are written with 17 significant digits.

#pragma once

#include <ostream>
#include <string>

#include "json.hpp"
#include "sacsim/dynamics.hpp"
#include "sacsim/models.hpp"
#include "sacsim/opensys.hpp"
#include "sacsim/tomography.hpp"
#include "sacsim/trotter.hpp"

namespace sacsim::io {

using json = nlohmann::json;

std::string format_real(double x);

json to_json(const CMatrix<double>& m);
json to_json(const CVector<double>& v);
json real_to_json(const RVector<double>& v);
CMatrix<double> matrix_from_json(const json& j);
CVector<double> vector_from_json(const json& j);

json to_json(const OpticalMesh<double>& mesh);
json to_json(const CostReport& report);
json to_json(const VerificationReport<double>& report);
json to_json(const QstResult<double>& result);
json to_json(const ProcessEstimate<double>& estimate);
json to_json(const ScanResult<double>& scan);

// step,t,basis,index,q,p,energy
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj);
// Same schema for the walk; the energy column is empty (no Hamiltonian).
void write_walk_trajectory_csv(std::ostream& os, const WalkResult<double>& walk);
// x,prob
void write_distribution_csv(std::ostream& os, const WalkResult<double>& walk);
// step,t,j,k,Q,P,purity,trace
void write_density_csv(std::ostream& os, const DensityTrajectory<double>& traj);
// r,error,bound
void write_scan_csv(std::ostream& os, const ScanResult<double>& scan);

}  // namespace sacsim::io
