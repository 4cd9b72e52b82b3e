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

#pragma once

#include <filesystem>

#include "cli/config.hpp"

namespace sacsim::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitInvariantBreach = 3;

// Executes one experiment and writes its outputs plus manifest.json.
int execute(const ExperimentConfig& config);

// Parses argv (flags override --config) and calls execute.
int run(int argc, char** argv);

}  // namespace sacsim::cli
