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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace sacsim::cli {

struct CommandOutcome {
  std::vector<std::string> files;  // relative to the output directory
  // Set when a numerical check on the finished run failed; outputs are
  // still written so the breach can be inspected.
  std::optional<std::string> breach;
};

using CommandFn = std::function<CommandOutcome(const ExperimentConfig&, const std::filesystem::path&)>;

struct CommandSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  CommandFn run;

  const ParamSpec* find(const std::string& param) const;
};

const std::vector<CommandSpec>& command_table();
const CommandSpec* find_command(const std::string& name);

}  // namespace sacsim::cli
