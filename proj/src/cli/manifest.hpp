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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace sacsim::cli {

struct FileEntry {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

FileEntry describe_file(const std::filesystem::path& dir, const std::string& name);

// Writes <dir>/manifest.json. Files are listed sorted by name; the manifest
// does not list itself.
void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                    std::vector<std::string> files, double wall_time_seconds);

}  // namespace sacsim::cli
