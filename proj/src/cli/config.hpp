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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sacsim/random.hpp"

namespace sacsim::cli {

using json = nlohmann::json;

// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `structured` parameters (matrices, vectors) are accepted from config files only.
enum class ParamType { integer, real, text, int_list, structured };

struct ParamSpec {
  std::string name;
  ParamType type;
  std::string help;
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<double> tol;  // overrides the command's invariant tolerance
  std::string out_dir = ".";
  json params = json::object();

  // Echo written to the manifest.
  json to_json() const;

  // Independent stream for a named component.
  Rng stream(const std::string& component) const { return make_stream(seed, stream_id(command + "." + component)); }

  double tolerance_or(double fallback) const { return tol.value_or(fallback); }

  long long get_int(const std::string& key, long long fallback, long long min, long long max) const;
  double get_real(const std::string& key, double fallback, double min, double max) const;
  std::string get_text(const std::string& key, const std::string& fallback,
                       const std::vector<std::string>& allowed = {}) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback, int min) const;
  bool has(const std::string& key) const { return params.contains(key); }
};

// Reads a JSON config file. Top-level "command", "seed", "tol" and "out"
// are run settings; every other key (or the contents of "params") is a
// command parameter.
ExperimentConfig load_config_file(const std::string& path);

// Converts a flag value to the JSON type given by `param.type`.
json parse_flag_value(const ParamSpec& param, const std::string& text);

}  // namespace sacsim::cli
