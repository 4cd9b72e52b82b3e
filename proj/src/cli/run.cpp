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

#include "cli/run.hpp"

#include <chrono>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "sacsim/types.hpp"

namespace sacsim::cli {

namespace {

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("--seed must be an unsigned 64-bit integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw ConfigError("--seed does not fit in 64 bits");
  }
}

double parse_tol(const std::string& text) {
  const json v = parse_flag_value({"tol", ParamType::real, ""}, text);
  if (!(v.get<double>() > 0)) throw ConfigError("--tol must be positive");
  return v.get<double>();
}

void check_known_params(const CommandSpec& spec, const ExperimentConfig& cfg) {
  for (const auto& [key, value] : cfg.params.items()) {
    if (spec.find(key) == nullptr) throw ConfigError("unknown parameter '" + key + "' for " + spec.name);
  }
}

struct SubcommandFlags {
  std::string config_path;
  std::string out;
  std::string seed;
  std::string tol;
  std::map<std::string, std::string> params;
};

}  // namespace

int execute(const ExperimentConfig& config) {
  const CommandSpec* spec = find_command(config.command);
  if (spec == nullptr) {
    std::cerr << "sacsim: unknown command '" << config.command << "'\n";
    return kExitInvalidConfig;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    check_known_params(*spec, config);
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    const CommandOutcome outcome = spec->run(config, dir);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(dir, config, outcome.files, wall);
    if (outcome.breach) {
      std::cerr << "sacsim " << config.command << ": invariant breach: " << *outcome.breach << '\n';
      return kExitInvariantBreach;
    }
    std::cout << "sacsim " << config.command << ": wrote " << outcome.files.size() + 1 << " files to "
              << dir.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "sacsim " << config.command << ": invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "sacsim " << config.command << ": invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const DimensionError& e) {
    std::cerr << "sacsim " << config.command << ": invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const Error& e) {
    // InvariantViolation, NonphysicalState, InvalidParticleSet
    std::cerr << "sacsim " << config.command << ": invariant breach: " << e.what() << '\n';
    return kExitInvariantBreach;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "sacsim " << config.command << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << "sacsim " << config.command << ": " << e.what() << '\n';
    return kExitIo;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"sacsim: classical hidden-particle simulation of quantum dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SACSIM_VERSION);

  std::map<std::string, SubcommandFlags> flags;
  for (const auto& spec : command_table()) {
    auto& f = flags[spec.name];
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--out", f.out, "output directory (default .)");
    sub->add_option("--seed", f.seed, "unsigned 64-bit seed (default 0)");
    sub->add_option("--tol", f.tol, "tolerance for the run's invariant checks");
    for (const auto& p : spec.params) {
      if (p.type == ParamType::structured) continue;
      sub->add_option("--" + p.name, f.params[p.name], p.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const CommandSpec& spec = *find_command(name);
  const SubcommandFlags& f = flags.at(name);
  try {
    ExperimentConfig cfg;
    if (chosen->count("--config") > 0) {
      cfg = load_config_file(f.config_path);
      if (!cfg.command.empty() && cfg.command != name) {
        throw ConfigError("config file is for '" + cfg.command + "', not '" + name + "'");
      }
    }
    cfg.command = name;
    if (chosen->count("--out") > 0) cfg.out_dir = f.out;
    if (chosen->count("--seed") > 0) cfg.seed = parse_seed(f.seed);
    if (chosen->count("--tol") > 0) cfg.tol = parse_tol(f.tol);
    for (const auto& p : spec.params) {
      if (p.type == ParamType::structured) continue;
      if (chosen->count("--" + p.name) > 0) cfg.params[p.name] = parse_flag_value(p, f.params.at(p.name));
    }
    return execute(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "sacsim " << name << ": invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

}  // namespace sacsim::cli
