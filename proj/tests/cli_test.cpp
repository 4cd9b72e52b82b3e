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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "cli/run.hpp"
#include "gtest/gtest.h"

namespace fs = std::filesystem;
using sacsim::cli::json;

namespace {

fs::path scratch(const std::string& tag) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path p = fs::temp_directory_path() / ("sacsim_cli_" + std::string(info->test_suite_name()) + "_" +
                                            info->name() + "_" + tag);
  fs::remove_all(p);
  return p;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sacsim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return sacsim::cli::run(static_cast<int>(argv.size()), argv.data());
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) row.push_back(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> listed_hashes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  const json manifest = read_json(dir / "manifest.json");
  for (const auto& f : manifest.at("files")) out[f.at("name").get<std::string>()] = f.at("sha256").get<std::string>();
  return out;
}

// ---------------------------------------------------------------------------
// Config parsing

TEST(Config, TypedGettersValidateRanges) {
  sacsim::cli::ExperimentConfig cfg;
  cfg.params = {{"d", 5}, {"t", 0.5}, {"method", "exact"}, {"r", {4, 8}}, {"x", 2.5}};
  EXPECT_EQ(cfg.get_int("d", 0, 1, 10), 5);
  EXPECT_EQ(cfg.get_int("missing", 7, 1, 10), 7);
  EXPECT_THROW(cfg.get_int("d", 0, 6, 10), sacsim::cli::ConfigError);
  EXPECT_THROW(cfg.get_int("x", 0, 0, 10), sacsim::cli::ConfigError);
  EXPECT_DOUBLE_EQ(cfg.get_real("t", 0, 0, 1), 0.5);
  EXPECT_THROW(cfg.get_real("t", 0, 1, 2), sacsim::cli::ConfigError);
  EXPECT_EQ(cfg.get_text("method", "", {"exact", "midpoint"}), "exact");
  EXPECT_THROW(cfg.get_text("method", "", {"midpoint"}), sacsim::cli::ConfigError);
  EXPECT_EQ(cfg.get_int_list("r", {}, 1), (std::vector<int>{4, 8}));
  EXPECT_THROW(cfg.get_int_list("r", {}, 5), sacsim::cli::ConfigError);
}

TEST(Config, FlagValues) {
  using sacsim::cli::ParamType;
  EXPECT_EQ(sacsim::cli::parse_flag_value({"r", ParamType::int_list, ""}, "4,8,16"), json({4, 8, 16}));
  EXPECT_EQ(sacsim::cli::parse_flag_value({"d", ParamType::integer, ""}, "12"), json(12));
  EXPECT_EQ(sacsim::cli::parse_flag_value({"t", ParamType::real, ""}, "1e-3"), json(1e-3));
  EXPECT_THROW(sacsim::cli::parse_flag_value({"d", ParamType::integer, ""}, "12x"), sacsim::cli::ConfigError);
  EXPECT_THROW(sacsim::cli::parse_flag_value({"r", ParamType::int_list, ""}, "4,,8"), sacsim::cli::ConfigError);
  EXPECT_THROW(sacsim::cli::parse_flag_value({"t", ParamType::real, ""}, ""), sacsim::cli::ConfigError);
}

TEST(Config, FileSplitsRunSettingsFromParams) {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"command": "walk", "seed": 11, "tol": 1e-9, "out": "x", "T": 3, "d": 4})";
  const auto cfg = sacsim::cli::load_config_file((dir / "c.json").string());
  EXPECT_EQ(cfg.command, "walk");
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(*cfg.tol, 1e-9);
  EXPECT_EQ(cfg.out_dir, "x");
  EXPECT_EQ(cfg.params, json({{"T", 3}, {"d", 4}}));
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_THROW(sacsim::cli::load_config_file((dir / "bad.json").string()), sacsim::cli::ConfigError);
  EXPECT_THROW(sacsim::cli::load_config_file((dir / "absent.json").string()), sacsim::cli::ConfigError);
}

TEST(Manifest, Sha256KnownVector) {
  const fs::path dir = scratch("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  EXPECT_EQ(sacsim::cli::sha256_file(dir / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// ---------------------------------------------------------------------------
// Subcommands

TEST(Cli, EvolveAtZeroTimeReturnsInput) {
  const fs::path out = scratch("out");
  ASSERT_EQ(run_cli({"evolve", "--t", "0", "--d", "6", "--seed", "3", "--out", out.string()}), 0);
  const json s = read_json(out / "evolve_summary.json");
  EXPECT_EQ(s.at("final_state"), s.at("initial_state"));
  EXPECT_EQ(s.at("oracle_error"), 0.0);
}

TEST(Cli, EvolveMidpointMatchesOracle) {
  const fs::path out = scratch("out");
  ASSERT_EQ(run_cli({"evolve", "--d", "5", "--t", "2", "--method", "midpoint", "--out", out.string()}), 0);
  const json s = read_json(out / "evolve_summary.json");
  EXPECT_LT(s.at("oracle_error").get<double>(), 1e-5);
  EXPECT_LT(s.at("norm_drift").get<double>(), 1e-9);
  EXPECT_EQ(read_csv(out / "trajectory.csv").size(), 1u + 101u * 5u);
}

TEST(Cli, EvolveFromConfigMatrix) {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  // H = Z, |+> picks up a relative phase e^{2it}.
  std::ofstream(dir / "c.json") << R"({"hamiltonian": {"dim": [2, 2], "re": [[1, 0], [0, -1]]},
                                       "state": [0.7071067811865476, 0.7071067811865476], "t": 0.25})";
  ASSERT_EQ(run_cli({"evolve", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()}), 0);
  const json s = read_json(dir / "o" / "evolve_summary.json");
  const double re0 = s.at("final_state").at("re")[0], im0 = s.at("final_state").at("im")[0];
  EXPECT_NEAR(re0, std::cos(0.25) / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(im0, -std::sin(0.25) / std::sqrt(2.0), 1e-12);
}

TEST(Cli, WalkLightConeInOutput) {
  const fs::path out = scratch("out");
  ASSERT_EQ(run_cli({"walk", "--T", "100", "--d", "100", "--seed", "7", "--out", out.string()}), 0);
  ASSERT_TRUE(fs::exists(out / "walk_distribution.csv"));
  const auto rows = read_csv(out / "walk_trajectory.csv");
  ASSERT_EQ(rows.size(), 1u + 101u * 402u);
  const int d = 100, sites = 2 * d + 1;
  std::size_t outside = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int step = std::stoi(rows[i][0]);
    const int mode = std::stoi(rows[i][3]);
    const int x = mode % sites - d;
    if (std::abs(x) > step) {
      ++outside;
      ASSERT_EQ(std::stod(rows[i][4]), 0.0) << "row " << i;
      ASSERT_EQ(std::stod(rows[i][5]), 0.0) << "row " << i;
    }
  }
  EXPECT_GT(outside, 0u);
  const json s = read_json(out / "walk_summary.json");
  EXPECT_TRUE(s.at("light_cone_exact").get<bool>());
  EXPECT_GT(s.at("sigma_ratio").get<double>(), 1.8);
  EXPECT_LT(s.at("sigma_ratio").get<double>(), 2.2);
}

TEST(Cli, TrotterScanSlope) {
  const fs::path out = scratch("out");
  ASSERT_EQ(run_cli({"trotter-scan", "--chi", "1", "--t", "1", "--r", "4,8,16,32,64", "--out", out.string()}), 0);
  const json s = read_json(out / "trotter_summary.json");
  EXPECT_NEAR(s.at("slope").get<double>(), -2.0, 0.2);
  EXPECT_EQ(read_csv(out / "trotter_scan.csv").size(), 6u);
}

TEST(Cli, EverySubcommandRunsWithDefaults) {
  const std::map<std::string, std::vector<std::string>> expected = {
      {"evolve", {"trajectory.csv", "evolve_summary.json"}},
      {"walk", {"walk_trajectory.csv", "walk_distribution.csv", "walk_summary.json"}},
      {"tomography", {"qst.json", "qpt.json", "verification.json"}},
      {"lindblad", {"density_trajectory.csv", "lindblad_summary.json"}},
      {"trotter-scan", {"trotter_scan.csv", "trotter_summary.json"}},
      {"optics", {"mesh.json", "optics_summary.json"}},
      {"cost", {"cost.json"}},
      {"field", {"field_trajectory.csv", "field_summary.json"}}};
  for (const auto& [cmd, files] : expected) {
    const fs::path out = scratch(cmd);
    ASSERT_EQ(run_cli({cmd, "--out", out.string()}), 0) << cmd;
    for (const auto& f : files) EXPECT_TRUE(fs::exists(out / f)) << cmd << ": " << f;
    EXPECT_TRUE(fs::exists(out / "manifest.json")) << cmd;
  }
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"command": "walk", "T": 5, "d": 10, "seed": 3, "out": "ignored"})";
  ASSERT_EQ(run_cli({"walk", "--config", (dir / "c.json").string(), "--T", "7", "--out", (dir / "o").string()}), 0);
  const json m = read_json(dir / "o" / "manifest.json");
  EXPECT_EQ(m.at("config").at("params").at("T"), 7);
  EXPECT_EQ(m.at("config").at("params").at("d"), 10);
  EXPECT_EQ(m.at("seed"), 3u);
  EXPECT_EQ(read_json(dir / "o" / "walk_summary.json").at("T"), 7);
}

// ---------------------------------------------------------------------------
// Exit codes

TEST(ExitCodes, InvalidConfigIsTwo) {
  const std::string out = scratch("out").string();
  EXPECT_EQ(run_cli({"walk", "--T", "200", "--d", "100", "--out", out}), 2);
  EXPECT_EQ(run_cli({"walk", "--d", "abc", "--out", out}), 2);
  EXPECT_EQ(run_cli({"walk", "--d", "0", "--out", out}), 2);
  EXPECT_EQ(run_cli({"evolve", "--seed", "-1", "--out", out}), 2);
  EXPECT_EQ(run_cli({"evolve", "--method", "rk4", "--out", out}), 2);
  EXPECT_EQ(run_cli({"trotter-scan", "--chi", "9", "--out", out}), 2);
  EXPECT_EQ(run_cli({"tomography", "--d", "1", "--out", out}), 2);
  EXPECT_EQ(run_cli({"evolve", "--config", "/nonexistent/config.json", "--out", out}), 2);
  EXPECT_EQ(run_cli({"nosuchcommand"}), 2);
  EXPECT_EQ(run_cli({}), 2);
}

TEST(ExitCodes, ConfigForAnotherCommandIsTwo) {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"command": "walk", "T": 5})";
  EXPECT_EQ(run_cli({"evolve", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()}), 2);
  std::ofstream(dir / "u.json") << R"({"T": 5, "d": 10, "colour": "red"})";
  EXPECT_EQ(run_cli({"walk", "--config", (dir / "u.json").string(), "--out", (dir / "o").string()}), 2);
}

TEST(ExitCodes, InvariantBreachIsThree) {
  const std::string out = scratch("out").string();
  // A tolerance far below roundoff cannot be met by the norm constraint.
  EXPECT_EQ(run_cli({"evolve", "--t", "5", "--tol", "1e-30", "--out", out}), 3);
  EXPECT_EQ(run_cli({"optics", "--tol", "1e-30", "--out", out}), 3);
}

TEST(ExitCodes, HelpIsZero) { EXPECT_EQ(run_cli({"--help"}), 0); }

TEST(ExitCodes, InstalledBinary) {
  const fs::path out = scratch("out");
  const std::string bin = SACSIM_BINARY;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(bin + " cost --system cluster --n 8 --out " + out.string()), 0);
  EXPECT_EQ(status(bin + " cost --system cluster --n 0 --out " + out.string()), 2);
  EXPECT_EQ(status(bin + " evolve --tol 1e-30 --t 3 --out " + out.string()), 3);
}

// ---------------------------------------------------------------------------
// Determinism and manifest

TEST(Determinism, SameSeedSameBytes) {
  const std::vector<std::vector<std::string>> runs = {
      {"walk", "--T", "20", "--d", "20", "--coin", "random", "--coin_state", "random"},
      {"tomography", "--d", "2", "--shots", "500"},
      {"lindblad", "--model", "random", "--d", "3", "--initial", "random", "--shots", "2000"},
      {"evolve", "--d", "5", "--t", "1.5"},
      {"optics", "--modes", "5"}};
  for (const auto& args : runs) {
    auto a = args, b = args;
    const fs::path out_a = scratch(args[0] + "_a"), out_b = scratch(args[0] + "_b");
    a.insert(a.end(), {"--seed", "1234", "--out", out_a.string()});
    b.insert(b.end(), {"--seed", "1234", "--out", out_b.string()});
    ASSERT_EQ(run_cli(a), 0) << args[0];
    ASSERT_EQ(run_cli(b), 0) << args[0];
    const auto ha = listed_hashes(out_a), hb = listed_hashes(out_b);
    EXPECT_FALSE(ha.empty());
    EXPECT_EQ(ha, hb) << args[0];
    json ma = read_json(out_a / "manifest.json"), mb = read_json(out_b / "manifest.json");
    ma.erase("wall_time_seconds");
    mb.erase("wall_time_seconds");
    EXPECT_EQ(ma, mb) << args[0];
  }
}

TEST(Determinism, DifferentSeedDifferentBytes) {
  const fs::path a = scratch("a"), b = scratch("b");
  ASSERT_EQ(run_cli({"tomography", "--d", "2", "--shots", "500", "--seed", "1", "--out", a.string()}), 0);
  ASSERT_EQ(run_cli({"tomography", "--d", "2", "--shots", "500", "--seed", "2", "--out", b.string()}), 0);
  EXPECT_NE(listed_hashes(a).at("qst.json"), listed_hashes(b).at("qst.json"));
}

TEST(Manifest, ListsEveryOutputWithChecksum) {
  for (const std::string cmd : {"walk", "lindblad", "tomography", "field"}) {
    const fs::path out = scratch(cmd);
    std::vector<std::string> args = {cmd, "--seed", "5", "--out", out.string()};
    if (cmd == "walk") args.insert(args.end(), {"--T", "10", "--d", "10"});
    if (cmd == "lindblad") args.insert(args.end(), {"--shots", "1000"});
    ASSERT_EQ(run_cli(args), 0) << cmd;
    const json m = read_json(out / "manifest.json");
    EXPECT_EQ(m.at("seed"), 5u);
    EXPECT_EQ(m.at("config").at("command"), cmd);
    EXPECT_TRUE(m.at("version").is_string());
    EXPECT_TRUE(m.at("wall_time_seconds").is_number());
    const auto listed = listed_hashes(out);
    std::size_t on_disk = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
      const std::string name = entry.path().filename().string();
      if (name == "manifest.json") continue;
      ++on_disk;
      ASSERT_TRUE(listed.count(name)) << cmd << ": " << name << " missing from manifest";
      EXPECT_EQ(listed.at(name), sacsim::cli::sha256_file(entry.path())) << name;
    }
    EXPECT_EQ(on_disk, listed.size()) << cmd;
  }
}

}  // namespace
