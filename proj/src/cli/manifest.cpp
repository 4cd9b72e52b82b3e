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

#include "cli/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <Eigen/Core>

namespace sacsim::cli {

namespace {

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

FileEntry describe_file(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  return {name, sha256_file(path), std::filesystem::file_size(path)};
}

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                    std::vector<std::string> files, double wall_time_seconds) {
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  json listed = json::array();
  for (const auto& name : files) {
    const FileEntry e = describe_file(dir, name);
    listed.push_back({{"name", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  }
  const json manifest = {{"tool", "sacsim"},
                         {"version", SACSIM_VERSION},
                         {"versions", {{"sacsim", SACSIM_VERSION}, {"eigen", eigen_version()}}},
                         {"config", config.to_json()},
                         {"seed", config.seed},
                         {"wall_time_seconds", wall_time_seconds},
                         {"files", std::move(listed)}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");
  out << manifest.dump(2) << '\n';
}

}  // namespace sacsim::cli
