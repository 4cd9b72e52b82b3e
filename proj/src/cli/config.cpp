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

#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sacsim::cli {

json ExperimentConfig::to_json() const {
  json out = {{"command", command}, {"seed", seed}, {"params", params}};
  out["tol"] = tol ? json(*tol) : json();
  return out;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback, long long min, long long max) const {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  long long out = 0;
  if (v.is_number_integer()) {
    out = v.get<long long>();
  } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
    out = static_cast<long long>(v.get<double>());
  } else {
    throw ConfigError("parameter '" + key + "' must be an integer");
  }
  if (out < min || out > max) {
    throw ConfigError("parameter '" + key + "' = " + std::to_string(out) + " outside [" + std::to_string(min) + ", " +
                      std::to_string(max) + "]");
  }
  return out;
}

double ExperimentConfig::get_real(const std::string& key, double fallback, double min, double max) const {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  if (!v.is_number()) throw ConfigError("parameter '" + key + "' must be a number");
  const double out = v.get<double>();
  if (!(out >= min && out <= max)) {
    std::ostringstream msg;
    msg << "parameter '" << key << "' = " << out << " outside [" << min << ", " << max << "]";
    throw ConfigError(msg.str());
  }
  return out;
}

std::string ExperimentConfig::get_text(const std::string& key, const std::string& fallback,
                                       const std::vector<std::string>& allowed) const {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  if (!v.is_string()) throw ConfigError("parameter '" + key + "' must be a string");
  const std::string out = v.get<std::string>();
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), out) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError("parameter '" + key + "' = '" + out + "' not one of: " + list);
  }
  return out;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key, const std::vector<int>& fallback,
                                                int min) const {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError("parameter '" + key + "' must be a non-empty integer list");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError("parameter '" + key + "' must contain integers");
    const int x = e.get<int>();
    if (x < min) throw ConfigError("parameter '" + key + "' entries must be >= " + std::to_string(min));
    out.push_back(x);
  }
  return out;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (!value.is_string()) throw ConfigError("'command' must be a string");
      cfg.command = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "tol") {
      if (!value.is_number() || !(value.get<double>() > 0)) throw ConfigError("'tol' must be a positive number");
      cfg.tol = value.get<double>();
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError("'out' must be a string");
      cfg.out_dir = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("'params' must be an object");
      for (const auto& [k, v] : value.items()) cfg.params[k] = v;
    } else {
      cfg.params[key] = value;
    }
  }
  return cfg;
}

json parse_flag_value(const ParamSpec& spec, const std::string& text) {
  auto fail = [&]() -> json { throw ConfigError("flag --" + spec.name + ": cannot parse '" + text + "'"); };
  try {
    std::size_t used = 0;
    switch (spec.type) {
      case ParamType::integer: {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) return fail();
        return v;
      }
      case ParamType::real: {
        const double v = std::stod(text, &used);
        if (used != text.size()) return fail();
        return v;
      }
      case ParamType::text:
        return text;
      case ParamType::int_list: {
        json out = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const long long v = std::stoll(item, &used);
          if (used != item.size()) return fail();
          out.push_back(v);
        }
        if (out.empty()) return fail();
        return out;
      }
      case ParamType::structured:
        return json::parse(text);
    }
  } catch (const std::logic_error&) {
    return fail();
  } catch (const json::exception&) {
    return fail();
  }
  return fail();
}

}  // namespace sacsim::cli
