// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The tsb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "tsb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "tsb/types.hpp"

namespace tsb {

double SystemConfig::snr_linear() const {
  return snr_unit == SnrUnit::kDb ? std::pow(10.0, snr / 10.0) : snr;
}

double SystemConfig::user_power() const {
  return snr_reference == SnrReference::kArray ? snr_linear() / n_antennas : snr_linear();
}

SystemConfig desk_config() { return SystemConfig{}; }

SystemConfig full_scale_config() {
  SystemConfig c;
  c.n_antennas = 225;
  c.n_sectors = 45;
  c.n_users = std::vector<int>{135};
  return c;
}

void validate(const SystemConfig& c) {
  if (c.n_antennas < 1) throw Error("config: n_antennas must be >= 1");
  if (c.n_sectors < 1 || c.n_antennas % c.n_sectors != 0) {
    throw Error("config: n_sectors must divide n_antennas");
  }
  if (c.n_users) {
    if (c.n_users->empty()) throw Error("config: n_users list is empty");
    for (int k : *c.n_users) {
      if (k < 1 || k > c.n_antennas) throw Error("config: n_users must lie in [1, n_antennas]");
    }
  }
  if (c.delta) {
    if (c.delta->empty()) throw Error("config: delta list is empty");
    for (double d : *c.delta) {
      if (!(d >= 0.0 && d <= 1.0)) throw Error("config: delta must lie in [0, 1]");
    }
  }
  if (!(c.angular_spread > 0.0 && c.angular_spread <= 3.141592653589793)) {
    throw Error("config: angular_spread must lie in (0, pi]");
  }
  if (!(c.arc_end > c.arc_start) || c.arc_start < 0.0 || c.arc_end > 3.141592653589793) {
    throw Error("config: need 0 <= arc_start < arc_end <= pi");
  }
  if (!(c.antenna_spacing > 0.0)) throw Error("config: antenna_spacing must be positive");
  if (!(c.snr_linear() >= 0.0) || !std::isfinite(c.snr_linear())) {
    throw Error("config: snr must be finite and nonnegative");
  }
  if (c.trials < 1) throw Error("config: trials must be >= 1");
  if (!(c.tol > 0.0)) throw Error("config: tol must be positive");
  if (c.max_iter < 1) throw Error("config: max_iter must be >= 1");
  if (!(c.damping >= 0.0 && c.damping < 1.0)) throw Error("config: damping must lie in [0, 1)");
}

namespace {

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json& v, const char* key) {
  if (v.is_array()) return v.get<std::vector<T>>();
  if (v.is_number()) return {v.get<T>()};
  throw Error(std::string("config: '") + key + "' must be a number or a list of numbers");
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKnown = {
      "n_antennas", "n_sectors", "n_users", "delta",    "angular_spread", "arc_start",
      "arc_end",    "antenna_spacing",      "snr",      "snr_unit",       "snr_reference",       "trials",
      "seed",       "tol",       "max_iter", "damping"};
  if (!j.is_object()) throw Error("config: top level must be an object");
  for (const auto& item : j.items()) {
    if (!kKnown.contains(item.key())) throw Error("config: unknown field '" + item.key() + "'");
  }
  SystemConfig c;
  try {
    if (j.contains("n_antennas")) c.n_antennas = j.at("n_antennas").get<int>();
    if (j.contains("n_sectors")) c.n_sectors = j.at("n_sectors").get<int>();
    if (j.contains("n_users")) c.n_users = scalar_or_list<int>(j.at("n_users"), "n_users");
    if (j.contains("delta")) c.delta = scalar_or_list<double>(j.at("delta"), "delta");
    if (j.contains("angular_spread")) c.angular_spread = j.at("angular_spread").get<double>();
    if (j.contains("arc_start")) c.arc_start = j.at("arc_start").get<double>();
    if (j.contains("arc_end")) c.arc_end = j.at("arc_end").get<double>();
    if (j.contains("antenna_spacing")) c.antenna_spacing = j.at("antenna_spacing").get<double>();
    if (j.contains("snr")) c.snr = j.at("snr").get<double>();
    if (j.contains("snr_unit")) {
      const auto unit = j.at("snr_unit").get<std::string>();
      if (unit == "linear") {
        c.snr_unit = SnrUnit::kLinear;
      } else if (unit == "db") {
        c.snr_unit = SnrUnit::kDb;
      } else {
        throw Error("config: snr_unit must be \"linear\" or \"db\"");
      }
    }
    if (j.contains("snr_reference")) {
      const auto ref = j.at("snr_reference").get<std::string>();
      if (ref == "antenna") {
        c.snr_reference = SnrReference::kAntenna;
      } else if (ref == "array") {
        c.snr_reference = SnrReference::kArray;
      } else {
        throw Error("config: snr_reference must be \"antenna\" or \"array\"");
      }
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
    if (j.contains("damping")) c.damping = j.at("damping").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

nlohmann::json to_json(const SystemConfig& c) {
  nlohmann::json j;
  j["n_antennas"] = c.n_antennas;
  j["n_sectors"] = c.n_sectors;
  if (c.n_users) j["n_users"] = *c.n_users;
  if (c.delta) j["delta"] = *c.delta;
  j["angular_spread"] = c.angular_spread;
  j["arc_start"] = c.arc_start;
  j["arc_end"] = c.arc_end;
  j["antenna_spacing"] = c.antenna_spacing;
  j["snr"] = c.snr;
  j["snr_unit"] = c.snr_unit == SnrUnit::kDb ? "db" : "linear";
  j["snr_reference"] = c.snr_reference == SnrReference::kArray ? "array" : "antenna";
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["damping"] = c.damping;
  return j;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace tsb
