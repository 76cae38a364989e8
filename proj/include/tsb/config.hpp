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


// Experiment configuration and its JSON form.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

namespace tsb {

enum class SnrUnit { kLinear, kDb };

// What the configured SNR refers to, with unit-variance channels and unit
// noise: kAntenna sets the per-user power to snr (received SNR per antenna
// element); kArray sets it to snr / N (received SNR summed over the array).
enum class SnrReference { kAntenna, kArray };

struct SystemConfig {
  int n_antennas = 64;
  int n_sectors = 16;
  // Unset lists take study-specific defaults (see resolved_users / resolved_deltas).
  std::optional<std::vector<int>> n_users;
  std::optional<std::vector<double>> delta;
  double angular_spread = 0.31415926535897931;  // pi / 10
  double arc_start = 0.52359877559829882;       // pi / 6
  double arc_end = 2.6179938779914944;          // 5 pi / 6
  double antenna_spacing = 0.5;                 // element spacing / wavelength
  double snr = 10.0;
  SnrUnit snr_unit = SnrUnit::kLinear;
  SnrReference snr_reference = SnrReference::kArray;
  int trials = 100;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 1000;
  double damping = 0.0;

  double snr_linear() const;
  // Exact-model power p_k; the deterministic equivalent uses N * p_k.
  double user_power() const;
  bool operator==(const SystemConfig&) const = default;
};

// Desk-scale defaults: N = 64, S = 16, K = 32.
SystemConfig desk_config();

// N = 225, S = 45, K = 135.
SystemConfig full_scale_config();

// Throws Error on an invalid configuration.
void validate(const SystemConfig& config);

// Unknown keys are rejected.
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SystemConfig& config);
SystemConfig load_config(const std::filesystem::path& path);

}  // namespace tsb
