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


// Monte Carlo experiment driver.
//
// Each study builds the user geometry and correlation matrices, solves the
// deterministic equivalent once per configuration, then runs trials in
// parallel. Trial t draws user k's channel from substream(seed, t, k) and
// per-trial outputs are merged in trial order, so results do not depend on
// the number of threads.

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsb/channel_model.hpp"
#include "tsb/config.hpp"
#include "tsb/det_equiv.hpp"
#include "tsb/sectorization.hpp"

namespace tsb {

// Users, correlation matrices and powers for one (config, K) point.
//
// powers are the exact-model powers p_k (SystemConfig::user_power) applied to
// unit-variance channels with unit noise; normalized_powers = N p_k are the
// matching deterministic-equivalent powers.
struct Scenario {
  int n = 0;
  int k = 0;
  SectorSet sectors;
  std::vector<UeGeometry> users;
  std::vector<CorrelationMatrix> thetas;
  RVec powers;
  RVec normalized_powers;
};

Scenario build_scenario(const SystemConfig& config, int k_users);

ChannelSet draw_trial(const Scenario& scenario, std::uint64_t seed, int trial);

DetEqResult solve_scenario(const Scenario& scenario, const SystemConfig& config);

struct Record {
  int n_users = 0;
  std::optional<double> delta;
  std::string scheme;
  std::string metric;
  std::optional<int> ue;
  std::optional<int> sector;
  double value = 0.0;

  bool operator==(const Record&) const = default;
};

// Wall-clock seconds. Per-trial stages are summed over trials.
struct StageTimings {
  double setup = 0.0;      // geometry + correlation matrices
  double det_equiv = 0.0;  // fixed point, L, b_i, solve
  double exact_omega = 0.0;
  double mmse = 0.0;
  double matched_filter = 0.0;
  double tsb_inner = 0.0;
  double total = 0.0;

  bool operator==(const StageTimings&) const = default;
};

struct ExperimentResult {
  std::string study;
  SystemConfig config;
  std::vector<Record> records;
  StageTimings timings;
  std::string kernel_isa;

  bool operator==(const ExperimentResult&) const = default;
};

struct RunOptions {
  int threads = 1;
};

// Users list used when config.n_users is unset: {K} for the desk default, or
// {N/4, N/2, 3N/4} for the load sweep.
std::vector<int> resolved_users(const SystemConfig& config, const std::string& study);
std::vector<double> resolved_deltas(const SystemConfig& config, const std::string& study);

ExperimentResult run_accuracy_study(const SystemConfig& config, const RunOptions& run = {});
ExperimentResult run_delta_sweep(const SystemConfig& config, const RunOptions& run = {});
ExperimentResult run_load_sweep(const SystemConfig& config, const RunOptions& run = {});
ExperimentResult run_angle_profile(const SystemConfig& config, const RunOptions& run = {});

// Runs fn(0..count-1) on `threads` workers. The first exception is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// Linear-interpolation percentile, q in [0, 1]. Throws on empty input.
double percentile(std::vector<double> values, double q);

enum class OutputFormat { kCsv, kJson };

std::string to_csv(const ExperimentResult& result);
nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

// Writes <out_dir>/<study>-<seed>.<csv|json> and returns the path.
std::filesystem::path emit_results(const ExperimentResult& result,
                                   const std::filesystem::path& out_dir, OutputFormat format);

}  // namespace tsb
