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


// Command-line driver for the two-stage beamforming studies.
//
//   tsb <accuracy|delta-sweep|load-sweep|angle-profile> [--config file.json]
//       [--seed N] [--out dir] [--format csv|json] [--threads N]

#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tsb/config.hpp"
#include "tsb/harness.hpp"
#include "tsb/kernels.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_dir = ".";
  std::string format = "csv";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool full_scale = false;
};

void add_common(CLI::App* cmd, Common& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--trials", opts.trials, "Monte Carlo trials (overrides the config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--full-scale", opts.full_scale,
                "Start from the N=225, S=45, K=135 setup instead of the desk-scale one");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage beamforming via deterministic equivalents"};
  app.require_subcommand(1);

  using Runner = tsb::ExperimentResult (*)(const tsb::SystemConfig&, const tsb::RunOptions&);
  const std::map<std::string, std::pair<std::string, Runner>> studies = {
      {"accuracy", {"Deterministic-equivalent vs exact sector projections", &tsb::run_accuracy_study}},
      {"delta-sweep", {"Rates and beams per user vs threshold delta", &tsb::run_delta_sweep}},
      {"load-sweep", {"Rates and beams per user vs load K/N", &tsb::run_load_sweep}},
      {"angle-profile", {"Beams per user vs angular position", &tsb::run_angle_profile}},
  };
  Common opts;
  for (const auto& [name, entry] : studies) add_common(app.add_subcommand(name, entry.first), opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    tsb::SystemConfig config = opts.full_scale ? tsb::full_scale_config() : tsb::desk_config();
    if (!opts.config_path.empty()) {
      if (opts.full_scale) throw tsb::Error("--full-scale and --config are mutually exclusive");
      config = tsb::load_config(opts.config_path);
    }
    if (opts.seed) config.seed = *opts.seed;
    if (opts.trials) config.trials = *opts.trials;
    tsb::validate(config);

    const tsb::ExperimentResult result = studies.at(name).second(config, {opts.threads});
    const auto format = opts.format == "json" ? tsb::OutputFormat::kJson : tsb::OutputFormat::kCsv;
    const auto path = tsb::emit_results(result, opts.out_dir, format);
    std::cerr << name << ": " << result.records.size() << " records -> " << path.string()
              << " (" << result.timings.total << " s, kernels "
              << result.kernel_isa << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
