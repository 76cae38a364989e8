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


#include "tsb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "tsb/exact_receivers.hpp"
#include "tsb/kernels.hpp"
#include "tsb/tsb.hpp"

namespace tsb {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ExperimentResult start_result(const std::string& study, const SystemConfig& config) {
  validate(config);
  ExperimentResult r;
  r.study = study;
  r.config = config;
  r.kernel_isa = std::string(kernels::isa_name(kernels::active_isa()));
  return r;
}

void add(ExperimentResult& r, int k, std::optional<double> delta, std::string scheme,
         std::string metric, double value, std::optional<int> ue = std::nullopt,
         std::optional<int> sector = std::nullopt) {
  r.records.push_back(
      Record{k, delta, std::move(scheme), std::move(metric), ue, sector, value});
}

void add_rate_stats(ExperimentResult& r, int k, std::optional<double> delta,
                    const std::string& scheme, const std::vector<double>& rates) {
  add(r, k, delta, scheme, "mean_rate", mean(rates));
  add(r, k, delta, scheme, "p10_rate", percentile(rates, 0.1));
  add(r, k, delta, scheme, "p50_rate", percentile(rates, 0.5));
  add(r, k, delta, scheme, "p90_rate", percentile(rates, 0.9));
}

struct PointSetup {
  Scenario scenario;
  DetEqResult det;
};

PointSetup setup_point(const SystemConfig& config, int k, StageTimings& timings) {
  auto t0 = Clock::now();
  Scenario scenario = build_scenario(config, k);
  timings.setup += seconds_since(t0);
  t0 = Clock::now();
  DetEqResult det = solve_scenario(scenario, config);
  timings.det_equiv += seconds_since(t0);
  return {std::move(scenario), std::move(det)};
}

void add_solver_stats(ExperimentResult& r, int k, const DetEqResult& det) {
  add(r, k, std::nullopt, "det_equiv", "l_spectral_radius", det.l_spectral_radius);
  add(r, k, std::nullopt, "det_equiv", "fixed_point_iterations", det.iterations);
}

// Shared body of the delta and load sweeps.
ExperimentResult run_rate_study(const std::string& study, const SystemConfig& config,
                                const RunOptions& run) {
  const auto t_start = Clock::now();
  ExperimentResult result = start_result(study, config);
  const std::vector<double> deltas = resolved_deltas(config, study);

  for (int k : resolved_users(config, study)) {
    PointSetup point = setup_point(config, k, result.timings);
    const Scenario& sc = point.scenario;
    std::vector<BeamSelection> selections;
    for (double d : deltas) selections.push_back(select_all(point.det.omega_bar, d, sc.sectors.d));

    struct Trial {
      std::vector<double> mmse, mf;
      std::vector<std::vector<double>> tsb;
      double t_mmse = 0.0, t_mf = 0.0, t_tsb = 0.0;
    };
    std::vector<Trial> trials(config.trials);
    parallel_for(config.trials, run.threads, [&](int t) {
      Trial& out = trials[t];
      const ChannelSet ch = draw_trial(sc, config.seed, t);
      auto t0 = Clock::now();
      out.mmse = evaluate_mmse(ch).rate;
      out.t_mmse = seconds_since(t0);
      t0 = Clock::now();
      out.mf = evaluate_matched_filter(ch).rate;
      out.t_mf = seconds_since(t0);
      t0 = Clock::now();
      for (const auto& sel : selections) out.tsb.push_back(tsb_evaluate(ch, sc.sectors, sel).report.rate);
      out.t_tsb = seconds_since(t0);
    });

    std::vector<double> mmse, mf;
    std::vector<std::vector<double>> tsb(deltas.size());
    for (const Trial& tr : trials) {
      mmse.insert(mmse.end(), tr.mmse.begin(), tr.mmse.end());
      mf.insert(mf.end(), tr.mf.begin(), tr.mf.end());
      for (std::size_t d = 0; d < deltas.size(); ++d) {
        tsb[d].insert(tsb[d].end(), tr.tsb[d].begin(), tr.tsb[d].end());
      }
      result.timings.mmse += tr.t_mmse;
      result.timings.matched_filter += tr.t_mf;
      result.timings.tsb_inner += tr.t_tsb;
    }

    add_solver_stats(result, k, point.det);
    add_rate_stats(result, k, std::nullopt, "mmse", mmse);
    add_rate_stats(result, k, std::nullopt, "mf", mf);
    const double mmse_mean = mean(mmse);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      add_rate_stats(result, k, deltas[d], "tsb", tsb[d]);
      add(result, k, deltas[d], "tsb", "mean_beams", selections[d].mean_dims());
      add(result, k, deltas[d], "tsb", "rate_ratio_to_mmse",
          mmse_mean > 0.0 ? mean(tsb[d]) / mmse_mean : 0.0);
    }
  }
  result.timings.total = seconds_since(t_start);
  return result;
}

}  // namespace

Scenario build_scenario(const SystemConfig& config, int k_users) {
  validate(config);
  Scenario sc;
  sc.n = config.n_antennas;
  sc.k = k_users;
  sc.sectors = build_sectors(config.n_antennas, config.n_sectors);
  sc.users = place_users(k_users, config.arc_start, config.arc_end, config.angular_spread);
  sc.thetas.reserve(sc.users.size());
  for (const auto& ue : sc.users) {
    sc.thetas.push_back(build_correlation_matrix(ue, config.antenna_spacing, config.n_antennas));
  }
  const double p = config.user_power();
  sc.powers = RVec::Constant(k_users, p);
  sc.normalized_powers = RVec::Constant(k_users, p * config.n_antennas);
  return sc;
}

ChannelSet draw_trial(const Scenario& scenario, std::uint64_t seed, int trial) {
  return draw_channel_set(scenario.thetas, scenario.powers, 1.0, seed,
                          static_cast<std::uint64_t>(trial));
}

DetEqResult solve_scenario(const Scenario& scenario, const SystemConfig& config) {
  FixedPointOptions opts;
  opts.tol = config.tol;
  opts.max_iter = config.max_iter;
  opts.damping = config.damping;
  try {
    return deterministic_equivalent(scenario.thetas, scenario.normalized_powers,
                                    scenario.sectors, opts);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " [N=" + std::to_string(scenario.n) +
                ", K=" + std::to_string(scenario.k) + ", S=" + std::to_string(scenario.sectors.s) +
                ", p=" + std::to_string(config.user_power()) + "]");
  }
}

std::vector<int> resolved_users(const SystemConfig& config, const std::string& study) {
  if (config.n_users) return *config.n_users;
  const int n = config.n_antennas;
  if (study == "load-sweep") {
    return {std::max(1, n / 4), std::max(1, n / 2), std::max(1, 3 * n / 4)};
  }
  return {std::max(1, n / 2)};
}

std::vector<double> resolved_deltas(const SystemConfig& config, const std::string& study) {
  if (config.delta) return *config.delta;
  if (study == "delta-sweep") return {0.0, 0.01, 0.1, 0.5, 1.0};
  if (study == "load-sweep") return {0.01, 0.1};
  return {0.1};
}

ExperimentResult run_accuracy_study(const SystemConfig& config, const RunOptions& run) {
  const auto t_start = Clock::now();
  ExperimentResult result = start_result("accuracy", config);

  for (int k : resolved_users(config, "accuracy")) {
    PointSetup point = setup_point(config, k, result.timings);
    const Scenario& sc = point.scenario;
    const RMat& omega_bar = point.det.omega_bar;
    const RVec row_max = omega_bar.rowwise().maxCoeff();

    struct Trial {
      RMat omega;
      std::vector<double> deviation;
      double seconds = 0.0;
    };
    std::vector<Trial> trials(config.trials);
    parallel_for(config.trials, run.threads, [&](int t) {
      Trial& out = trials[t];
      const ChannelSet ch = draw_trial(sc, config.seed, t);
      const auto t0 = Clock::now();
      out.omega = exact_omega(ch, sc.sectors);
      out.seconds = seconds_since(t0);
      out.deviation.reserve(static_cast<std::size_t>(out.omega.size()));
      for (Eigen::Index u = 0; u < out.omega.rows(); ++u) {
        for (Eigen::Index i = 0; i < out.omega.cols(); ++i) {
          out.deviation.push_back(std::abs(out.omega(u, i) - omega_bar(u, i)) / row_max(u));
        }
      }
    });

    std::vector<double> deviation;
    RMat omega_sum = RMat::Zero(omega_bar.rows(), omega_bar.cols());
    for (const Trial& tr : trials) {
      deviation.insert(deviation.end(), tr.deviation.begin(), tr.deviation.end());
      omega_sum += tr.omega;
      result.timings.exact_omega += tr.seconds;
    }
    const RMat omega_mean = omega_sum / static_cast<double>(config.trials);

    add_solver_stats(result, k, point.det);
    add(result, k, std::nullopt, "det_equiv", "median_norm_dev", percentile(deviation, 0.5));
    add(result, k, std::nullopt, "det_equiv", "mean_norm_dev", mean(deviation));
    add(result, k, std::nullopt, "det_equiv", "p90_norm_dev", percentile(deviation, 0.9));
    add(result, k, std::nullopt, "det_equiv", "max_norm_dev", percentile(deviation, 1.0));
    for (Eigen::Index u = 0; u < omega_bar.rows(); ++u) {
      for (Eigen::Index i = 0; i < omega_bar.cols(); ++i) {
        const int ue = static_cast<int>(u), sec = static_cast<int>(i);
        add(result, k, std::nullopt, "det_equiv", "omega_bar", omega_bar(u, i), ue, sec);
        add(result, k, std::nullopt, "exact", "omega_trial0", trials[0].omega(u, i), ue, sec);
        add(result, k, std::nullopt, "exact", "omega_mean", omega_mean(u, i), ue, sec);
      }
    }
  }
  result.timings.total = seconds_since(t_start);
  return result;
}

ExperimentResult run_delta_sweep(const SystemConfig& config, const RunOptions& run) {
  return run_rate_study("delta-sweep", config, run);
}

ExperimentResult run_load_sweep(const SystemConfig& config, const RunOptions& run) {
  return run_rate_study("load-sweep", config, run);
}

// Sector selection depends only on channel statistics, so one evaluation per
// configuration gives the trial average exactly; no channels are drawn.
ExperimentResult run_angle_profile(const SystemConfig& config, const RunOptions& /*run*/) {
  const auto t_start = Clock::now();
  ExperimentResult result = start_result("angle-profile", config);
  const std::vector<double> deltas = resolved_deltas(config, "angle-profile");

  for (int k : resolved_users(config, "angle-profile")) {
    PointSetup point = setup_point(config, k, result.timings);
    const Scenario& sc = point.scenario;
    add_solver_stats(result, k, point.det);
    for (int u = 0; u < k; ++u) {
      add(result, k, std::nullopt, "geometry", "angle", sc.users[u].phi_center, u);
    }
    for (double d : deltas) {
      const BeamSelection sel = select_all(point.det.omega_bar, d, sc.sectors.d);
      add(result, k, d, "tsb", "mean_beams", sel.mean_dims());
      for (int u = 0; u < k; ++u) add(result, k, d, "tsb", "beams", sel.dims[u], u);
    }
  }
  result.timings.total = seconds_since(t_start);
  return result;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::jthread> pool;
  const int workers = std::min(threads, count);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("percentile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw Error("percentile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace tsb
