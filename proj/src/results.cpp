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


#include <fstream>
#include <string>

#include <fmt/format.h>

#include "tsb/harness.hpp"
#include "tsb/types.hpp"

namespace tsb {
namespace {

constexpr const char* kCsvHeader =
    "study,n_antennas,n_users,n_sectors,angular_spread,snr_linear,snr_reference,antenna_spacing,trials,"
    "delta,scheme,metric,ue,sector,value,seed\n";

// Shortest form that round-trips a double.
std::string num(double v) { return fmt::format("{}", v); }

template <typename T>
std::string opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string to_csv(const ExperimentResult& result) {
  std::string out = kCsvHeader;
  const SystemConfig& c = result.config;
  const std::string prefix = fmt::format("{},{},", result.study, c.n_antennas);
  const std::string middle =
      fmt::format("{},{},{},{},{},{},", c.n_sectors, num(c.angular_spread), num(c.snr_linear()),
                  c.snr_reference == SnrReference::kArray ? "array" : "antenna",
                  num(c.antenna_spacing), c.trials);
  for (const Record& r : result.records) {
    out += prefix;
    out += fmt::format("{},", r.n_users);
    out += middle;
    out += fmt::format("{},{},{},{},{},{},{}\n", opt(r.delta), r.scheme, r.metric, opt(r.ue),
                       opt(r.sector), num(r.value), c.seed);
  }
  return out;
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["study"] = result.study;
  j["config"] = to_json(result.config);
  j["kernel_isa"] = result.kernel_isa;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const Record& r : result.records) {
    recs.push_back({{"n_users", r.n_users},
                    {"delta", opt_json(r.delta)},
                    {"scheme", r.scheme},
                    {"metric", r.metric},
                    {"ue", opt_json(r.ue)},
                    {"sector", opt_json(r.sector)},
                    {"value", r.value}});
  }
  const StageTimings& t = result.timings;
  j["timings"] = {{"setup", t.setup},           {"det_equiv", t.det_equiv},
                  {"exact_omega", t.exact_omega}, {"mmse", t.mmse},
                  {"matched_filter", t.matched_filter}, {"tsb_inner", t.tsb_inner},
                  {"total", t.total}};
  return j;
}

ExperimentResult result_from_json(const nlohmann::json& j) {
  ExperimentResult r;
  try {
    r.study = j.at("study").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.kernel_isa = j.value("kernel_isa", std::string());
    for (const auto& rec : j.at("records")) {
      r.records.push_back(Record{rec.at("n_users").get<int>(), opt_from<double>(rec, "delta"),
                                 rec.at("scheme").get<std::string>(),
                                 rec.at("metric").get<std::string>(), opt_from<int>(rec, "ue"),
                                 opt_from<int>(rec, "sector"), rec.at("value").get<double>()});
    }
    const auto& t = j.at("timings");
    r.timings = StageTimings{t.at("setup").get<double>(),       t.at("det_equiv").get<double>(),
                             t.at("exact_omega").get<double>(), t.at("mmse").get<double>(),
                             t.at("matched_filter").get<double>(),
                             t.at("tsb_inner").get<double>(),   t.at("total").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("result json: ") + e.what());
  }
  return r;
}

std::filesystem::path emit_results(const ExperimentResult& result,
                                   const std::filesystem::path& out_dir, OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("emit_results: cannot create " + out_dir.string() + ": " + ec.message());
  const char* ext = format == OutputFormat::kCsv ? "csv" : "json";
  const auto path = out_dir / fmt::format("{}-{}.{}", result.study, result.config.seed, ext);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_results: cannot open " + path.string() + " for writing");
  if (format == OutputFormat::kCsv) {
    out << to_csv(result);
  } else {
    out << to_json(result).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw Error("emit_results: write failed for " + path.string());
  return path;
}

}  // namespace tsb
