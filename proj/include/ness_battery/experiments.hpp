// Copyright 2026 The ness-battery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// experiments.hpp - named experiments, their CSV tables and the run manifest.
//
// CSV schemas (one file per output table, 15 significant digits, LF endings):
//   ness.csv             beta_S,beta_A,r_gg,r_S,r_A,r_ee,ergotropy
//   cycle_trace.csv      t,r_gg,r_S,r_A,r_ee,instantaneous_Q_hot
//   sweep_tau.csv        tau,work,Q_hot,eta,power,cycles_to_converge
//   sweep_temp.csv       beta_S,beta_A,ergotropy
//   analytics.csv        K,ergotropy_rate,heat_rate,eta_tau,eta_plateau,
//                        power_general,power_strong_cold,power_optics
//   oss_summary.csv      tau,cycles_to_converge,work,Q_hot,Q_cold,eta,power,tau_min
//   oss_convergence.csv  tau,cycle,work
//   oss_trajectory.csv   t,cycle,r_gg,r_S,r_A,r_ee,ergotropy
// Failed sweep points are written as nan and listed in manifest.json.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ness_battery/config.hpp"

namespace ness_battery {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// printf("%.15g"), with nan / inf / -inf spelled out.
std::string format_number(double value);
std::string to_csv(const CsvTable& table);

struct ExperimentOutput {
    std::string file_name;
    CsvTable table;
};

struct ExperimentResult {
    std::vector<ExperimentOutput> outputs;
    std::vector<std::string> row_errors;
    std::vector<std::string> warnings;
};

// Pure computation; `threads` caps sweep parallelism (0 = hardware).
ExperimentResult compute_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;
};

// Computes every config, then writes the CSV files and manifest.json into
// out_dir (created if needed). `label` names the preset or config file.
RunReport run_experiments(const std::vector<ExperimentConfig>& configs, const std::filesystem::path& out_dir,
                          const std::string& label, unsigned threads = 1);

// Writes error.json into out_dir (best effort) and returns the JSON text.
std::string write_error_record(const std::filesystem::path& out_dir, const std::string& code,
                               const std::string& message);

struct Preset {
    std::string name;
    std::string description;
    std::vector<std::string> configs; // config file texts
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

// NESS_BATTERY_THREADS (integer >= 1); unset means 0, the hardware concurrency.
unsigned threads_from_environment();

std::string_view tool_version() noexcept;

} // namespace ness_battery
