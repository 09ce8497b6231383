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

#include "ness_battery/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "ness_battery/dynamics.hpp"
#include "ness_battery/engine.hpp"
#include "ness_battery/ergotropy.hpp"
#include "ness_battery/error.hpp"

#ifndef NESS_BATTERY_VERSION
#define NESS_BATTERY_VERSION "0.0.0"
#endif

namespace ness_battery {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ln(G-/G+)/omega0 with the limits spelled out instead of throwing.
double channel_beta(double gamma_plus, double gamma_minus, double omega0) {
    if (gamma_plus > 0.0 && gamma_minus > 0.0) return effective_inverse_temperature(gamma_plus, gamma_minus, omega0);
    if (gamma_plus == 0.0 && gamma_minus > 0.0) return std::numeric_limits<double>::infinity();
    return kNaN;
}

std::vector<double> population_columns(const Populations& p) { return {p.r_gg, p.r_S, p.r_A, p.r_ee}; }

void append(std::vector<double>& row, const std::vector<double>& more) { row.insert(row.end(), more.begin(), more.end()); }

OssOptions oss_options(const ExperimentConfig& config) {
    OssOptions o;
    o.tol = config.tol;
    o.max_cycles = config.max_cycles;
    o.heat_steps = config.heat_steps;
    return o;
}

ExperimentResult run_ness(const ExperimentConfig& config) {
    const BathRates rates = bath_rates(config);
    const Liouvillian L = build_liouvillian(config.model, rates);
    const DensityMatrix ness = solve_ness(L);
    std::vector<double> row{channel_beta(rates.gamma_plus_S, rates.gamma_minus_S, config.model.omega0),
                            channel_beta(rates.gamma_plus_A, rates.gamma_minus_A, config.model.omega0)};
    append(row, population_columns(ness.populations()));
    row.push_back(ergotropy(ness, L.hamiltonian).ergotropy);
    return {{{"ness.csv", {{"beta_S", "beta_A", "r_gg", "r_S", "r_A", "r_ee", "ergotropy"}, {row}}}}, {}, {}};
}

ExperimentResult run_cycle_trace(const ExperimentConfig& config) {
    const Liouvillian L = build_liouvillian(config.model, bath_rates(config));
    const auto samples = trace_cycles(L, solve_ness(L), config.idle, config.tau, config.cycles, config.samples);
    CsvTable table{{"t", "r_gg", "r_S", "r_A", "r_ee", "instantaneous_Q_hot"}, {}};
    for (const auto& s : samples) {
        std::vector<double> row{s.t};
        append(row, population_columns(s.populations));
        row.push_back(s.heat_current_hot);
        table.rows.push_back(std::move(row));
    }
    return {{{"cycle_trace.csv", std::move(table)}}, {}, {}};
}

ExperimentResult run_sweep_tau(const ExperimentConfig& config, unsigned threads) {
    const Liouvillian L = build_liouvillian(config.model, bath_rates(config));
    const auto rows = sweep_tau(L, config.taus, oss_options(config), threads);
    ExperimentResult result;
    CsvTable table{{"tau", "work", "Q_hot", "eta", "power", "cycles_to_converge"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.error) {
            result.row_errors.push_back("sweep_tau.csv row " + std::to_string(i + 1) + ": " + *r.error);
            table.rows.push_back({r.tau, kNaN, kNaN, kNaN, kNaN, kNaN});
        } else {
            table.rows.push_back(
                {r.tau, r.work, r.heat_hot, r.efficiency, r.power, static_cast<double>(r.cycles_to_converge)});
        }
    }
    result.outputs.push_back({"sweep_tau.csv", std::move(table)});
    return result;
}

ExperimentResult run_sweep_temp(const ExperimentConfig& config, unsigned threads) {
    const auto rows = sweep_temperatures(config.beta_S, config.beta_A, config.gamma0, config.model, threads);
    ExperimentResult result;
    CsvTable table{{"beta_S", "beta_A", "ergotropy"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.error) result.row_errors.push_back("sweep_temp.csv row " + std::to_string(i + 1) + ": " + *r.error);
        table.rows.push_back({r.beta_S, r.beta_A, r.error ? kNaN : r.ergotropy});
    }
    result.outputs.push_back({"sweep_temp.csv", std::move(table)});
    return result;
}

ExperimentResult run_analytics(const ExperimentConfig& config) {
    const ShortCycleAnalytics a = short_cycle_analytics(bath_rates(config), config.model);
    CsvTable table{{"K", "ergotropy_rate", "heat_rate", "eta_tau", "eta_plateau", "power_general",
                    "power_strong_cold", "power_optics"},
                   {{a.K, a.ergotropy_rate, a.heat_rate, a.eta_tau, a.eta_plateau, a.power_general,
                     a.power_strong_cold, a.power_optics.value_or(kNaN)}}};
    return {{{"analytics.csv", std::move(table)}}, {}, {}};
}

ExperimentResult run_oss(const ExperimentConfig& config) {
    const Liouvillian L = build_liouvillian(config.model, bath_rates(config));
    ExperimentResult result;
    CsvTable summary{{"tau", "cycles_to_converge", "work", "Q_hot", "Q_cold", "eta", "power", "tau_min"}, {}};
    CsvTable convergence{{"tau", "cycle", "work"}, {}};
    OssOptions options = oss_options(config);
    options.keep_work_trace = true;
    options.estimate_tau_min = true;
    for (double tau : config.taus) {
        try {
            const OSSResult oss = find_oss(L, tau, options);
            const CycleRecord& r = oss.record;
            summary.rows.push_back({tau, static_cast<double>(oss.cycles_to_converge), r.work_extracted, r.heat_hot,
                                    r.heat_cold, r.efficiency, r.power, oss.tau_min_estimate.value_or(kNaN)});
            for (std::size_t c = 0; c < oss.work_trace.size(); ++c) {
                convergence.rows.push_back({tau, static_cast<double>(c + 1), oss.work_trace[c]});
            }
        } catch (const Error& e) {
            result.row_errors.push_back("oss_summary.csv tau=" + format_number(tau) + ": " + e.what());
            summary.rows.push_back({tau, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
        }
    }
    CsvTable trajectory{{"t", "cycle", "r_gg", "r_S", "r_A", "r_ee", "ergotropy"}, {}};
    for (const auto& s : trace_cycles(L, solve_ness(L), 0.0, config.tau, config.cycles, config.samples)) {
        std::vector<double> row{s.t, static_cast<double>(s.cycle)};
        append(row, population_columns(s.populations));
        row.push_back(s.ergotropy);
        trajectory.rows.push_back(std::move(row));
    }
    result.outputs.push_back({"oss_summary.csv", std::move(summary)});
    result.outputs.push_back({"oss_convergence.csv", std::move(convergence)});
    result.outputs.push_back({"oss_trajectory.csv", std::move(trajectory)});
    return result;
}

json config_echo(const ExperimentConfig& config) {
    json echo = json::object();
    for (const auto& [key, value] : config.entries) echo[key] = value;
    return echo;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

ExperimentResult compute_experiment(const ExperimentConfig& config, unsigned threads) {
    ExperimentResult result;
    switch (config.experiment) {
    case ExperimentKind::ness: result = run_ness(config); break;
    case ExperimentKind::cycle_trace: result = run_cycle_trace(config); break;
    case ExperimentKind::sweep_tau: result = run_sweep_tau(config, threads); break;
    case ExperimentKind::sweep_temp: result = run_sweep_temp(config, threads); break;
    case ExperimentKind::analytics: result = run_analytics(config); break;
    case ExperimentKind::oss: result = run_oss(config); break;
    }
    if (config.model.outside_weak_coupling()) {
        result.warnings.push_back("lambda/omega0 > 0.1: the bath rates assume lambda << omega0");
    }
    return result;
}

RunReport run_experiments(const std::vector<ExperimentConfig>& configs, const std::filesystem::path& out_dir,
                          const std::string& label, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    const std::string started_at = utc_timestamp();

    std::vector<ExperimentResult> results;
    results.reserve(configs.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    for (const auto& config : configs) results.push_back(compute_experiment(config, threads));

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + out_dir.string() + "'");

    RunReport report;
    json runs = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        json files = json::array();
        for (const auto& output : results[i].outputs) {
            const auto path = out_dir / output.file_name;
            write_text(path, to_csv(output.table));
            report.files.push_back(path);
            files.push_back(output.file_name);
        }
        report.warnings.insert(report.warnings.end(), results[i].warnings.begin(), results[i].warnings.end());
        runs.push_back({{"experiment", std::string(to_string(configs[i].experiment))},
                        {"config", config_echo(configs[i])},
                        {"outputs", files},
                        {"row_errors", results[i].row_errors},
                        {"warnings", results[i].warnings}});
    }
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const json manifest{{"tool", "ness-battery"},
                        {"version", std::string(tool_version())},
                        {"source", label},
                        {"started_at", started_at},
                        {"wall_time_seconds", report.wall_time_seconds},
                        {"threads", threads},
                        {"runs", runs}};
    const auto manifest_path = out_dir / "manifest.json";
    write_text(manifest_path, manifest.dump(2) + "\n");
    report.files.push_back(manifest_path);
    return report;
}

std::string write_error_record(const std::filesystem::path& out_dir, const std::string& code,
                               const std::string& message) {
    const json record{{"error", {{"code", code}, {"message", message}}}};
    const std::string text = record.dump(2) + "\n";
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        std::ofstream out(out_dir / "error.json", std::ios::binary);
        if (out) out << text;
    }
    return text;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all{
        {"fig2",
         "NESS ergotropy over inverse effective temperatures, plus one explicit rate point",
         {R"(# NESS ergotropy on a (beta_S, beta_A) grid with G0_A = G0_S
experiment = sweep-temp
lambda = 0.01
gamma0 = 1e-3
beta_S = lin:0.25:5:20
beta_A = lin:0.25:5:20
)",
          R"(# explicit rate point: G+ = 3.5e-4, G-_S = 5.5e-3, G-_A = 5e-4 (beta_S ~ 2.75)
experiment = ness
lambda = 0.01
gamma_plus_A = 3.5e-4
gamma_minus_A = 5e-4
gamma_plus_S = 3.5e-4
gamma_minus_S = 5.5e-3
)"}},
        {"fig3",
         "full cycle from the NESS: idle, S<->A swap, recharge",
         {R"(# lambda = 1e-2, T_A = 2, T_S = 0.1, G0 = 1e-3 (omega0 = 1)
experiment = cycle-trace
omega0 = 1
lambda = 0.01
gamma0_A = 1e-3
gamma0_S = 1e-3
T_A = 2
T_S = 0.1
tau = 5000
idle = 500
samples = 1000
cycles = 1
)"}},
        {"fig4a",
         "efficiency and power at the operational steady state versus tau",
         {R"(experiment = sweep-tau
omega0 = 1
lambda = 0.01
gamma0_A = 1e-3
gamma0_S = 1e-3
T_A = 2
T_S = 0.1
taus = log:1:1e5:26
tol = 1e-12
)"}},
        {"fig4bc",
         "per-cycle work from the NESS to the operational steady state, and the tau = 150 trajectory",
         {R"(experiment = oss
omega0 = 1
lambda = 0.01
gamma0_A = 1e-3
gamma0_S = 1e-3
T_A = 2
T_S = 0.1
taus = 1, 10, 150, 1000
tau = 150
cycles = 40
samples = 200
tol = 1e-12
)"}},
    };
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw Error(ErrorCode::ValidationError, "preset: unknown preset '" + name + "'");
}

unsigned threads_from_environment() {
    const char* raw = std::getenv("NESS_BATTERY_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (*end != '\0' || n < 1) {
        throw Error(ErrorCode::ValidationError, "NESS_BATTERY_THREADS: expected an integer >= 1");
    }
    return static_cast<unsigned>(n);
}

std::string_view tool_version() noexcept { return NESS_BATTERY_VERSION; }

} // namespace ness_battery
