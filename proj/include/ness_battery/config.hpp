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

// config.hpp - flat `key = value` experiment configuration.
//
//   # Full cycle, T_A = 2, T_S = 0.1
//   experiment = cycle-trace
//   lambda     = 0.01
//   gamma0_A   = 1e-3
//   gamma0_S   = 1e-3
//   T_A        = 2
//   T_S        = 0.1
//
// Exactly one bath mode is required (except for sweep-temp, which builds its
// own rates from `gamma0` and the beta grids):
//   temperature: gamma0_A, gamma0_S, T_A, T_S
//   optics:      p, gamma, Gamma
//   raw:         gamma_plus_A, gamma_minus_A, gamma_plus_S, gamma_minus_S
//
// Grids (`taus`, `beta_S`, `beta_A`) accept `a, b, c`, `lin:start:stop:count`
// or `log:start:stop:count`.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ness_battery/model.hpp"

namespace ness_battery {

enum class ExperimentKind { ness, cycle_trace, sweep_tau, sweep_temp, analytics, oss };

std::string_view to_string(ExperimentKind kind) noexcept;

struct TemperatureBath {
    double gamma0_A;
    double gamma0_S;
    double T_A;
    double T_S;
};

struct OpticsBath {
    double p;
    double gamma;
    double Gamma;
};

struct RawBath {
    double gamma_plus_A;
    double gamma_minus_A;
    double gamma_plus_S;
    double gamma_minus_S;
};

using BathSpec = std::variant<std::monostate, TemperatureBath, OpticsBath, RawBath>;

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ness;
    ModelParams model;
    BathSpec bath;

    // sweep-temp
    double gamma0 = 1e-3;
    std::vector<double> beta_S;
    std::vector<double> beta_A;

    // cycle-trace / oss / sweep-tau
    double tau = 0.0;
    std::vector<double> taus;
    double idle = 0.0;
    int cycles = 1;
    int samples = 1000;
    double tol = 1e-10;
    long max_cycles = 1'000'000;
    int heat_steps = 512;

    // Keys and values as written, in file order (echoed into the manifest).
    std::vector<std::pair<std::string, std::string>> entries;
};

// Throws ParseError (with the 1-based line number) for malformed lines,
// duplicate or unknown keys; ValidationError for missing/ambiguous bath
// settings, keys that the experiment does not use, or out-of-range values.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

BathRates bath_rates(const ExperimentConfig& config);

std::vector<double> parse_grid(std::string_view text);

} // namespace ness_battery
