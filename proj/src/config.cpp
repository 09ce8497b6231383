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

#include "ness_battery/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

struct Entry {
    std::string value;
    int line;
};

const std::vector<std::string> kTemperatureKeys{"gamma0_A", "gamma0_S", "T_A", "T_S"};
const std::vector<std::string> kOpticsKeys{"p", "gamma", "Gamma"};
const std::vector<std::string> kRawKeys{"gamma_plus_A", "gamma_minus_A", "gamma_plus_S", "gamma_minus_S"};

const std::set<std::string> kKnownKeys{
    "experiment", "omega0", "lambda", "gamma0_A", "gamma0_S", "T_A", "T_S", "p", "gamma", "Gamma",
    "gamma_plus_A", "gamma_minus_A", "gamma_plus_S", "gamma_minus_S", "gamma0", "beta_S", "beta_A",
    "tau", "taus", "idle", "cycles", "samples", "tol", "max_cycles", "heat_steps",
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void invalid(const std::string& key, const std::string& constraint) {
    throw Error(ErrorCode::ValidationError, key + ": " + constraint);
}

double parse_number(std::string_view text, const std::string& key) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        invalid(key, "expected a finite number, got '" + std::string(text) + "'");
    }
    return value;
}

long parse_integer(std::string_view text, const std::string& key) {
    text = trim(text);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        invalid(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::set<std::string> experiment_keys(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::ness:
    case ExperimentKind::analytics: return {};
    case ExperimentKind::cycle_trace: return {"tau", "idle", "samples", "cycles"};
    case ExperimentKind::sweep_tau: return {"taus", "tol", "max_cycles", "heat_steps"};
    case ExperimentKind::sweep_temp: return {"gamma0", "beta_S", "beta_A"};
    case ExperimentKind::oss: return {"tau", "taus", "cycles", "samples", "tol", "max_cycles", "heat_steps"};
    }
    return {};
}

ExperimentKind parse_kind(const std::string& text) {
    static const std::map<std::string, ExperimentKind> kinds{
        {"ness", ExperimentKind::ness},           {"cycle-trace", ExperimentKind::cycle_trace},
        {"sweep-tau", ExperimentKind::sweep_tau}, {"sweep-temp", ExperimentKind::sweep_temp},
        {"analytics", ExperimentKind::analytics}, {"oss", ExperimentKind::oss},
    };
    const auto it = kinds.find(text);
    if (it == kinds.end()) {
        invalid("experiment", "unknown experiment '" + text +
                                  "' (expected ness, cycle-trace, sweep-tau, sweep-temp, analytics or oss)");
    }
    return it->second;
}

std::vector<double> grid_value(const std::map<std::string, Entry>& entries, const std::string& key) {
    try {
        return parse_grid(entries.at(key).value);
    } catch (const Error& e) {
        invalid(key, e.what());
    }
}

} // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
    case ExperimentKind::ness: return "ness";
    case ExperimentKind::cycle_trace: return "cycle-trace";
    case ExperimentKind::sweep_tau: return "sweep-tau";
    case ExperimentKind::sweep_temp: return "sweep-temp";
    case ExperimentKind::analytics: return "analytics";
    case ExperimentKind::oss: return "oss";
    }
    return "?";
}

std::vector<double> parse_grid(std::string_view text) {
    text = trim(text);
    std::vector<double> out;
    const bool lin = text.starts_with("lin:");
    const bool log = text.starts_with("log:");
    if (lin || log) {
        std::vector<std::string_view> parts;
        std::string_view rest = text.substr(4);
        for (std::size_t pos; (pos = rest.find(':')) != std::string_view::npos; rest = rest.substr(pos + 1)) {
            parts.push_back(rest.substr(0, pos));
        }
        parts.push_back(rest);
        if (parts.size() != 3) {
            invalid("grid", "expected lin:start:stop:count or log:start:stop:count");
        }
        const double start = parse_number(parts[0], "grid start");
        const double stop = parse_number(parts[1], "grid stop");
        const long count = parse_integer(parts[2], "grid count");
        if (count < 1) invalid("grid count", "must be at least 1");
        if (log && (!(start > 0.0) || !(stop > 0.0))) {
            invalid("grid", "log endpoints must be positive");
        }
        for (long k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
            if (k > 0 && k == count - 1) {
                out.push_back(stop);
            } else {
                out.push_back(lin ? start + f * (stop - start) : start * std::pow(stop / start, f));
            }
        }
        return out;
    }
    std::string_view rest = text;
    while (true) {
        const auto pos = rest.find(',');
        out.push_back(parse_number(rest.substr(0, pos), "grid value"));
        if (pos == std::string_view::npos) break;
        rest = rest.substr(pos + 1);
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    ExperimentConfig config;

    int line_no = 0;
    std::istringstream stream{std::string(text)};
    for (std::string raw; std::getline(stream, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no);
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw Error(ErrorCode::ParseError, where + ": empty key or value");
        }
        if (!kKnownKeys.contains(key)) {
            throw Error(ErrorCode::ParseError, where + ": unknown key '" + key + "'");
        }
        if (entries.contains(key)) {
            throw Error(ErrorCode::ParseError, where + ": duplicate key '" + key + "'");
        }
        entries.emplace(key, Entry{value, line_no});
        config.entries.emplace_back(key, value);
    }

    if (!entries.contains("experiment")) invalid("experiment", "required");
    config.experiment = parse_kind(entries.at("experiment").value);
    const std::set<std::string> extra = experiment_keys(config.experiment);
    const bool own_rates = config.experiment == ExperimentKind::sweep_temp;

    for (const auto& [key, entry] : entries) {
        const bool common = key == "experiment" || key == "omega0" || key == "lambda";
        const bool bath = std::ranges::count(kTemperatureKeys, key) || std::ranges::count(kOpticsKeys, key) ||
                          std::ranges::count(kRawKeys, key);
        if (common || (bath && !own_rates) || extra.contains(key)) continue;
        invalid(key, "not used by experiment '" + std::string(to_string(config.experiment)) + "' (line " +
                         std::to_string(entry.line) + ")");
    }

    const auto number = [&](const std::string& key) { return parse_number(entries.at(key).value, key); };
    const auto number_or = [&](const std::string& key, double fallback) {
        return entries.contains(key) ? number(key) : fallback;
    };
    const auto integer_or = [&](const std::string& key, long fallback) {
        return entries.contains(key) ? parse_integer(entries.at(key).value, key) : fallback;
    };

    if (!entries.contains("lambda")) invalid("lambda", "required");
    try {
        config.model = ModelParams::make(number_or("omega0", 1.0), number("lambda"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ValidationError) throw;
        invalid("lambda", e.what());
    }
    const bool engine = config.experiment == ExperimentKind::cycle_trace ||
                        config.experiment == ExperimentKind::sweep_tau || config.experiment == ExperimentKind::oss;
    if (engine && !(config.model.lambda > 0.0)) invalid("lambda", "must be positive for cycle experiments");

    const auto group_count = [&](const std::vector<std::string>& keys) {
        return std::ranges::count_if(keys, [&](const std::string& k) { return entries.contains(k); });
    };
    const auto complete = [&](const std::vector<std::string>& keys, const char* mode) {
        for (const auto& k : keys) {
            if (!entries.contains(k)) invalid(k, std::string("required by the ") + mode + " bath mode");
        }
    };
    if (!own_rates) {
        const bool temperature = group_count(kTemperatureKeys) > 0;
        const bool optics = group_count(kOpticsKeys) > 0;
        const bool raw = group_count(kRawKeys) > 0;
        const int modes = int(temperature) + int(optics) + int(raw);
        if (modes == 0) invalid("bath", "missing; give temperature, optics or raw rate keys");
        if (modes > 1) invalid("bath", "ambiguous; keys from more than one bath mode are present");
        if (temperature) {
            complete(kTemperatureKeys, "temperature");
            config.bath = TemperatureBath{number("gamma0_A"), number("gamma0_S"), number("T_A"), number("T_S")};
        } else if (optics) {
            complete(kOpticsKeys, "optics");
            config.bath = OpticsBath{number("p"), number("gamma"), number("Gamma")};
        } else {
            complete(kRawKeys, "raw");
            config.bath = RawBath{number("gamma_plus_A"), number("gamma_minus_A"), number("gamma_plus_S"),
                                  number("gamma_minus_S")};
        }
        try {
            (void)bath_rates(config);
        } catch (const Error& e) {
            invalid("bath", e.what());
        }
    }

    switch (config.experiment) {
    case ExperimentKind::ness:
    case ExperimentKind::analytics: break;
    case ExperimentKind::cycle_trace:
        config.tau = number_or("tau", 5000.0);
        config.idle = number_or("idle", 500.0);
        config.samples = static_cast<int>(integer_or("samples", 1000));
        config.cycles = static_cast<int>(integer_or("cycles", 1));
        break;
    case ExperimentKind::sweep_tau:
        if (!entries.contains("taus")) invalid("taus", "required");
        config.taus = grid_value(entries, "taus");
        break;
    case ExperimentKind::sweep_temp:
        if (!entries.contains("beta_S")) invalid("beta_S", "required");
        if (!entries.contains("beta_A")) invalid("beta_A", "required");
        config.gamma0 = number_or("gamma0", 1e-3);
        config.beta_S = grid_value(entries, "beta_S");
        config.beta_A = grid_value(entries, "beta_A");
        break;
    case ExperimentKind::oss:
        config.tau = number_or("tau", 150.0);
        config.taus = entries.contains("taus") ? grid_value(entries, "taus") : std::vector<double>{1, 10, 150, 1000};
        config.cycles = static_cast<int>(integer_or("cycles", 40));
        config.samples = static_cast<int>(integer_or("samples", 200));
        break;
    }
    config.tol = number_or("tol", 1e-10);
    config.max_cycles = integer_or("max_cycles", 1'000'000);
    config.heat_steps = static_cast<int>(integer_or("heat_steps", 512));

    if (!(config.tau >= 0.0)) invalid("tau", "must be positive");
    if ((config.experiment == ExperimentKind::cycle_trace || config.experiment == ExperimentKind::oss) &&
        !(config.tau > 0.0)) {
        invalid("tau", "must be positive");
    }
    if (!(config.idle >= 0.0)) invalid("idle", "must be non-negative");
    if (config.samples < 1) invalid("samples", "must be at least 1");
    if (config.cycles < 0) invalid("cycles", "must be non-negative");
    if (!(config.tol > 0.0)) invalid("tol", "must be positive");
    if (config.max_cycles < 1) invalid("max_cycles", "must be at least 1");
    if (config.heat_steps < 16) invalid("heat_steps", "must be at least 16");
    if (!(config.gamma0 >= 0.0)) invalid("gamma0", "must be non-negative");
    for (std::size_t i = 0; i < config.taus.size(); ++i) {
        if (!(config.taus[i] > 0.0) || (i > 0 && !(config.taus[i] > config.taus[i - 1]))) {
            invalid("taus", "must be positive and strictly ascending");
        }
    }
    for (const auto* grid : {&config.beta_S, &config.beta_A}) {
        for (double b : *grid) {
            if (!(b >= 0.0)) invalid(grid == &config.beta_S ? "beta_S" : "beta_A", "must be non-negative");
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

BathRates bath_rates(const ExperimentConfig& config) {
    const double w = config.model.omega0;
    return std::visit(
        [w](const auto& bath) -> BathRates {
            using T = std::decay_t<decltype(bath)>;
            if constexpr (std::is_same_v<T, TemperatureBath>) {
                return rates_from_temperatures(bath.gamma0_A, bath.gamma0_S, bath.T_A, bath.T_S, w);
            } else if constexpr (std::is_same_v<T, OpticsBath>) {
                return rates_from_optics(bath.p, bath.gamma, bath.Gamma, w);
            } else if constexpr (std::is_same_v<T, RawBath>) {
                return BathRates::raw(bath.gamma_plus_A, bath.gamma_minus_A, bath.gamma_plus_S, bath.gamma_minus_S);
            } else {
                throw Error(ErrorCode::ValidationError, "bath: no bath mode configured");
            }
        },
        config.bath);
}

} // namespace ness_battery
