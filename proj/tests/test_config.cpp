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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ness_battery/config.hpp"
#include "ness_battery/engine.hpp"
#include "ness_battery/error.hpp"
#include "ness_battery/experiments.hpp"

using namespace ness_battery;
namespace fs = std::filesystem;

namespace {

bool throws_with(auto&& fn, ErrorCode code, std::string_view fragment = {}) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code && std::string_view(e.what()).find(fragment) != std::string_view::npos;
    }
    return false;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ness_battery_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const char* kTemperatureNess = R"(experiment = ness
lambda = 0.01
gamma0_A = 1e-3
gamma0_S = 1e-3
T_A = 2
T_S = 0.1
)";

} // namespace

TEST_CASE("grids") {
    CHECK(parse_grid("1, 2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(parse_grid("lin:0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto g = parse_grid("log:1:1e4:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1.0);
    CHECK(g[2] == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(g.back() == 1e4);
    CHECK(parse_grid("lin:3:7:1") == std::vector<double>{3.0});
    CHECK(throws_with([] { parse_grid("log:0:1:3"); }, ErrorCode::ValidationError));
    CHECK(throws_with([] { parse_grid("lin:0:1"); }, ErrorCode::ValidationError));
    CHECK(throws_with([] { parse_grid("lin:0:1:0"); }, ErrorCode::ValidationError));
    CHECK(throws_with([] { parse_grid("1,,2"); }, ErrorCode::ValidationError));
    CHECK(throws_with([] { parse_grid("1,x"); }, ErrorCode::ValidationError));
}

TEST_CASE("shipped presets parse") {
    for (const auto& p : presets()) {
        for (const auto& text : p.configs) CHECK_NOTHROW(parse_config(text));
    }
    const ExperimentConfig c = parse_config(find_preset("fig3").configs.at(0));
    CHECK(c.experiment == ExperimentKind::cycle_trace);
    CHECK(c.model.lambda == 0.01);
    const auto& bath = std::get<TemperatureBath>(c.bath);
    CHECK(bath.T_A == 2.0);
    CHECK(bath.T_S == 0.1);
    CHECK(c.tau == 5000.0);
    CHECK(c.entries.front().first == "experiment");
    CHECK(throws_with([] { find_preset("fig9"); }, ErrorCode::ValidationError));
}

TEST_CASE("config parse errors") {
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 0.01\nwat = 1\n"); }, ErrorCode::ParseError,
                      "line 3"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda 0.01\n"); }, ErrorCode::ParseError, "line 2"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 0.01\nlambda = 0.02\n"); }, ErrorCode::ParseError,
                      "duplicate"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda =\n"); }, ErrorCode::ParseError, "line 2"));
}

TEST_CASE("config validation errors") {
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 0.01\n"); }, ErrorCode::ValidationError, "missing"));
    CHECK(throws_with([] { parse_config(std::string(kTemperatureNess) + "p = 1e-4\n"); }, ErrorCode::ValidationError,
                      "ambiguous"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 0.01\np = 1e-4\ngamma = 1e-3\n"); },
                      ErrorCode::ValidationError, "Gamma"));
    CHECK(throws_with([] { parse_config(std::string(kTemperatureNess) + "tau = 3\n"); }, ErrorCode::ValidationError,
                      "tau"));
    CHECK(throws_with([] { parse_config("experiment = bogus\nlambda = 0.01\n"); }, ErrorCode::ValidationError));
    CHECK(throws_with([] { parse_config("lambda = 0.01\n"); }, ErrorCode::ValidationError, "experiment"));
    CHECK(throws_with(
        [] {
            parse_config("experiment = oss\nlambda = 0\ngamma0_A = 1e-3\ngamma0_S = 1e-3\nT_A = 2\nT_S = 0.1\n");
        },
        ErrorCode::ValidationError, "lambda"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 1.5\np = 1e-4\ngamma = 1e-3\nGamma = 0.1\n"); },
                      ErrorCode::ValidationError, "lambda"));
    CHECK(throws_with([] { parse_config("experiment = ness\nlambda = 0.01\np = 1e-2\ngamma = 1e-3\nGamma = 0.1\n"); },
                      ErrorCode::ValidationError));
    CHECK(throws_with(
        [] { parse_config("experiment = sweep-temp\nlambda = 0.01\nbeta_S = 1\nbeta_A = 1\nT_A = 2\n"); },
        ErrorCode::ValidationError));
    CHECK(throws_with(
        [] {
            parse_config(
                "experiment = sweep-tau\nlambda = 0.01\np = 1e-4\ngamma = 1e-3\nGamma = 0.1\ntaus = 10, 1\n");
        },
        ErrorCode::ValidationError, "taus"));
}

TEST_CASE("comments, blank lines and defaults") {
    const ExperimentConfig c = parse_config(
        "# header\n\nexperiment = cycle-trace   # trailing\nlambda = 0.01\np = 1e-4\ngamma = 1e-3\nGamma = 0.1\n");
    CHECK(c.experiment == ExperimentKind::cycle_trace);
    CHECK(c.model.omega0 == 1.0);
    CHECK(c.tau == 5000.0);
    CHECK(c.idle == 500.0);
    CHECK(c.samples == 1000);
    CHECK(c.cycles == 1);
    const BathRates r = bath_rates(c);
    CHECK(r.gamma_minus_S == doctest::Approx(0.1005));
}

TEST_CASE("csv formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(to_csv({{"a", "b"}, {{1.0, 2.0}, {3.0, 4.5}}}) == "a,b\n1,2\n3,4.5\n");
}

TEST_CASE("ness experiment with equal temperatures") {
    const ExperimentConfig c = parse_config(
        "experiment = ness\nlambda = 0.01\ngamma0_A = 1e-3\ngamma0_S = 3e-3\nT_A = 0.7\nT_S = 0.7\n");
    const ExperimentResult r = compute_experiment(c);
    REQUIRE(r.outputs.size() == 1);
    const auto& t = r.outputs[0].table;
    CHECK(r.outputs[0].file_name == "ness.csv");
    CHECK(t.header == std::vector<std::string>{"beta_S", "beta_A", "r_gg", "r_S", "r_A", "r_ee", "ergotropy"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == doctest::Approx(1 / 0.7).epsilon(1e-12));
    CHECK(t.rows[0][1] == doctest::Approx(1 / 0.7).epsilon(1e-12));
    CHECK(t.rows[0][6] <= 1e-12);
}

TEST_CASE("analytics experiment matches the library") {
    const ExperimentConfig c =
        parse_config("experiment = analytics\nlambda = 0.01\np = 1e-4\ngamma = 1e-3\nGamma = 0.1\n");
    const ExperimentResult r = compute_experiment(c);
    const auto& row = r.outputs.at(0).table.rows.at(0);
    const ShortCycleAnalytics a = short_cycle_analytics(rates_from_optics(1e-4, 1e-3, 0.1, 1.0), c.model);
    CHECK(row == std::vector<double>{a.K, a.ergotropy_rate, a.heat_rate, a.eta_tau, a.eta_plateau, a.power_general,
                                     a.power_strong_cold, *a.power_optics});
}

TEST_CASE("weak-coupling warning") {
    const ExperimentConfig c = parse_config("experiment = analytics\nlambda = 0.2\np = 1e-4\ngamma = 1e-3\nGamma = 0.1\n");
    const auto r = compute_experiment(c);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("lambda") != std::string::npos);
}

TEST_CASE("cycle trace output") {
    const ExperimentConfig c = parse_config(find_preset("fig3").configs.at(0));
    const ExperimentResult r = compute_experiment(c);
    const auto& t = r.outputs.at(0).table;
    CHECK(t.header == std::vector<std::string>{"t", "r_gg", "r_S", "r_A", "r_ee", "instantaneous_Q_hot"});
    CHECK(t.rows.size() == 1 + 1000 + 1001);
    for (const auto& row : t.rows) CHECK(std::abs(row[1] + row[2] + row[3] + row[4] - 1.0) < 1e-10);
    CHECK(t.rows.back()[0] == doctest::Approx(5500.0));
}

TEST_CASE("sweep rows that fail are written as nan and reported") {
    const ExperimentConfig c = parse_config(
        "experiment = sweep-tau\nlambda = 0.01\ngamma0_A = 1e-3\ngamma0_S = 1e-3\nT_A = 2\nT_S = 0.1\n"
        "taus = 1, 1e4\nmax_cycles = 5\n");
    const auto r = compute_experiment(c);
    const auto& rows = r.outputs.at(0).table.rows;
    CHECK(std::isnan(rows[0][1]));
    CHECK_FALSE(std::isnan(rows[1][1]));
    REQUIRE(r.row_errors.size() == 1);
    CHECK(r.row_errors[0].find("NoConvergence") != std::string::npos);
}

TEST_CASE("run_experiments writes csv files and a manifest") {
    const fs::path dir = fresh_dir("fig2");
    std::vector<ExperimentConfig> configs;
    for (const auto& text : find_preset("fig2").configs) configs.push_back(parse_config(text));
    const RunReport report = run_experiments(configs, dir, "preset:fig2", 2);
    CHECK(fs::exists(dir / "sweep_temp.csv"));
    CHECK(fs::exists(dir / "ness.csv"));
    CHECK(fs::exists(dir / "manifest.json"));

    const auto rows = csv_rows(read_file(dir / "sweep_temp.csv"));
    CHECK(rows.front() == std::vector<std::string>{"beta_S", "beta_A", "ergotropy"});
    CHECK(rows.size() == 1 + 400);

    const auto ness = csv_rows(read_file(dir / "ness.csv"));
    REQUIRE(ness.size() == 2);
    CHECK(std::abs(std::stod(ness[1][0]) - 2.75) <= 0.01);

    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["tool"] == "ness-battery");
    CHECK(manifest["source"] == "preset:fig2");
    CHECK(manifest["threads"] == 2);
    REQUIRE(manifest["runs"].size() == 2);
    CHECK(manifest["runs"][0]["experiment"] == "sweep-temp");
    CHECK(manifest["runs"][0]["config"]["beta_S"] == "lin:0.25:5:20");
    CHECK(manifest["runs"][1]["outputs"][0] == "ness.csv");

    // Same inputs, same bytes.
    const std::string first = read_file(dir / "sweep_temp.csv");
    run_experiments(configs, dir, "preset:fig2", 1);
    CHECK(read_file(dir / "sweep_temp.csv") == first);
    CHECK(report.files.size() == 3);
}

TEST_CASE("error records") {
    const fs::path dir = fresh_dir("error");
    fs::create_directories(dir);
    const std::string text = write_error_record(dir, "ParseError", "line 3: unknown key 'x'");
    const auto j = nlohmann::json::parse(read_file(dir / "error.json"));
    CHECK(j["error"]["code"] == "ParseError");
    CHECK(j["error"]["message"] == "line 3: unknown key 'x'");
    CHECK(nlohmann::json::parse(text) == j);
}
