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

// ness-battery: run the battery experiments and emit CSV datasets.
//
//   ness-battery run --config <path> --out <dir>
//   ness-battery run --preset fig2|fig3|fig4a|fig4bc --out <dir>
//   ness-battery presets list
//   ness-battery presets show <name>

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ness_battery/config.hpp"
#include "ness_battery/error.hpp"
#include "ness_battery/experiments.hpp"

namespace nb = ness_battery;

namespace {

int run(const std::string& config_path, const std::string& preset, const std::string& out_dir) {
    try {
        std::vector<nb::ExperimentConfig> configs;
        std::string label;
        if (!preset.empty()) {
            const nb::Preset& p = nb::find_preset(preset);
            for (const auto& text : p.configs) configs.push_back(nb::parse_config(text));
            label = "preset:" + p.name;
        } else {
            configs.push_back(nb::load_config(config_path));
            label = config_path;
        }
        const nb::RunReport report = nb::run_experiments(configs, out_dir, label, nb::threads_from_environment());
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& f : report.files) std::cout << f.string() << '\n';
        return 0;
    } catch (const nb::Error& e) {
        std::cerr << nb::write_error_record(out_dir, std::string(nb::to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        std::cerr << nb::write_error_record(out_dir, "InternalError", e.what());
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit quantum battery charged by a non-equilibrium heat current", "ness-battery"};
    app.set_version_flag("--version", std::string(nb::tool_version()));
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file or a preset");
    std::string config_path;
    std::string preset;
    std::string out_dir;
    auto* config_opt = run_cmd->add_option("--config", config_path, "key = value experiment file")->check(CLI::ExistingFile);
    auto* preset_opt = run_cmd->add_option("--preset", preset, "fig2, fig3, fig4a or fig4bc");
    config_opt->excludes(preset_opt);
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* presets_cmd = app.add_subcommand("presets", "List or print the shipped presets");
    presets_cmd->require_subcommand(1);
    auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
    auto* show_cmd = presets_cmd->add_subcommand("show", "Print the config text of a preset");
    std::string show_name;
    show_cmd->add_option("name", show_name)->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        if (config_path.empty() && preset.empty()) {
            std::cerr << "run: one of --config or --preset is required\n";
            return 1;
        }
        return run(config_path, preset, out_dir);
    }
    if (list_cmd->parsed()) {
        for (const auto& p : nb::presets()) std::cout << p.name << "\t" << p.description << '\n';
        return 0;
    }
    if (show_cmd->parsed()) {
        try {
            const auto& p = nb::find_preset(show_name);
            for (std::size_t i = 0; i < p.configs.size(); ++i) {
                if (i) std::cout << "---\n";
                std::cout << p.configs[i];
            }
            return 0;
        } catch (const nb::Error& e) {
            std::cerr << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}
