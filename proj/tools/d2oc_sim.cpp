/*
 Copyright 2026 The D2OC Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
// Scenario runner: d2oc_sim --config configs/reference_scenario.json --out out/
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "d2oc/io/scenario.hpp"

int main(int argc, char** argv) {
    d2oc::io::RunFlags flags;
    CLI::App app{"Density tracking swarm simulator, nominal and feedforward controllers"};

    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> steps;
    std::string controller;
    app.add_option("--config", flags.config_path, "Scenario JSON")->required();
    app.add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--controller", controller, "nominal, ff or both")
        ->check(CLI::IsMember({"nominal", "ff", "both"}));
    app.add_option("--steps", steps, "Override the number of steps")->check(CLI::NonNegativeNumber);
    app.add_flag("--emit-plots", flags.emit_plots, "Write SVG plots from the CSVs");
    app.add_flag("--require-bound", flags.require_bound,
                 "Exit 2 unless every feedforward agent stays within its bound");
    app.add_flag("--receding", flags.receding, "Apply only the first planned input each step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : d2oc::io::kExitConfig;
    }
    flags.seed = seed;
    flags.steps = steps;
    if (!controller.empty()) flags.mode = d2oc::io::parse_mode(controller);

    return d2oc::io::execute_scenario(flags, std::cerr);
}
