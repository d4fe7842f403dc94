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
#ifndef D2OC_IO_SCENARIO_HPP
#define D2OC_IO_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "d2oc/analysis.hpp"
#include "d2oc/io/config.hpp"

namespace d2oc::io {

struct RunFlags {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<RunMode> mode;
    std::optional<std::int64_t> steps;
    bool emit_plots = false;
    bool require_bound = false;
    bool receding = false;
};

struct RunManifest {
    std::filesystem::path config_path;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    std::vector<std::filesystem::path> files;  // relative to out_dir
    double wall_seconds = 0.0;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

/// Flag overrides applied on top of a parsed config.
RunConfig apply_flags(RunConfig config, const RunFlags& flags);

/// Bound reports of every feedforward agent with at least two records.
std::vector<AgentBoundReport> bound_reports(const MetricsLog& log, double settle_fraction);

/**
 * @brief Run one scenario and write its artifacts under flags.out_dir.
 *
 * Writes metrics.csv, snapshots/, bound_report.json, plots/ when asked, and
 * manifest.json last. Diagnostics go to `err`. Returns an ExitCode.
 */
int execute_scenario(const RunFlags& flags, std::ostream& err);

}  // namespace d2oc::io

#endif  // D2OC_IO_SCENARIO_HPP
