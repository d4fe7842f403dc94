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
#include "d2oc/io/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "d2oc/error.hpp"
#include "d2oc/io/csv.hpp"
#include "d2oc/io/plots.hpp"
#include "json.hpp"

namespace d2oc::io {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig apply_flags(RunConfig config, const RunFlags& flags) {
    ScenarioConfig& s = config.scenario;
    if (flags.seed) s.seed = *flags.seed;
    if (flags.mode) s.mode = *flags.mode;
    if (flags.steps) s.total_steps = *flags.steps;
    if (flags.receding) s.receding = true;
    s.validate();
    return config;
}

std::vector<AgentBoundReport> bound_reports(const MetricsLog& log, double settle_fraction) {
    std::vector<AgentBoundReport> reports;
    for (std::size_t agent = 0;; ++agent) {
        const auto series = log.series(agent, Controller::Feedforward);
        if (series.empty()) break;
        if (series.size() < 2) continue;
        AgentBoundReport rep = assess_bound(series, settle_fraction);
        rep.agent = agent;
        reports.push_back(rep);
    }
    return reports;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

json bound_json(const MetricsLog& log, std::span<const AgentBoundReport> reports,
                double settle_fraction) {
    json agents = json::array();
    const Eigen::MatrixXd* P = log.projection(Controller::Feedforward);
    for (const auto& rep : reports) {
        double worst_residual = 0.0;
        if (P != nullptr) {
            for (const auto& r : recursion_residuals(log.series(rep.agent, rep.controller), *P)) {
                worst_residual = std::max(worst_residual, r.residual);
            }
        }
        agents.push_back({
            {"agent", rep.agent},
            {"controller", to_string(rep.controller)},
            {"lambda", rep.inputs.lambda},
            {"p_norm", rep.inputs.p_norm},
            {"zeta", rep.inputs.zeta},
            {"delta", rep.inputs.delta},
            {"c_bar", rep.inputs.c_bar},
            {"bound", optional_json(rep.bound)},
            {"pass", rep.bound.has_value() && rep.check.pass},
            {"entry_step", optional_json(rep.check.entry_step)},
            {"settle_step", rep.check.settle_step},
            {"violations", rep.check.violations},
            {"first_violation", optional_json(rep.check.first_violation)},
            {"max_excess", rep.check.max_excess},
            {"max_recursion_residual", worst_residual},
        });
    }
    return {{"settle_fraction", settle_fraction},
            {"steps_run", log.steps_run},
            {"completed_at", optional_json(log.completed_at)},
            {"agents", agents}};
}

std::string step_tag(std::int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "step_%06lld_", static_cast<long long>(step));
    return buf;
}

}  // namespace

int execute_scenario(const RunFlags& flags, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config;
    try {
        config = apply_flags(load_config(flags.config_path), flags);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunManifest manifest;
    manifest.config_path = flags.config_path;
    manifest.seed = config.scenario.seed;
    manifest.out_dir = flags.out_dir;
    try {
        const MetricsLog log = run_simulation(config.scenario);
        if (log.completed_at) {
            err << "samples exhausted at step " << *log.completed_at << "; run ended early\n";
        }
        const auto reports = bound_reports(log, config.settle_fraction);

        fs::create_directories(flags.out_dir);
        {
            std::ostringstream csv;
            write_metrics_csv(csv, log, reports);
            write_text(flags.out_dir / "metrics.csv", csv.str());
            manifest.files.emplace_back("metrics.csv");
        }
        if (!log.snapshots.empty()) fs::create_directories(flags.out_dir / "snapshots");
        for (const auto& snap : log.snapshots) {
            const std::string tag = step_tag(snap.step);
            std::ostringstream agents;
            write_agents_csv(agents, snap);
            write_text(flags.out_dir / "snapshots" / (tag + "agents.csv"), agents.str());
            manifest.files.push_back(fs::path("snapshots") / (tag + "agents.csv"));
            for (const auto& [controller, beta] : snap.beta) {
                const std::string name = tag + "cloud_" + std::string(to_string(controller)) + ".csv";
                std::ostringstream cloud;
                write_cloud_csv(cloud, snap.samples, beta);
                write_text(flags.out_dir / "snapshots" / name, cloud.str());
                manifest.files.push_back(fs::path("snapshots") / name);
            }
        }
        write_text(flags.out_dir / "bound_report.json",
                   bound_json(log, reports, config.settle_fraction).dump(2) + "\n");
        manifest.files.emplace_back("bound_report.json");

        if (flags.emit_plots) {
            for (auto& f : emit_plots(flags.out_dir)) manifest.files.push_back(std::move(f));
        }

        int status = kExitOk;
        if (flags.require_bound) {
            if (reports.empty()) {
                err << "--require-bound: no feedforward agent to check\n";
                status = kExitRuntime;
            }
            for (const auto& rep : reports) {
                if (!rep.bound) {
                    err << "agent " << rep.agent << ": no contraction (lambda = " << rep.inputs.lambda
                        << "), bound undefined\n";
                    status = kExitRuntime;
                } else if (!rep.check.pass) {
                    err << "agent " << rep.agent << ": " << rep.check.violations
                        << " post-settle violations, first at step " << *rep.check.first_violation
                        << '\n';
                    status = kExitRuntime;
                }
            }
        }

        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json files = json::array();
        for (const auto& f : manifest.files) files.push_back(f.generic_string());
        const json doc = {{"config", manifest.config_path.generic_string()},
                          {"seed", manifest.seed},
                          {"out_dir", manifest.out_dir.generic_string()},
                          {"files", files},
                          {"wall_seconds", manifest.wall_seconds}};
        // Rename makes the manifest appear complete or not at all.
        const fs::path tmp = flags.out_dir / "manifest.json.tmp";
        write_text(tmp, doc.dump(2) + "\n");
        fs::rename(tmp, flags.out_dir / "manifest.json");
        return status;
    } catch (const Error& e) {
        err << "runtime error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace d2oc::io
