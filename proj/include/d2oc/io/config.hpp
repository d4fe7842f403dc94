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
#ifndef D2OC_IO_CONFIG_HPP
#define D2OC_IO_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "d2oc/swarm.hpp"

namespace d2oc::io {

/// Scenario plus the post-run analysis settings read from the same document.
struct RunConfig {
    ScenarioConfig scenario;
    double settle_fraction = 0.2;
};

/**
 * @brief Parse a scenario document.
 *
 * Top-level keys: agents, plume, controller, horizon, weights, output and an
 * optional seed. Every key is optional and falls back to the defaults of
 * ScenarioConfig; unknown keys are rejected so typos do not pass silently.
 * Throws Error(Config) on malformed JSON, wrong types or invalid values.
 */
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Full document for a config, every key spelled out. parse_config inverts it.
std::string dump_config(const RunConfig& config);

RunMode parse_mode(std::string_view name);
std::string_view to_string(RunMode mode);

}  // namespace d2oc::io

#endif  // D2OC_IO_CONFIG_HPP
