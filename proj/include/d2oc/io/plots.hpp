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
#ifndef D2OC_IO_PLOTS_HPP
#define D2OC_IO_PLOTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace d2oc::io {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;  // scatter instead of polyline
    double marker_radius = 2.0;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<std::pair<std::string, double>> hlines;  // dashed, labelled
    std::optional<std::pair<double, double>> x_range;
    std::optional<std::pair<double, double>> y_range;
};

/// Static SVG of panels laid out on a grid with `columns` columns.
std::string render_svg(const std::vector<Panel>& panels, int columns);

/**
 * @brief Plots derived from the CSVs in an output directory.
 *
 * Reads metrics.csv and snapshots/ and writes plots/ratio.svg,
 * plots/wasserstein.svg and, when snapshots exist, plots/snapshots.svg.
 * Returns the written paths relative to out_dir.
 */
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir);

}  // namespace d2oc::io

#endif  // D2OC_IO_PLOTS_HPP
