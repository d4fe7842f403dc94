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
#include "d2oc/io/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "d2oc/error.hpp"
#include "d2oc/io/csv.hpp"

namespace d2oc::io {

namespace {

constexpr double kPanelW = 520.0;
constexpr double kPanelH = 340.0;
constexpr double kMarginL = 64.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 32.0;
constexpr double kMarginB = 48.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

// Tick spacing 1, 2 or 5 times a power of ten, about five ticks per axis.
double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::pair<double, double> data_range(const Panel& p, bool want_x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : p.series) {
        for (double v : want_x ? s.x : s.y) {
            if (!std::isfinite(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!want_x) {
        for (const auto& [label, v] : p.hlines) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi};
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

void render_panel(std::ostringstream& svg, const Panel& p, double ox, double oy) {
    const auto [x0, x1] = p.x_range.value_or(data_range(p, true));
    const auto [y0, y1] = p.y_range.value_or(data_range(p, false));
    const double pw = kPanelW - kMarginL - kMarginR;
    const double ph = kPanelH - kMarginT - kMarginB;
    auto sx = [&](double x) { return ox + kMarginL + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return oy + kMarginT + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect x=\"" << ox + kMarginL << "\" y=\"" << oy + kMarginT << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << ox + kPanelW / 2 << "\" y=\"" << oy + 20
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(p.title) << "</text>\n";
    svg << "<text x=\"" << ox + kMarginL + pw / 2 << "\" y=\"" << oy + kPanelH - 10
        << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
    svg << "<text transform=\"translate(" << ox + 14 << "," << oy + kMarginT + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

    const double xs = nice_step(x1 - x0);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        svg << "<line x1=\"" << sx(t) << "\" y1=\"" << oy + kMarginT + ph << "\" x2=\"" << sx(t)
            << "\" y2=\"" << oy + kMarginT + ph + 4 << "\" stroke=\"#444\"/>"
            << "<text x=\"" << sx(t) << "\" y=\"" << oy + kMarginT + ph + 16
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    const double ys = nice_step(y1 - y0);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        svg << "<line x1=\"" << ox + kMarginL - 4 << "\" y1=\"" << sy(t) << "\" x2=\""
            << ox + kMarginL << "\" y2=\"" << sy(t) << "\" stroke=\"#444\"/>"
            << "<text x=\"" << ox + kMarginL - 6 << "\" y=\"" << sy(t) + 4
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }

    for (const auto& s : p.series) {
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                svg << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\""
                    << s.marker_radius << "\" fill=\"" << s.color << "\" fill-opacity=\"0.7\"/>\n";
            }
            continue;
        }
        svg << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << s.color << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.y[i])) svg << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        }
        svg << "\"/>\n";
    }
    for (const auto& [label, v] : p.hlines) {
        svg << "<line x1=\"" << ox + kMarginL << "\" y1=\"" << sy(v) << "\" x2=\"" << ox + kMarginL + pw
            << "\" y2=\"" << sy(v) << "\" stroke=\"#000\" stroke-dasharray=\"6,4\"/>"
            << "<text x=\"" << ox + kMarginL + pw - 4 << "\" y=\"" << sy(v) - 4
            << "\" text-anchor=\"end\">" << escape(label) << "</text>\n";
    }

    double ly = oy + kMarginT + 14;
    for (const auto& s : p.series) {
        if (s.label.empty()) continue;
        svg << "<rect x=\"" << ox + kMarginL + 8 << "\" y=\"" << ly - 8
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>"
            << "<text x=\"" << ox + kMarginL + 22 << "\" y=\"" << ly << "\">" << escape(s.label)
            << "</text>\n";
        ly += 14;
    }
    svg << "</g>\n";
}

CsvTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
    return read_csv(in);
}

double cell(const std::string& text) {
    return text.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(text);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, int columns) {
    columns = std::max(1, columns);
    const int rows = static_cast<int>((panels.size() + columns - 1) / columns);
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelW * columns
        << "\" height=\"" << kPanelH * std::max(rows, 1) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const double ox = kPanelW * static_cast<double>(i % columns);
        const double oy = kPanelH * static_cast<double>(i / columns);
        render_panel(svg, panels[i], ox, oy);
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    const CsvTable metrics = read_table(out_dir / "metrics.csv");
    const auto c_step = metrics.column("step");
    const auto c_agent = metrics.column("agent");
    const auto c_ctrl = metrics.column("controller");
    const auto c_w = metrics.column("wasserstein");
    const auto c_ratio = metrics.column("ratio");
    const auto c_bound = metrics.column("bound_estimate");

    // (controller, agent) -> series
    std::map<std::pair<std::string, std::string>, std::array<Series, 2>> by_agent;
    std::map<std::string, double> bounds;
    for (const auto& row : metrics.rows) {
        auto& [ratio, w] = by_agent[{row[c_ctrl], row[c_agent]}];
        const double k = cell(row[c_step]);
        ratio.x.push_back(k);
        ratio.y.push_back(cell(row[c_ratio]));
        w.x.push_back(k);
        w.y.push_back(cell(row[c_w]));
        if (!row[c_bound].empty()) bounds[row[c_ctrl] + " agent " + row[c_agent]] = cell(row[c_bound]);
    }

    std::vector<Panel> ratio_panels;
    std::vector<Panel> w_panels;
    std::map<std::string, std::size_t> panel_of;
    std::size_t color = 0;
    for (auto& [key, pair] : by_agent) {
        const auto& [controller, agent] = key;
        if (!panel_of.count(controller)) {
            panel_of[controller] = ratio_panels.size();
            ratio_panels.push_back({"||e_w|| / ||E0||, " + controller, "step", "ratio", {}, {{"0.5", 0.5}}, {}, {}});
            w_panels.push_back({"local W, " + controller, "step", "W [m]", {}, {}, {}, {}});
            color = 0;
        }
        const std::size_t p = panel_of[controller];
        for (auto& s : pair) {
            s.label = "agent " + agent;
            s.color = kPalette[color % kPalette.size()];
        }
        ++color;
        ratio_panels[p].series.push_back(std::move(pair[0]));
        w_panels[p].series.push_back(std::move(pair[1]));
        if (auto b = bounds.find(controller + " agent " + agent); b != bounds.end()) {
            w_panels[p].hlines.emplace_back("bound agent " + agent, b->second);
        }
    }

    fs::create_directories(out_dir / "plots");
    std::vector<fs::path> written;
    write_file(out_dir / "plots" / "ratio.svg", render_svg(ratio_panels, 1));
    written.emplace_back("plots/ratio.svg");
    write_file(out_dir / "plots" / "wasserstein.svg", render_svg(w_panels, 1));
    written.emplace_back("plots/wasserstein.svg");

    // Snapshot grid: one row per controller, one column per snapshot step.
    const fs::path snap_dir = out_dir / "snapshots";
    if (!fs::is_directory(snap_dir)) return written;
    std::vector<fs::path> agent_files;
    for (const auto& entry : fs::directory_iterator(snap_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 11 && name.ends_with("_agents.csv")) agent_files.push_back(entry.path());
    }
    std::sort(agent_files.begin(), agent_files.end());
    if (agent_files.empty()) return written;
    constexpr std::size_t kMaxColumns = 5;
    std::vector<fs::path> picked;
    for (std::size_t i = 0; i < kMaxColumns && i < agent_files.size(); ++i) {
        const std::size_t idx = agent_files.size() <= kMaxColumns
                                    ? i
                                    : i * (agent_files.size() - 1) / (kMaxColumns - 1);
        picked.push_back(agent_files[idx]);
    }

    std::map<std::string, std::vector<Panel>> rows;
    for (const auto& file : picked) {
        const std::string stem = file.filename().string();
        const std::string prefix = stem.substr(0, stem.size() - std::string("agents.csv").size());
        const CsvTable agents = read_table(file);
        std::map<std::string, Series> agent_series;
        for (const auto& row : agents.rows) {
            auto& s = agent_series[row[agents.column("controller")]];
            s.x.push_back(cell(row[agents.column("x")]));
            s.y.push_back(cell(row[agents.column("y")]));
        }
        for (auto& [controller, s] : agent_series) {
            Panel panel;
            panel.title = controller + ", " + prefix.substr(0, prefix.size() - 1);
            panel.x_label = "x [m]";
            panel.y_label = "y [m]";
            const fs::path cloud_file = snap_dir / (prefix + "cloud_" + controller + ".csv");
            if (fs::exists(cloud_file)) {
                const CsvTable cloud = read_table(cloud_file);
                Series live{"samples", {}, {}, "#999999", true, 1.5};
                for (const auto& row : cloud.rows) {
                    if (cell(row[cloud.column("beta")]) <= 0.0) continue;
                    live.x.push_back(cell(row[cloud.column("x")]));
                    live.y.push_back(cell(row[cloud.column("y")]));
                }
                panel.series.push_back(std::move(live));
            }
            s.label = "agents";
            s.color = "#d62728";
            s.markers = true;
            s.marker_radius = 4.0;
            panel.series.push_back(std::move(s));
            rows[controller].push_back(std::move(panel));
        }
    }
    std::vector<Panel> grid;
    for (auto& [controller, panels] : rows) {
        for (auto& p : panels) grid.push_back(std::move(p));
    }
    write_file(out_dir / "plots" / "snapshots.svg",
               render_svg(grid, static_cast<int>(picked.size())));
    written.emplace_back("plots/snapshots.svg");
    return written;
}

}  // namespace d2oc::io
