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
#include "d2oc/io/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include "d2oc/error.hpp"

namespace d2oc::io {

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_metrics_csv(std::ostream& out, const MetricsLog& log,
                       std::span<const AgentBoundReport> reports) {
    out << kMetricsHeader << '\n';
    for (const auto& r : log.records) {
        std::string bound;
        for (const auto& rep : reports) {
            if (rep.agent == r.agent && rep.controller == r.controller && rep.bound) {
                bound = format_double(*rep.bound);
            }
        }
        out << r.step << ',' << r.agent << ',' << to_string(r.controller) << ','
            << format_double(r.wasserstein) << ',' << format_double(r.e_w_norm) << ','
            << format_double(r.e0_norm) << ',' << (r.ratio ? format_double(*r.ratio) : "") << ','
            << format_double(r.lambda) << ',' << format_double(r.p_norm) << ',' << bound << '\n';
    }
}

void write_cloud_csv(std::ostream& out, const PointList& samples, std::span<const double> beta) {
    if (samples.size() != beta.size()) {
        throw Error(ErrorKind::LengthMismatch, "cloud positions and weights differ in length");
    }
    out << "j,x,y,beta\n";
    for (std::size_t j = 0; j < samples.size(); ++j) {
        out << j << ',' << format_double(samples[j].x()) << ',' << format_double(samples[j].y())
            << ',' << format_double(beta[j]) << '\n';
    }
}

void write_agents_csv(std::ostream& out, const Snapshot& snapshot) {
    out << "controller,agent,x,y\n";
    for (const auto& [controller, agents] : snapshot.agents) {
        for (std::size_t i = 0; i < agents.size(); ++i) {
            out << to_string(controller) << ',' << i << ',' << format_double(agents[i].x()) << ','
                << format_double(agents[i].y()) << '\n';
        }
    }
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "missing CSV column " + std::string(name));
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) return table;
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw Error(ErrorKind::LengthMismatch, "CSV row width differs from header");
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace d2oc::io
