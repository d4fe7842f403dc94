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
#ifndef D2OC_IO_CSV_HPP
#define D2OC_IO_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d2oc/analysis.hpp"
#include "d2oc/metrics.hpp"

namespace d2oc::io {

/// Shortest text that parses back to the same double (std::to_chars).
std::string format_double(double value);

inline constexpr std::string_view kMetricsHeader =
    "step,agent,controller,wasserstein,e_w_norm,e0_norm,ratio,lambda,p_norm,bound_estimate";

/**
 * One row per record. ratio is empty where undefined; bound_estimate holds
 * the bound of the matching report (same agent and controller) or is empty.
 */
void write_metrics_csv(std::ostream& out, const MetricsLog& log,
                       std::span<const AgentBoundReport> reports);

/// Columns j,x,y,beta.
void write_cloud_csv(std::ostream& out, const PointList& samples, std::span<const double> beta);

/// Columns controller,agent,x,y.
void write_agents_csv(std::ostream& out, const Snapshot& snapshot);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws Error(InvalidArgument) if absent.
    std::size_t column(std::string_view name) const;
};

/// Plain comma-separated reader (no quoting), first line is the header.
CsvTable read_csv(std::istream& in);

}  // namespace d2oc::io

#endif  // D2OC_IO_CSV_HPP
