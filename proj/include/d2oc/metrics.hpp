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
#ifndef D2OC_METRICS_HPP
#define D2OC_METRICS_HPP

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "d2oc/geometry.hpp"

namespace d2oc {

enum class Controller { Nominal, Feedforward };

inline std::string_view to_string(Controller c) {
    return c == Controller::Nominal ? "nominal" : "ff";
}

/// Everything recorded for one agent at one step.
struct StepRecord {
    std::int64_t step = 0;
    std::size_t agent = 0;
    Controller controller = Controller::Nominal;

    double wasserstein = 0.0;
    double e_w_norm = 0.0;
    double e0_norm = 0.0;
    std::optional<double> ratio;
    double lambda = 0.0;
    double p_norm = 0.0;

    Point position = Point::Zero();
    Point qbar = Point::Zero();
    Point drift = Point::Zero();   // predicted one-step barycenter drift
    double variance = 0.0;         // local weighted variance C(k)
    std::vector<double> omega_blocks;  // sqrt(sum_j pi_j(k+h)), h = 0..H-1
    bool reselected = false;       // assignment chosen at this step
    Eigen::VectorXd e_w;           // stacked weighted tracking error
};

struct Snapshot {
    std::int64_t step = 0;
    PointList samples;
    // Per controller population: elementwise minimum of its agents' maps.
    std::vector<std::pair<Controller, std::vector<double>>> beta;
    std::vector<std::pair<Controller, PointList>> agents;
};

struct MetricsLog {
    std::vector<StepRecord> records;
    std::vector<Snapshot> snapshots;
    /// Projection P of each population's QP, taken at its first step.
    std::vector<std::pair<Controller, Eigen::MatrixXd>> projections;
    std::int64_t steps_run = 0;
    std::optional<std::int64_t> completed_at;  // NoLiveSamples reached

    /// Records of one agent under one controller, in step order.
    std::vector<StepRecord> series(std::size_t agent, Controller controller) const {
        std::vector<StepRecord> out;
        for (const auto& r : records) {
            if (r.agent == agent && r.controller == controller) out.push_back(r);
        }
        return out;
    }

    const Eigen::MatrixXd* projection(Controller controller) const {
        for (const auto& [c, P] : projections) {
            if (c == controller) return &P;
        }
        return nullptr;
    }
};

}  // namespace d2oc

#endif  // D2OC_METRICS_HPP
