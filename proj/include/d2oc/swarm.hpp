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
#ifndef D2OC_SWARM_HPP
#define D2OC_SWARM_HPP

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "d2oc/control.hpp"
#include "d2oc/dynamics.hpp"
#include "d2oc/metrics.hpp"
#include "d2oc/reference.hpp"
#include "d2oc/transport.hpp"

namespace d2oc {

enum class RunMode { Nominal, Feedforward, Both };

/// Waypoint drift at 0.3 m/s around the square (75,25) (75,75) (25,75) (25,25).
VelocityField default_plume_field();

struct PlumeConfig {
    std::size_t samples = 200;
    Point mean{25.0, 25.0};
    double sigma = 4.0;
    VelocityField field = default_plume_field();
};

/// Full description of one run; defaults reproduce the bundled reference scenario.
struct ScenarioConfig {
    std::size_t n_agents = 3;
    Box domain;
    PlumeConfig plume;

    // Agent plant (linearized quadcopter).
    double dt = 1.0;
    double gravity = 9.81;
    double tau = 0.6;

    int horizon = 15;
    double r_scale = 1e-6;  // R = r_scale * I
    bool receding = false;  // false: execute all H planned inputs before re-planning

    double comm_range = 25.0;
    std::int64_t total_steps = 1000;

    double gamma = 0.01;
    double sigma_c = 5.0;

    std::size_t k_nearest = 10;
    double radius = 15.0;
    double beta_min = 1e-4;

    std::uint64_t seed = 7;
    RunMode mode = RunMode::Both;

    std::int64_t snapshot_every = 0;  // 0 disables snapshots
    bool parallel = true;             // OpenMP over agents and samples

    /// Throws Error(Config) naming the first invalid field.
    void validate() const;
};

struct Agent {
    std::size_t id = 0;
    std::shared_ptr<const LtiModel> model;
    Eigen::VectorXd x;
    std::vector<double> weight_map;

    // Committed plan and the assignment it was computed for.
    Eigen::VectorXd plan;
    int plan_cursor = 0;
    LocalAssignment assignment;

    Point position() const;
};

struct Population {
    Controller controller = Controller::Nominal;
    std::vector<Agent> agents;
};

struct World {
    std::int64_t step = 0;
    SampleCloud cloud;
    FlowState flow;
    std::vector<Population> populations;
};

/// beta_j <- beta_j (1 − gamma exp(−|y − q_j|^2 / (2 sigma_c^2))), floored at 0.
std::vector<double> update_weights(std::vector<double> weight_map, const Point& y,
                                   std::span<const Point> positions, double gamma, double sigma_c);

/// Elementwise minimum both agents adopt. LengthMismatch on unequal maps.
std::vector<double> consensus_merge(std::span<const double> map_a, std::span<const double> map_b);

/// Pairwise merges between agents within comm_range, swept until no map
/// changes (at most n − 1 sweeps).
void merge_in_range(Population& population, double comm_range);

/// Models and constants shared by every step of a run.
struct SimulationContext {
    ScenarioConfig config;
    std::shared_ptr<const LtiModel> model;
    LiftedSystem lifted;
    Eigen::MatrixXd R;

    explicit SimulationContext(ScenarioConfig cfg);
};

World initial_world(const SimulationContext& ctx);

struct StepResult {
    std::vector<StepRecord> records;
    bool exhausted = false;  // some agent found no live sample; world unchanged
};

/**
 * @brief One cycle: advance samples, per-agent control, consensus.
 *
 * Agents read an immutable snapshot of the cloud, so the per-agent stage runs
 * in parallel; records come back in (population, agent) order regardless of
 * the schedule.
 */
StepResult simulate_step(World& world, const SimulationContext& ctx,
                         std::vector<std::pair<Controller, Eigen::MatrixXd>>* projections = nullptr);

MetricsLog run_simulation(const ScenarioConfig& config);

}  // namespace d2oc

#endif  // D2OC_SWARM_HPP
