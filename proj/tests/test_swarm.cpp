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
#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "d2oc/error.hpp"
#include "d2oc/rng.hpp"
#include "d2oc/swarm.hpp"

namespace d2oc {
namespace {

TEST(UpdateWeights, HalvesAtSample) {
    const PointList q{Point(2.0, 3.0), Point(90.0, 90.0)};
    const auto out = update_weights({0.5, 0.5}, Point(2.0, 3.0), q, 0.5, 5.0);
    EXPECT_EQ(out[0], 0.25);
}

TEST(UpdateWeights, FarSampleUnchanged) {
    const PointList q{Point(90.0, 90.0)};
    const auto out = update_weights({0.5}, Point(0.0, 0.0), q, 0.9, 5.0);
    EXPECT_NEAR(out[0], 0.5, 1e-12);
}

TEST(UpdateWeights, ZeroGammaIsIdentity) {
    const PointList q{Point(1.0, 1.0), Point(2.0, 2.0)};
    const std::vector<double> in{0.3, 0.7};
    EXPECT_EQ(update_weights(in, Point(1.0, 1.0), q, 0.0, 5.0), in);
}

TEST(UpdateWeights, LengthMismatch) {
    const PointList q{Point(1.0, 1.0)};
    EXPECT_THROW(update_weights({0.1, 0.2}, Point::Zero(), q, 0.1, 1.0), Error);
}

TEST(ConsensusMerge, ElementwiseMin) {
    const std::vector<double> a{0.2, 0.5};
    const std::vector<double> b{0.3, 0.4};
    EXPECT_EQ(consensus_merge(a, b), (std::vector<double>{0.2, 0.4}));
}

TEST(ConsensusMerge, Idempotent) {
    const std::vector<double> a{0.2, 0.5, 0.0};
    EXPECT_EQ(consensus_merge(a, a), a);
}

TEST(ConsensusMerge, LengthMismatch) {
    const std::vector<double> a{0.2};
    const std::vector<double> b{0.2, 0.1};
    try {
        consensus_merge(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
    }
}

TEST(ConsensusMerge, SafetyOnRandomMaps) {
    Rng rng(4, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(10), b(10);
        for (auto& v : a) v = rng.uniform01();
        for (auto& v : b) v = rng.uniform01();
        const auto m = consensus_merge(a, b);
        for (std::size_t j = 0; j < m.size(); ++j) {
            EXPECT_LE(m[j], a[j]);
            EXPECT_LE(m[j], b[j]);
            EXPECT_TRUE(m[j] == a[j] || m[j] == b[j]);
        }
    }
}

TEST(ConsensusMerge, PairwiseOrderDoesNotMatter) {
    const std::array<std::vector<double>, 3> start{std::vector<double>{0.1, 0.9, 0.5},
                                                   std::vector<double>{0.4, 0.2, 0.6},
                                                   std::vector<double>{0.3, 0.7, 0.05}};
    std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::array<std::vector<double>, 3>> results;
    do {
        auto maps = start;
        for (const auto& [i, j] : pairs) {
            const auto m = consensus_merge(maps[i], maps[j]);
            maps[i] = m;
            maps[j] = m;
        }
        results.push_back(maps);
    } while (std::next_permutation(pairs.begin(), pairs.end()));
    ASSERT_EQ(results.size(), 6u);
    const std::vector<double> fixpoint{0.1, 0.2, 0.05};
    for (const auto& maps : results) {
        for (const auto& m : maps) EXPECT_EQ(m, fixpoint);
    }
}

Agent agent_at(std::size_t id, const Point& p, std::vector<double> map,
               const std::shared_ptr<const LtiModel>& model) {
    Agent a;
    a.id = id;
    a.model = model;
    a.x = Eigen::VectorXd::Zero(8);
    a.x(0) = p.x();
    a.x(4) = p.y();
    a.weight_map = std::move(map);
    return a;
}

TEST(MergeInRange, ChainReachesFixpoint) {
    const auto model = std::make_shared<const LtiModel>(make_quadcopter_model(1.0, 9.81, 0.6));
    Population pop;
    pop.agents.push_back(agent_at(0, Point(0.0, 0.0), {0.1, 0.9}, model));
    pop.agents.push_back(agent_at(1, Point(20.0, 0.0), {0.5, 0.5}, model));
    pop.agents.push_back(agent_at(2, Point(40.0, 0.0), {0.8, 0.05}, model));
    merge_in_range(pop, 25.0);  // 0 and 2 only talk through 1
    for (const auto& a : pop.agents) EXPECT_EQ(a.weight_map, (std::vector<double>{0.1, 0.05}));
}

TEST(MergeInRange, OutOfRangeUntouched) {
    const auto model = std::make_shared<const LtiModel>(make_quadcopter_model(1.0, 9.81, 0.6));
    Population pop;
    pop.agents.push_back(agent_at(0, Point(0.0, 0.0), {0.1, 0.9}, model));
    pop.agents.push_back(agent_at(1, Point(60.0, 0.0), {0.5, 0.5}, model));
    merge_in_range(pop, 25.0);
    EXPECT_EQ(pop.agents[0].weight_map, (std::vector<double>{0.1, 0.9}));
    EXPECT_EQ(pop.agents[1].weight_map, (std::vector<double>{0.5, 0.5}));
}

ScenarioConfig small_config() {
    ScenarioConfig cfg;
    cfg.total_steps = 120;
    return cfg;
}

TEST(ScenarioConfig, Validation) {
    ScenarioConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.n_agents = 0;
    try {
        cfg.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
    cfg = ScenarioConfig{};
    cfg.sigma_c = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = ScenarioConfig{};
    cfg.horizon = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = ScenarioConfig{};
    cfg.plume.field.waypoints.clear();
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(InitialWorld, AgentsAtRestInsideDomain) {
    ScenarioConfig cfg;
    const SimulationContext ctx(cfg);
    const World w = initial_world(ctx);
    ASSERT_EQ(w.populations.size(), 2u);
    for (const auto& pop : w.populations) {
        ASSERT_EQ(pop.agents.size(), cfg.n_agents);
        for (std::size_t i = 0; i < pop.agents.size(); ++i) {
            const Agent& a = pop.agents[i];
            EXPECT_TRUE(cfg.domain.contains(a.position()));
            EXPECT_EQ(a.position(), w.populations[0].agents[i].position());
            // zero velocity and attitude: the model leaves it in place
            EXPECT_LE((a.model->step(a.x, Eigen::VectorXd::Zero(2)) - a.x).norm(), 1e-12);
            for (double b : a.weight_map) EXPECT_EQ(b, 1.0 / static_cast<double>(cfg.plume.samples));
        }
    }
    EXPECT_EQ(w.cloud.size(), cfg.plume.samples);
}

TEST(SimulateStep, StationarySampleUnderAgent) {
    ScenarioConfig cfg;
    cfg.n_agents = 1;
    cfg.plume.samples = 1;
    cfg.plume.sigma = 0.0;
    cfg.plume.field = VelocityField{};  // zero constant field
    cfg.mode = RunMode::Feedforward;
    cfg.gamma = 0.3;
    const SimulationContext ctx(cfg);
    World w = initial_world(ctx);
    w.cloud.positions[0] = w.populations[0].agents[0].position();
    w.flow = observe_cloud(cfg.plume.field, w.flow, w.cloud);
    double beta = w.populations[0].agents[0].weight_map[0];
    for (int k = 0; k < 5; ++k) {
        const Point before = w.populations[0].agents[0].position();
        const auto res = simulate_step(w, ctx);
        ASSERT_FALSE(res.exhausted);
        ASSERT_EQ(res.records.size(), 1u);
        EXPECT_NEAR(res.records[0].wasserstein, 0.0, 1e-12);
        EXPECT_FALSE(res.records[0].ratio.has_value());
        EXPECT_LE(w.populations[0].agents[0].plan.cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LE((w.populations[0].agents[0].position() - before).norm(), 1e-9);
        const double next = w.populations[0].agents[0].weight_map[0];
        EXPECT_NEAR(next, beta * (1.0 - cfg.gamma), 1e-15);
        beta = next;
    }
}

TEST(SimulateStep, AgentsInRangeShareMaps) {
    ScenarioConfig cfg;
    cfg.n_agents = 2;
    cfg.mode = RunMode::Nominal;
    const SimulationContext ctx(cfg);
    World w = initial_world(ctx);
    auto& agents = w.populations[0].agents;
    agents[1].x = agents[0].x;
    agents[1].x(0) += 10.0;  // 10 m apart, inside 25 m
    agents[0].weight_map[0] = 0.0;
    simulate_step(w, ctx);
    EXPECT_EQ(agents[0].weight_map, agents[1].weight_map);
    EXPECT_EQ(agents[1].weight_map[0], 0.0);
}

TEST(SimulateStep, ExhaustionLeavesWorldUnchanged) {
    ScenarioConfig cfg;
    cfg.n_agents = 1;
    cfg.plume.samples = 3;
    cfg.plume.sigma = 0.5;
    cfg.gamma = 1.0;
    cfg.sigma_c = 1e6;
    cfg.mode = RunMode::Feedforward;
    const SimulationContext ctx(cfg);
    World w = initial_world(ctx);
    ASSERT_FALSE(simulate_step(w, ctx).exhausted);  // coverage wipes every weight
    const World before = w;
    const auto res = simulate_step(w, ctx);
    EXPECT_TRUE(res.exhausted);
    EXPECT_TRUE(res.records.empty());
    EXPECT_EQ(w.step, before.step);
    EXPECT_EQ(w.cloud.positions, before.cloud.positions);
    EXPECT_EQ(w.populations[0].agents[0].x, before.populations[0].agents[0].x);
}

TEST(RunSimulation, ExhaustionEndsRun) {
    ScenarioConfig cfg;
    cfg.n_agents = 1;
    cfg.plume.samples = 3;
    cfg.gamma = 1.0;
    cfg.sigma_c = 1e6;
    cfg.total_steps = 10;
    const MetricsLog log = run_simulation(cfg);
    EXPECT_EQ(log.completed_at, 1);
    EXPECT_EQ(log.steps_run, 1);
}

TEST(RunSimulation, ZeroSteps) {
    ScenarioConfig cfg;
    cfg.total_steps = 0;
    const MetricsLog log = run_simulation(cfg);
    EXPECT_TRUE(log.records.empty());
    EXPECT_EQ(log.steps_run, 0);
    EXPECT_FALSE(log.completed_at.has_value());
}

TEST(RunSimulation, BothModeMatchesSingleModes) {
    ScenarioConfig cfg = small_config();
    const MetricsLog both = run_simulation(cfg);
    cfg.mode = RunMode::Feedforward;
    const MetricsLog ff = run_simulation(cfg);
    cfg.mode = RunMode::Nominal;
    const MetricsLog nom = run_simulation(cfg);
    for (std::size_t i = 0; i < cfg.n_agents; ++i) {
        const auto a = both.series(i, Controller::Feedforward);
        const auto b = ff.series(i, Controller::Feedforward);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].wasserstein, b[k].wasserstein);
            EXPECT_EQ(a[k].position, b[k].position);
        }
        const auto c = both.series(i, Controller::Nominal);
        const auto d = nom.series(i, Controller::Nominal);
        ASSERT_EQ(c.size(), d.size());
        for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(c[k].wasserstein, d[k].wasserstein);
    }
}

TEST(RunSimulation, SharedCloudAcrossControllers) {
    ScenarioConfig cfg = small_config();
    cfg.snapshot_every = 10;
    cfg.mode = RunMode::Feedforward;
    const MetricsLog ff = run_simulation(cfg);
    cfg.mode = RunMode::Nominal;
    const MetricsLog nom = run_simulation(cfg);
    ASSERT_EQ(ff.snapshots.size(), nom.snapshots.size());
    for (std::size_t s = 0; s < ff.snapshots.size(); ++s) {
        EXPECT_EQ(ff.snapshots[s].samples, nom.snapshots[s].samples);
    }
}

TEST(RunSimulation, DeterministicAndScheduleIndependent) {
    ScenarioConfig cfg = small_config();
    const MetricsLog a = run_simulation(cfg);
    const MetricsLog b = run_simulation(cfg);
    cfg.parallel = false;
    const MetricsLog c = run_simulation(cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    ASSERT_EQ(a.records.size(), c.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        for (const MetricsLog* other : {&b, &c}) {
            const StepRecord& r = other->records[i];
            EXPECT_EQ(a.records[i].step, r.step);
            EXPECT_EQ(a.records[i].agent, r.agent);
            EXPECT_EQ(a.records[i].wasserstein, r.wasserstein);
            EXPECT_EQ(a.records[i].e_w_norm, r.e_w_norm);
            EXPECT_EQ(a.records[i].ratio, r.ratio);
            EXPECT_EQ(a.records[i].position, r.position);
        }
    }
}

TEST(RunSimulation, WeightsMonotoneAndBounded) {
    ScenarioConfig cfg = small_config();
    const SimulationContext ctx(cfg);
    World w = initial_world(ctx);
    const double cap = 1.0 / static_cast<double>(cfg.plume.samples);
    for (int k = 0; k < 100; ++k) {
        const World before = w;
        ASSERT_FALSE(simulate_step(w, ctx).exhausted);
        for (std::size_t p = 0; p < w.populations.size(); ++p) {
            for (std::size_t i = 0; i < w.populations[p].agents.size(); ++i) {
                const auto& now = w.populations[p].agents[i].weight_map;
                const auto& was = before.populations[p].agents[i].weight_map;
                for (std::size_t j = 0; j < now.size(); ++j) {
                    EXPECT_LE(now[j], was[j]);
                    EXPECT_GE(now[j], 0.0);
                    EXPECT_LE(now[j], cap);
                }
            }
        }
    }
}

TEST(RunSimulation, ReferenceScenarioLogsEveryStep) {
    const ScenarioConfig cfg;
    const MetricsLog log = run_simulation(cfg);
    EXPECT_FALSE(log.completed_at.has_value());
    EXPECT_EQ(log.steps_run, 1000);
    for (std::size_t i = 0; i < cfg.n_agents; ++i) {
        EXPECT_EQ(log.series(i, Controller::Nominal).size(), 1000u);
        EXPECT_EQ(log.series(i, Controller::Feedforward).size(), 1000u);
    }
    ASSERT_NE(log.projection(Controller::Feedforward), nullptr);

    // Lag ordering over the last 500 steps, per agent and on average.
    double mean_ff = 0.0, mean_nom = 0.0;
    for (std::size_t i = 0; i < cfg.n_agents; ++i) {
        for (const auto& r : log.series(i, Controller::Feedforward)) {
            if (r.step >= 500) mean_ff += r.wasserstein;
        }
        for (const auto& r : log.series(i, Controller::Nominal)) {
            if (r.step >= 500) mean_nom += r.wasserstein;
        }
    }
    EXPECT_LE(mean_ff, mean_nom);
}

}  // namespace
}  // namespace d2oc
