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
#include "d2oc/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <exception>
#include <string>

#include "d2oc/error.hpp"
#include "d2oc/kernels.hpp"
#include "d2oc/rng.hpp"

namespace d2oc {

VelocityField default_plume_field() {
    VelocityField field;
    field.kind = FieldKind::WaypointDrift;
    field.speed = 0.3;
    field.waypoints = {Point(75.0, 25.0), Point(75.0, 75.0), Point(25.0, 75.0), Point(25.0, 25.0)};
    field.switch_radius = 1.0;
    return field;
}

namespace {

void require(bool ok, const char* field) {
    if (!ok) throw Error(ErrorKind::Config, std::string("invalid ") + field);
}

}  // namespace

void ScenarioConfig::validate() const {
    require(n_agents >= 1, "agents.count");
    require((domain.lo.array() < domain.hi.array()).all(), "plume.domain");
    require(plume.samples >= 1, "plume.samples");
    require(plume.sigma >= 0.0, "plume.sigma");
    require(dt > 0.0, "agents.dt");
    require(gravity > 0.0, "agents.gravity");
    require(tau > 0.0, "agents.tau");
    require(horizon >= 1, "horizon.H");
    require(r_scale > 0.0, "controller.R");
    require(comm_range >= 0.0, "agents.comm_range");
    require(total_steps >= 0, "horizon.steps");
    require(gamma >= 0.0 && gamma <= 1.0, "weights.gamma");
    require(sigma_c > 0.0, "weights.sigma_c");
    require(k_nearest >= 1, "controller.k_nearest");
    require(radius > 0.0, "controller.radius");
    require(beta_min >= 0.0, "controller.beta_min");
    require(snapshot_every >= 0, "output.snapshot_every");
    const auto& f = plume.field;
    require(f.v_max > 0.0, "plume.field.v_max");
    if (f.kind == FieldKind::WaypointDrift) {
        require(!f.waypoints.empty(), "plume.field.waypoints");
        require(f.speed >= 0.0, "plume.field.speed");
        require(f.switch_radius > 0.0, "plume.field.switch_radius");
    }
}

Point Agent::position() const {
    const Eigen::VectorXd y = model->output(x);
    return Point(y(0), y(1));
}

std::vector<double> update_weights(std::vector<double> weight_map, const Point& y,
                                   std::span<const Point> positions, double gamma, double sigma_c) {
    if (weight_map.size() != positions.size()) {
        throw Error(ErrorKind::LengthMismatch, "weight map and cloud differ in length");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(sigma_c > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "gamma must lie in [0, 1] and sigma_c be positive");
    }
    kernels::serial::decay_weights(weight_map, positions, y, gamma, sigma_c);
    return weight_map;
}

std::vector<double> consensus_merge(std::span<const double> map_a, std::span<const double> map_b) {
    if (map_a.size() != map_b.size()) {
        throw Error(ErrorKind::LengthMismatch, "weight maps differ in length");
    }
    std::vector<double> merged(map_a.size());
    for (std::size_t j = 0; j < merged.size(); ++j) merged[j] = std::min(map_a[j], map_b[j]);
    return merged;
}

void merge_in_range(Population& population, double comm_range) {
    auto& agents = population.agents;
    const std::size_t n = agents.size();
    for (std::size_t sweep = 0; sweep + 1 < n; ++sweep) {
        bool changed = false;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if ((agents[a].position() - agents[b].position()).norm() > comm_range) continue;
                if (agents[a].weight_map == agents[b].weight_map) continue;
                auto merged = consensus_merge(agents[a].weight_map, agents[b].weight_map);
                agents[a].weight_map = merged;
                agents[b].weight_map = std::move(merged);
                changed = true;
            }
        }
        if (!changed) break;
    }
}

SimulationContext::SimulationContext(ScenarioConfig cfg) : config(std::move(cfg)) {
    config.validate();
    model = std::make_shared<const LtiModel>(
        make_quadcopter_model(config.dt, config.gravity, config.tau));
    if (model->output_dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "swarm agents need a planar output");
    }
    lifted = build_lifted(*model, config.horizon);
    const Eigen::Index mH = model->input_dim() * config.horizon;
    R = config.r_scale * Eigen::MatrixXd::Identity(mH, mH);
}

World initial_world(const SimulationContext& ctx) {
    const auto& cfg = ctx.config;
    World world;
    world.cloud = gaussian_cloud(cfg.seed, cfg.plume.samples, cfg.plume.mean, cfg.plume.sigma);
    for (auto& q : world.cloud.positions) q = cfg.domain.clamp(q);
    world.flow = observe_cloud(cfg.plume.field, FlowState{}, world.cloud);

    Rng rng(cfg.seed, kAgentInitStream);
    PointList starts;
    for (std::size_t i = 0; i < cfg.n_agents; ++i) {
        const double px = rng.uniform(cfg.domain.lo.x(), cfg.domain.hi.x());
        const double py = rng.uniform(cfg.domain.lo.y(), cfg.domain.hi.y());
        starts.emplace_back(px, py);
    }

    const Eigen::MatrixXd& C = ctx.model->C();
    const Eigen::MatrixXd CCt = C * C.transpose();
    std::vector<Controller> controllers;
    if (cfg.mode != RunMode::Feedforward) controllers.push_back(Controller::Nominal);
    if (cfg.mode != RunMode::Nominal) controllers.push_back(Controller::Feedforward);
    for (Controller c : controllers) {
        Population pop;
        pop.controller = c;
        for (std::size_t i = 0; i < cfg.n_agents; ++i) {
            Agent agent;
            agent.id = i;
            agent.model = ctx.model;
            const Eigen::VectorXd y = starts[i];
            agent.x = C.transpose() * CCt.ldlt().solve(y);  // at rest, output = start
            agent.weight_map = world.cloud.beta;
            pop.agents.push_back(std::move(agent));
        }
        world.populations.push_back(std::move(pop));
    }
    return world;
}

namespace {

struct AgentSlot {
    std::size_t population = 0;
    Agent agent;  // working copy, committed only if every slot succeeds
    StepRecord record;
    Eigen::MatrixXd projection;
    bool exhausted = false;
    std::exception_ptr error;
};

void step_agent(AgentSlot& slot, Controller controller, const World& world,
                const SampleCloud& next_cloud, const SimulationContext& ctx) {
    const auto& cfg = ctx.config;
    const LtiModel& model = *slot.agent.model;
    const int H = cfg.horizon;
    const Eigen::Index m = model.input_dim();
    const Eigen::Index d = model.output_dim();
    const std::span<const Point> positions(world.cloud.positions);
    Agent& agent = slot.agent;

    const Point y = agent.position();
    const bool replan = cfg.receding || agent.plan.size() == 0 || agent.plan_cursor >= H;
    // Coverage is complete once nothing is live, even mid-plan.
    if (!replan && std::none_of(agent.weight_map.begin(), agent.weight_map.end(),
                                [&](double b) { return b > cfg.beta_min; })) {
        throw Error(ErrorKind::NoLiveSamples, "all weights are at or below beta_min");
    }
    if (replan) {
        const auto indices =
            select_local(positions, agent.weight_map, y, cfg.k_nearest, cfg.radius, cfg.beta_min);
        agent.assignment = transport_weights(indices, agent.weight_map);
    }

    const Barycenter bary = barycenter_and_variance(agent.assignment, positions);
    const Point drift =
        predict_drift(agent.assignment, positions, cfg.plume.field, world.flow, cfg.dt, world.step);
    const std::vector<double> pi_sums(static_cast<std::size_t>(H), agent.assignment.mass());
    const Eigen::MatrixXd omega = build_omega(pi_sums, d);

    const auto reference = HorizonReference::feedforward(bary.mean, drift, H);
    const QpProblem qp = assemble_qp(ctx.lifted, omega, agent.x, reference, ctx.R);
    slot.projection = projection_matrix(qp);
    const SpectralNorms norms = spectral_norms(slot.projection);
    const ErrorReport report = error_decomposition(qp, ctx.lifted, agent.x, reference.qbar_stack,
                                                   reference.drift_stack, slot.projection, norms);

    StepRecord& rec = slot.record;
    rec.step = world.step;
    rec.agent = agent.id;
    rec.controller = controller;
    rec.wasserstein = local_wasserstein(y, agent.assignment, positions);
    rec.e_w_norm = report.e_w.norm();
    rec.e0_norm = report.e0_total.norm();
    rec.ratio = report.ratio;
    rec.lambda = report.lambda;
    rec.p_norm = report.p_norm;
    rec.position = y;
    rec.qbar = bary.mean;
    rec.drift = drift;
    rec.variance = bary.variance;
    rec.omega_blocks.resize(pi_sums.size());
    std::transform(pi_sums.begin(), pi_sums.end(), rec.omega_blocks.begin(),
                   [](double s) { return std::sqrt(s); });
    rec.reselected = replan;
    rec.e_w = report.e_w;

    if (replan) {
        agent.plan = controller == Controller::Feedforward
                         ? solve_feedforward(qp, ctx.lifted, omega, reference.drift_stack)
                         : solve_nominal(qp);
        agent.plan_cursor = 0;
    }
    const Eigen::VectorXd u = agent.plan.segment(agent.plan_cursor * m, m);
    ++agent.plan_cursor;
    agent.x = model.step(agent.x, u);

    agent.weight_map = update_weights(std::move(agent.weight_map), agent.position(),
                                      next_cloud.positions, cfg.gamma, cfg.sigma_c);
}

}  // namespace

StepResult simulate_step(World& world, const SimulationContext& ctx,
                         std::vector<std::pair<Controller, Eigen::MatrixXd>>* projections) {
    const auto& cfg = ctx.config;
    SampleCloud next_cloud = advance_samples(world.cloud, cfg.plume.field, world.flow, cfg.dt,
                                             world.step, cfg.domain, cfg.parallel);

    std::vector<AgentSlot> slots;
    for (std::size_t p = 0; p < world.populations.size(); ++p) {
        for (const Agent& agent : world.populations[p].agents) {
            AgentSlot slot;
            slot.population = p;
            slot.agent = agent;
            slots.push_back(std::move(slot));
        }
    }

    const auto n_slots = static_cast<std::ptrdiff_t>(slots.size());
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (std::ptrdiff_t s = 0; s < n_slots; ++s) {
        AgentSlot& slot = slots[static_cast<std::size_t>(s)];
        try {
            step_agent(slot, world.populations[slot.population].controller, world, next_cloud, ctx);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NoLiveSamples) {
                slot.exhausted = true;
            } else {
                slot.error = std::current_exception();
            }
        } catch (...) {
            slot.error = std::current_exception();
        }
    }

    StepResult result;
    for (const auto& slot : slots) {
        if (slot.error) std::rethrow_exception(slot.error);
        result.exhausted = result.exhausted || slot.exhausted;
    }
    if (result.exhausted) return result;

    for (auto& slot : slots) {
        Population& pop = world.populations[slot.population];
        if (projections != nullptr) {
            const bool known = std::any_of(projections->begin(), projections->end(),
                                           [&](const auto& e) { return e.first == pop.controller; });
            if (!known) projections->emplace_back(pop.controller, slot.projection);
        }
        result.records.push_back(std::move(slot.record));
        pop.agents[slot.agent.id] = std::move(slot.agent);
    }
    for (auto& pop : world.populations) merge_in_range(pop, cfg.comm_range);

    world.cloud = std::move(next_cloud);
    world.flow = observe_cloud(cfg.plume.field, world.flow, world.cloud);
    ++world.step;
    return result;
}

namespace {

Snapshot take_snapshot(const World& world) {
    Snapshot snap;
    snap.step = world.step;
    snap.samples = world.cloud.positions;
    for (const auto& pop : world.populations) {
        std::vector<double> beta = pop.agents.front().weight_map;
        PointList agents;
        for (const auto& agent : pop.agents) {
            for (std::size_t j = 0; j < beta.size(); ++j) beta[j] = std::min(beta[j], agent.weight_map[j]);
            agents.push_back(agent.position());
        }
        snap.beta.emplace_back(pop.controller, std::move(beta));
        snap.agents.emplace_back(pop.controller, std::move(agents));
    }
    return snap;
}

}  // namespace

MetricsLog run_simulation(const ScenarioConfig& config) {
    const SimulationContext ctx(config);
    World world = initial_world(ctx);
    MetricsLog log;
    for (std::int64_t k = 0; k < config.total_steps; ++k) {
        if (config.snapshot_every > 0 && k % config.snapshot_every == 0) {
            log.snapshots.push_back(take_snapshot(world));
        }
        StepResult result = simulate_step(world, ctx, &log.projections);
        if (result.exhausted) {
            log.completed_at = k;
            break;
        }
        std::move(result.records.begin(), result.records.end(), std::back_inserter(log.records));
        ++log.steps_run;
    }
    return log;
}

}  // namespace d2oc
