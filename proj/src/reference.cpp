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
#include "d2oc/reference.hpp"

#include "d2oc/error.hpp"
#include "d2oc/kernels.hpp"
#include "d2oc/rng.hpp"

namespace d2oc {

namespace {

Point cap(const Point& v, double v_max) {
    const double norm = v.norm();
    return norm > v_max ? Point(v * (v_max / norm)) : v;
}

Point toward(const Point& from, const Point& target, double speed) {
    const Point dir = target - from;
    const double norm = dir.norm();
    if (norm <= 0.0) return Point::Zero();
    return dir * (speed / norm);
}

}  // namespace

Point velocity_at(const VelocityField& field, const FlowState& state, const Point& x,
                  std::int64_t /*k*/) {
    switch (field.kind) {
        case FieldKind::Constant:
            return cap(field.constant, field.v_max);
        case FieldKind::WaypointDrift: {
            if (field.waypoints.empty()) return Point::Zero();
            const Point& target = field.waypoints[state.waypoint % field.waypoints.size()];
            const Point& from = field.per_sample ? x : state.centroid;
            return cap(toward(from, target, field.speed), field.v_max);
        }
        case FieldKind::Vortex: {
            const Point rel = x - field.center;
            return cap(Point(-field.gain * rel.y(), field.gain * rel.x()), field.v_max);
        }
    }
    return Point::Zero();
}

FlowState observe_cloud(const VelocityField& field, const FlowState& state,
                        const SampleCloud& cloud) {
    FlowState next = state;
    next.centroid = centroid(cloud.positions);
    if (field.kind == FieldKind::WaypointDrift && !field.waypoints.empty()) {
        const std::size_t n = field.waypoints.size();
        next.waypoint %= n;
        for (std::size_t tries = 0; tries < n; ++tries) {
            if ((field.waypoints[next.waypoint] - next.centroid).norm() >= field.switch_radius) break;
            next.waypoint = (next.waypoint + 1) % n;
        }
    }
    return next;
}

SampleCloud advance_samples(const SampleCloud& cloud, const VelocityField& field,
                            const FlowState& state, double dt, std::int64_t k, const Box& domain,
                            bool parallel) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    SampleCloud next;
    next.beta = cloud.beta;
    next.positions.resize(cloud.size());
    auto velocity = [&](const Point& x) { return velocity_at(field, state, x, k); };
    if (parallel) {
        kernels::omp::advect(std::span<const Point>(cloud.positions), std::span<Point>(next.positions),
                             velocity, dt, domain);
    } else {
        kernels::serial::advect(std::span<const Point>(cloud.positions),
                                std::span<Point>(next.positions), velocity, dt, domain);
    }
    return next;
}

SampleCloud gaussian_cloud(std::uint64_t seed, std::size_t n, const Point& mean, double sigma) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "cloud needs at least one sample");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be non-negative");
    Rng rng(seed, kCloudStream);
    SampleCloud cloud;
    cloud.positions.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double gx = rng.normal();
        const double gy = rng.normal();
        cloud.positions.emplace_back(mean.x() + sigma * gx, mean.y() + sigma * gy);
    }
    cloud.beta.assign(n, 1.0 / static_cast<double>(n));
    return cloud;
}

}  // namespace d2oc
