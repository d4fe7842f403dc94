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
#ifndef D2OC_REFERENCE_HPP
#define D2OC_REFERENCE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "d2oc/geometry.hpp"

namespace d2oc {

/// Reference samples q_j and their remaining weights beta_j.
struct SampleCloud {
    PointList positions;
    std::vector<double> beta;

    std::size_t size() const { return positions.size(); }
};

enum class FieldKind { Constant, WaypointDrift, Vortex };

/**
 * @brief Velocity field v(x, k) transporting the reference samples.
 *
 * WaypointDrift heads toward the current waypoint at `speed`. In rigid mode
 * (the default) the direction is taken from the cloud centroid, so every
 * sample gets the same vector and the cloud translates without deforming;
 * with `per_sample` the direction is taken from each sample itself.
 */
struct VelocityField {
    FieldKind kind = FieldKind::Constant;

    Point constant = Point::Zero();

    double speed = 0.0;
    PointList waypoints;
    double switch_radius = 1.0;
    bool per_sample = false;

    double gain = 0.0;  // 1/s
    Point center = Point::Zero();

    /// Magnitude cap; infinity disables it.
    double v_max = std::numeric_limits<double>::infinity();
};

/// Mutable part of the flow: active waypoint and the last observed centroid.
struct FlowState {
    std::size_t waypoint = 0;
    Point centroid = Point::Zero();
};

Point velocity_at(const VelocityField& field, const FlowState& state, const Point& x,
                  std::int64_t k);

/// Records the cloud centroid and switches waypoints (looping) once it is
/// within switch_radius of the active one.
FlowState observe_cloud(const VelocityField& field, const FlowState& state,
                        const SampleCloud& cloud);

/// One Lagrangian Euler step q_j <- clamp(q_j + dt v(q_j, k)); beta untouched.
SampleCloud advance_samples(const SampleCloud& cloud, const VelocityField& field,
                            const FlowState& state, double dt, std::int64_t k, const Box& domain,
                            bool parallel = true);

/// n isotropic Gaussian draws around mean from the cloud stream of `seed`,
/// beta initialized to 1/n.
SampleCloud gaussian_cloud(std::uint64_t seed, std::size_t n, const Point& mean, double sigma);

}  // namespace d2oc

#endif  // D2OC_REFERENCE_HPP
