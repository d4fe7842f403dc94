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
#ifndef D2OC_TRANSPORT_HPP
#define D2OC_TRANSPORT_HPP

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

#include "d2oc/geometry.hpp"
#include "d2oc/reference.hpp"

namespace d2oc {

/// Samples S_i an agent tracks and their normalized transport weights pi_j.
struct LocalAssignment {
    std::vector<std::size_t> indices;
    std::vector<double> pi;

    bool empty() const { return indices.empty(); }
    double mass() const;
};

inline bool operator==(const LocalAssignment& a, const LocalAssignment& b) {
    return a.indices == b.indices && a.pi == b.pi;
}

/**
 * @brief Up to k_nearest live samples (beta > beta_min) within radius of y.
 *
 * Ordered by distance, ties by ascending sample id. When no live sample lies
 * within radius, falls back to the k_nearest globally nearest live samples.
 * Throws NoLiveSamples when every beta_j <= beta_min.
 */
std::vector<std::size_t> select_local(std::span<const Point> positions,
                                      std::span<const double> beta, const Point& y,
                                      std::size_t k_nearest, double radius, double beta_min);

/// pi_j = beta_j / sum_{l in S} beta_l.
LocalAssignment transport_weights(std::span<const std::size_t> indices,
                                  std::span<const double> beta);

struct Barycenter {
    Point mean = Point::Zero();
    double variance = 0.0;  // sum_j pi_j |q_j - mean|^2, m^2
};

Barycenter barycenter_and_variance(const LocalAssignment& assignment,
                                   std::span<const Point> positions);

/// sqrt(sum_j pi_j |y - q_j|^2), straight from the definition.
double local_wasserstein(const Point& y, const LocalAssignment& assignment,
                         std::span<const Point> positions);

/// Same quantity through sqrt(|y - mean|^2 + variance).
double local_wasserstein(const Point& y, const Barycenter& barycenter);

/// Coupling between two weighted point sets under squared-distance cost.
struct TransportPlan {
    Eigen::MatrixXd plan;  // rows: side a, columns: side b
    double cost = 0.0;

    double w2() const;
};

inline constexpr std::size_t kExactOtMaxPoints = 8;

/**
 * Exact W2 plan for small instances (at most kExactOtMaxPoints per side),
 * via the transportation simplex: north-west-corner start, MODI potentials,
 * Bland's rule for the entering and leaving cells. Exponential in the worst
 * case; meant as a test oracle.
 */
TransportPlan exact_ot_small(const PointList& points_a, std::span<const double> mass_a,
                             const PointList& points_b, std::span<const double> mass_b);

}  // namespace d2oc

#endif  // D2OC_TRANSPORT_HPP
