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
#ifndef D2OC_GEOMETRY_HPP
#define D2OC_GEOMETRY_HPP

#include <Eigen/Core>
#include <vector>

namespace d2oc {

/// Planar task-space point, meters.
using Point = Eigen::Vector2d;
using PointList = std::vector<Point>;

/// Axis-aligned domain box [lo, hi].
struct Box {
    Point lo{0.0, 0.0};
    Point hi{100.0, 100.0};

    Point clamp(const Point& p) const { return p.cwiseMax(lo).cwiseMin(hi); }
    bool contains(const Point& p) const {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }
};

inline Point centroid(const PointList& points) {
    Point c = Point::Zero();
    for (const auto& p : points) c += p;
    return points.empty() ? c : Point(c / static_cast<double>(points.size()));
}

}  // namespace d2oc

#endif  // D2OC_GEOMETRY_HPP
