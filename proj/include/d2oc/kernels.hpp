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
#ifndef D2OC_KERNELS_HPP
#define D2OC_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <span>

#include "d2oc/geometry.hpp"

// Per-sample loops used by the reference flow and the coverage update.
//
// Every kernel has a serial reference and an OpenMP variant with the same
// arithmetic per element; the two must agree bit-for-bit (no cross-element
// reductions), which the kernel tests check.

namespace d2oc::kernels {

namespace serial {

/// out[j] = box.clamp(in[j] + dt * velocity(in[j])).
template <class Velocity>
void advect(std::span<const Point> in, std::span<Point> out, Velocity&& velocity, double dt,
            const Box& box) {
    for (std::size_t j = 0; j < in.size(); ++j) {
        const Point v = velocity(in[j]);
        out[j] = box.clamp(in[j] + dt * v);
    }
}

/// beta[j] *= 1 - gamma * exp(-|y - q_j|^2 / (2 sigma_c^2)), floored at 0.
inline void decay_weights(std::span<double> beta, std::span<const Point> q, const Point& y,
                          double gamma, double sigma_c) {
    const double inv = 1.0 / (2.0 * sigma_c * sigma_c);
    for (std::size_t j = 0; j < beta.size(); ++j) {
        const double factor = 1.0 - gamma * std::exp(-(y - q[j]).squaredNorm() * inv);
        beta[j] = factor > 0.0 ? beta[j] * factor : 0.0;
    }
}

inline void squared_distances(std::span<const Point> q, const Point& y, std::span<double> out) {
    for (std::size_t j = 0; j < q.size(); ++j) out[j] = (y - q[j]).squaredNorm();
}

}  // namespace serial

namespace omp {

template <class Velocity>
void advect(std::span<const Point> in, std::span<Point> out, Velocity&& velocity, double dt,
            const Box& box) {
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const Point v = velocity(in[j]);
        out[j] = box.clamp(in[j] + dt * v);
    }
}

inline void decay_weights(std::span<double> beta, std::span<const Point> q, const Point& y,
                          double gamma, double sigma_c) {
    const double inv = 1.0 / (2.0 * sigma_c * sigma_c);
    const auto n = static_cast<std::ptrdiff_t>(beta.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double factor = 1.0 - gamma * std::exp(-(y - q[j]).squaredNorm() * inv);
        beta[j] = factor > 0.0 ? beta[j] * factor : 0.0;
    }
}

inline void squared_distances(std::span<const Point> q, const Point& y, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(q.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = (y - q[j]).squaredNorm();
}

}  // namespace omp

}  // namespace d2oc::kernels

#endif  // D2OC_KERNELS_HPP
