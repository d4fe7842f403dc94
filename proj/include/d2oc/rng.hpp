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
#ifndef D2OC_RNG_HPP
#define D2OC_RNG_HPP

#include <cstdint>
#include <random>

namespace d2oc {

/**
 * @brief Portable seeded random source.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
 * derives doubles without the implementation-defined std distributions:
 *  - uniform01(): top 53 bits of one engine draw, scaled to [0, 1).
 *  - normal(): Box-Muller on two uniforms, caching the second variate.
 *
 * Independent streams are split from one scenario seed by hashing
 * (seed, stream) through splitmix64 before seeding the engine. Stream ids
 * in use are listed in RngStream.
 */
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

enum RngStream : std::uint64_t {
    kCloudStream = 0,
    kAgentInitStream = 1,
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace d2oc

#endif  // D2OC_RNG_HPP
