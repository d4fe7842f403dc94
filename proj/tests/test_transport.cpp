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
#include <cmath>
#include <numeric>

#include "d2oc/error.hpp"
#include "d2oc/transport.hpp"
#include "support/oracles.hpp"

namespace d2oc {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no Error thrown";
    return ErrorKind::Config;
}

PointList random_points(Rng& rng, std::size_t n, double spread) {
    PointList pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(spread * rng.normal(), spread * rng.normal());
    return pts;
}

TEST(SelectLocal, NearestWithinRadius) {
    const PointList q{Point(3.0, 0.0), Point(1.0, 0.0), Point(2.0, 0.0)};
    const std::vector<double> beta(3, 1.0 / 3.0);
    const auto idx = select_local(q, beta, Point(0.0, 0.0), 2, 10.0, 1e-4);
    EXPECT_EQ(idx, (std::vector<std::size_t>{1, 2}));
}

TEST(SelectLocal, FallsBackToGlobalNearest) {
    Rng rng(3, 0);
    PointList q;
    for (int j = 0; j < 20; ++j) q.emplace_back(50.0 + 10.0 * rng.uniform01(), 50.0 + 10.0 * rng.uniform01());
    const std::vector<double> beta(q.size(), 0.05);
    const Point y(0.0, 0.0);
    const auto idx = select_local(q, beta, y, 4, 5.0, 1e-4);
    // exhaustive scan oracle
    std::vector<std::size_t> order(q.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (q[a] - y).squaredNorm() < (q[b] - y).squaredNorm();
    });
    order.resize(4);
    EXPECT_EQ(idx, order);
}

TEST(SelectLocal, SkipsExhaustedSamples) {
    const PointList q{Point(1.0, 0.0), Point(2.0, 0.0), Point(3.0, 0.0)};
    const std::vector<double> beta{1e-5, 0.5, 0.5};
    EXPECT_EQ(select_local(q, beta, Point::Zero(), 1, 10.0, 1e-4), std::vector<std::size_t>{1});
}

TEST(SelectLocal, NoLiveSamples) {
    const PointList q{Point(1.0, 0.0), Point(2.0, 0.0)};
    const std::vector<double> beta{1e-4, 0.0};
    EXPECT_EQ(kind_of([&] { select_local(q, beta, Point::Zero(), 1, 10.0, 1e-4); }),
              ErrorKind::NoLiveSamples);
}

TEST(SelectLocal, TiesBrokenBySampleId) {
    const PointList q{Point(0.0, 1.0), Point(1.0, 0.0), Point(-1.0, 0.0), Point(0.0, -1.0)};
    const std::vector<double> beta(4, 0.25);
    EXPECT_EQ(select_local(q, beta, Point::Zero(), 3, 5.0, 1e-4), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SelectLocal, PermutationInvariant) {
    Rng rng(77, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const PointList q = random_points(rng, 30, 5.0);
        std::vector<double> beta(q.size());
        for (auto& b : beta) b = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.001, 0.05);
        beta[0] = 0.01;
        const Point y(rng.normal(), rng.normal());
        std::vector<std::size_t> perm(q.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform01() * (i + 1))]);
        }
        PointList q2(q.size());
        std::vector<double> beta2(q.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            q2[i] = q[perm[i]];
            beta2[i] = beta[perm[i]];
        }
        auto a = select_local(q, beta, y, 6, 4.0, 1e-4);
        auto b = select_local(q2, beta2, y, 6, 4.0, 1e-4);
        for (auto& i : b) i = perm[i];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << "trial " << trial;
    }
}

TEST(SelectLocal, RejectsZeroK) {
    const PointList q{Point(1.0, 0.0)};
    const std::vector<double> beta{1.0};
    EXPECT_EQ(kind_of([&] { select_local(q, beta, Point::Zero(), 0, 1.0, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(TransportWeights, Examples) {
    const std::vector<double> beta{0.5, 0.5, 0.1, 0.3};
    const std::vector<std::size_t> pair{0, 1};
    EXPECT_EQ(transport_weights(pair, beta).pi, (std::vector<double>{0.5, 0.5}));
    const std::vector<std::size_t> skew{2, 3};
    const auto a = transport_weights(skew, beta);
    EXPECT_NEAR(a.pi[0], 0.25, 1e-15);
    EXPECT_NEAR(a.pi[1], 0.75, 1e-15);
    const std::vector<std::size_t> one{3};
    EXPECT_EQ(transport_weights(one, beta).pi, std::vector<double>{1.0});
}

TEST(TransportWeights, DegenerateWeights) {
    const std::vector<double> beta{0.0, 0.0};
    const std::vector<std::size_t> idx{0, 1};
    EXPECT_EQ(kind_of([&] { transport_weights(idx, beta); }), ErrorKind::DegenerateWeights);
}

TEST(TransportWeights, NormalizedOnRandomInstances) {
    Rng rng(8, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> beta(12);
        for (auto& b : beta) b = rng.uniform(1e-6, 1.0);
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < beta.size(); ++j) {
            if (rng.uniform01() < 0.5) idx.push_back(j);
        }
        if (idx.empty()) idx.push_back(0);
        const auto a = transport_weights(idx, beta);
        EXPECT_NEAR(a.mass(), 1.0, 1e-12);
        for (double p : a.pi) EXPECT_GE(p, 0.0);
    }
}

TEST(Barycenter, SymmetricPair) {
    const PointList q{Point(0.0, 0.0), Point(2.0, 0.0)};
    const auto b = barycenter_and_variance({{0, 1}, {0.5, 0.5}}, q);
    EXPECT_EQ(b.mean, Point(1.0, 0.0));
    EXPECT_DOUBLE_EQ(b.variance, 1.0);
}

TEST(Barycenter, WeightedPair) {
    const PointList q{Point(0.0, 0.0), Point(4.0, 0.0)};
    const auto b = barycenter_and_variance({{0, 1}, {0.25, 0.75}}, q);
    EXPECT_NEAR(b.mean.x(), 3.0, 1e-15);
    EXPECT_NEAR(b.variance, 3.0, 1e-14);
}

TEST(Barycenter, PointMass) {
    const PointList q{Point(7.0, -2.0)};
    const auto b = barycenter_and_variance({{0}, {1.0}}, q);
    EXPECT_EQ(b.mean, q[0]);
    EXPECT_EQ(b.variance, 0.0);
}

TEST(LocalWasserstein, VarianceFloor) {
    const PointList q{Point(0.0, 0.0), Point(2.0, 0.0)};
    EXPECT_DOUBLE_EQ(local_wasserstein(Point(1.0, 0.0), {{0, 1}, {0.5, 0.5}}, q), 1.0);
}

TEST(LocalWasserstein, PointDistance) {
    const PointList q{Point(3.0, 4.0)};
    EXPECT_DOUBLE_EQ(local_wasserstein(Point::Zero(), {{0}, {1.0}}, q), 5.0);
}

TEST(LocalWasserstein, DecompositionIdentity) {
    Rng rng(1000, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 8);
        const PointList q = random_points(rng, n, 10.0);
        std::vector<double> beta(n);
        for (auto& b : beta) b = rng.uniform(0.01, 1.0);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        const auto a = transport_weights(idx, beta);
        const Point y(10.0 * rng.normal(), 10.0 * rng.normal());
        const double direct = local_wasserstein(y, a, q);
        const double split = local_wasserstein(y, barycenter_and_variance(a, q));
        EXPECT_LE(std::abs(direct * direct - split * split), 1e-10 * (1.0 + direct * direct));
    }
}

TEST(ExactOt, IdenticalSetsAreFree) {
    const PointList a{Point(0.0, 0.0), Point(1.0, 2.0), Point(-3.0, 1.0)};
    const std::vector<double> m(3, 1.0 / 3.0);
    const auto plan = exact_ot_small(a, m, a, m);
    EXPECT_NEAR(plan.w2(), 0.0, 1e-12);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(plan.plan(i, i), 1.0 / 3.0, 1e-12);
}

TEST(ExactOt, SinglePair) {
    const std::vector<double> one{1.0};
    EXPECT_NEAR(exact_ot_small({Point(0.0, 0.0)}, one, {Point(3.0, 4.0)}, one).w2(), 5.0, 1e-12);
}

TEST(ExactOt, InfeasibleMarginals) {
    const std::vector<double> a{0.5, 0.5};
    const std::vector<double> b{0.5, 0.6};
    const PointList p{Point(0.0, 0.0), Point(1.0, 0.0)};
    EXPECT_EQ(kind_of([&] { exact_ot_small(p, a, p, b); }), ErrorKind::InfeasibleMarginals);
}

TEST(ExactOt, RejectsOversizedInstances) {
    PointList p(kExactOtMaxPoints + 1, Point::Zero());
    const std::vector<double> m(p.size(), 1.0 / static_cast<double>(p.size()));
    EXPECT_THROW(exact_ot_small(p, m, p, m), Error);
}

TEST(ExactOt, MatchesPermutationBruteForce) {
    for (std::size_t n : {3u, 4u}) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed, 100 + n);
            const PointList a = random_points(rng, n, 3.0);
            const PointList b = random_points(rng, n, 3.0);
            const std::vector<double> m(n, 1.0 / static_cast<double>(n));
            const auto plan = exact_ot_small(a, m, b, m);
            EXPECT_NEAR(plan.cost, oracle::brute_force_uniform_cost(a, b), 1e-12)
                << n << "v" << n << " seed " << seed;
        }
    }
}

TEST(ExactOt, PlanHasPrescribedMarginals) {
    Rng rng(5, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t na = 1 + static_cast<std::size_t>(rng.uniform01() * kExactOtMaxPoints);
        const std::size_t nb = 1 + static_cast<std::size_t>(rng.uniform01() * kExactOtMaxPoints);
        std::vector<double> ma(na), mb(nb);
        for (auto& w : ma) w = rng.uniform(0.1, 1.0);
        for (auto& w : mb) w = rng.uniform(0.1, 1.0);
        const double sa = std::accumulate(ma.begin(), ma.end(), 0.0);
        const double sb = std::accumulate(mb.begin(), mb.end(), 0.0);
        for (auto& w : ma) w /= sa;
        for (auto& w : mb) w /= sb;
        const auto plan = exact_ot_small(random_points(rng, na, 2.0), ma, random_points(rng, nb, 2.0), mb);
        EXPECT_GE(plan.plan.minCoeff(), -1e-15);
        for (std::size_t i = 0; i < na; ++i) EXPECT_NEAR(plan.plan.row(i).sum(), ma[i], 1e-12);
        for (std::size_t j = 0; j < nb; ++j) EXPECT_NEAR(plan.plan.col(j).sum(), mb[j], 1e-12);
        EXPECT_NEAR(plan.plan.sum(), 1.0, 1e-12);
    }
}

TEST(ExactOt, SymmetryAndTriangleInequality) {
    Rng rng(99, 0);
    auto random_measure = [&](std::size_t n) {
        std::vector<double> m(n);
        for (auto& w : m) w = rng.uniform(0.1, 1.0);
        const double s = std::accumulate(m.begin(), m.end(), 0.0);
        for (auto& w : m) w /= s;
        return std::make_pair(random_points(rng, n, 3.0), m);
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto [pa, ma] = random_measure(1 + trial % 5);
        const auto [pb, mb] = random_measure(1 + (trial / 5) % 6);
        const auto [pc, mc] = random_measure(2 + trial % 4);
        const double ab = exact_ot_small(pa, ma, pb, mb).w2();
        const double ba = exact_ot_small(pb, mb, pa, ma).w2();
        const double bc = exact_ot_small(pb, mb, pc, mc).w2();
        const double ac = exact_ot_small(pa, ma, pc, mc).w2();
        EXPECT_NEAR(ab, ba, 1e-9);
        EXPECT_LE(ac, ab + bc + 1e-9);
    }
}

}  // namespace
}  // namespace d2oc
