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
#include "d2oc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "d2oc/error.hpp"
#include "d2oc/kernels.hpp"

namespace d2oc {

double LocalAssignment::mass() const {
    return std::accumulate(pi.begin(), pi.end(), 0.0);
}

std::vector<std::size_t> select_local(std::span<const Point> positions,
                                      std::span<const double> beta, const Point& y,
                                      std::size_t k_nearest, double radius, double beta_min) {
    if (k_nearest == 0) throw Error(ErrorKind::InvalidArgument, "k_nearest must be >= 1");
    if (positions.size() != beta.size()) {
        throw Error(ErrorKind::LengthMismatch, "positions and beta differ in length");
    }
    std::vector<double> dist2(positions.size());
    kernels::serial::squared_distances(positions, y, dist2);

    std::vector<std::size_t> live;
    live.reserve(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (beta[j] > beta_min) live.push_back(j);
    }
    if (live.empty()) throw Error(ErrorKind::NoLiveSamples, "all weights are at or below beta_min");

    auto closer = [&](std::size_t a, std::size_t b) {
        return dist2[a] < dist2[b] || (dist2[a] == dist2[b] && a < b);
    };
    const double r2 = radius * radius;
    std::vector<std::size_t> within;
    for (std::size_t j : live) {
        if (dist2[j] <= r2) within.push_back(j);
    }
    std::vector<std::size_t>& pool = within.empty() ? live : within;
    const std::size_t take = std::min(k_nearest, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                      closer);
    pool.resize(take);
    return pool;
}

LocalAssignment transport_weights(std::span<const std::size_t> indices,
                                  std::span<const double> beta) {
    if (indices.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample selection");
    double total = 0.0;
    for (std::size_t j : indices) {
        if (j >= beta.size()) throw Error(ErrorKind::LengthMismatch, "sample index out of range");
        total += beta[j];
    }
    if (!(total > 0.0)) throw Error(ErrorKind::DegenerateWeights, "selected weights sum to zero");
    LocalAssignment out;
    out.indices.assign(indices.begin(), indices.end());
    out.pi.reserve(indices.size());
    for (std::size_t j : indices) out.pi.push_back(beta[j] / total);
    return out;
}

Barycenter barycenter_and_variance(const LocalAssignment& assignment,
                                   std::span<const Point> positions) {
    Barycenter out;
    const double mass = assignment.mass();
    if (!(mass > 0.0)) return out;
    for (std::size_t s = 0; s < assignment.indices.size(); ++s) {
        out.mean += assignment.pi[s] * positions[assignment.indices[s]];
    }
    out.mean /= mass;
    for (std::size_t s = 0; s < assignment.indices.size(); ++s) {
        out.variance += assignment.pi[s] * (positions[assignment.indices[s]] - out.mean).squaredNorm();
    }
    return out;
}

double local_wasserstein(const Point& y, const LocalAssignment& assignment,
                         std::span<const Point> positions) {
    double acc = 0.0;
    for (std::size_t s = 0; s < assignment.indices.size(); ++s) {
        acc += assignment.pi[s] * (y - positions[assignment.indices[s]]).squaredNorm();
    }
    return std::sqrt(acc);
}

double local_wasserstein(const Point& y, const Barycenter& barycenter) {
    return std::sqrt((y - barycenter.mean).squaredNorm() + barycenter.variance);
}

double TransportPlan::w2() const { return std::sqrt(std::max(cost, 0.0)); }

namespace {

struct Cell {
    std::size_t i;
    std::size_t j;
    double value;
};

// Path in the basis tree from column node j to row node i, as basis-cell
// indices in traversal order. Nodes 0..m-1 are rows, m..m+n-1 columns.
std::vector<std::size_t> tree_path(const std::vector<Cell>& basis, std::size_t m, std::size_t n,
                                   std::size_t col, std::size_t row) {
    const std::size_t nodes = m + n;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);  // (node, cell)
    for (std::size_t c = 0; c < basis.size(); ++c) {
        adj[basis[c].i].emplace_back(m + basis[c].j, c);
        adj[m + basis[c].j].emplace_back(basis[c].i, c);
    }
    const std::size_t none = nodes;
    std::vector<std::size_t> parent_node(nodes, none);
    std::vector<std::size_t> parent_cell(nodes, none);
    std::queue<std::size_t> frontier;
    const std::size_t start = m + col;
    parent_node[start] = start;
    frontier.push(start);
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        if (u == row) break;
        for (auto [v, c] : adj[u]) {
            if (parent_node[v] != none) continue;
            parent_node[v] = u;
            parent_cell[v] = c;
            frontier.push(v);
        }
    }
    if (parent_node[row] == none) {
        throw Error(ErrorKind::InvalidArgument, "transport basis is not a spanning tree");
    }
    std::vector<std::size_t> reversed;
    for (std::size_t v = row; v != start; v = parent_node[v]) reversed.push_back(parent_cell[v]);
    return {reversed.rbegin(), reversed.rend()};
}

}  // namespace

TransportPlan exact_ot_small(const PointList& points_a, std::span<const double> mass_a,
                             const PointList& points_b, std::span<const double> mass_b) {
    const std::size_t m = points_a.size();
    const std::size_t n = points_b.size();
    if (m == 0 || n == 0 || m > kExactOtMaxPoints || n > kExactOtMaxPoints) {
        throw Error(ErrorKind::InvalidArgument,
                    "exact_ot_small supports 1.." + std::to_string(kExactOtMaxPoints) +
                        " points per side");
    }
    if (mass_a.size() != m || mass_b.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "mass vectors must match point counts");
    }
    for (double w : mass_a) {
        if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative mass");
    }
    for (double w : mass_b) {
        if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative mass");
    }
    const double total_a = std::accumulate(mass_a.begin(), mass_a.end(), 0.0);
    const double total_b = std::accumulate(mass_b.begin(), mass_b.end(), 0.0);
    if (std::abs(total_a - total_b) > 1e-9) {
        throw Error(ErrorKind::InfeasibleMarginals, "marginal masses differ");
    }

    Eigen::MatrixXd cost(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = (points_a[i] - points_b[j]).squaredNorm();
    }

    // North-west corner start; ties step down so the basis keeps m + n - 1 cells.
    std::vector<Cell> basis;
    {
        std::vector<double> supply(mass_a.begin(), mass_a.end());
        std::vector<double> demand(mass_b.begin(), mass_b.end());
        std::size_t i = 0;
        std::size_t j = 0;
        while (true) {
            const double x = std::min(supply[i], demand[j]);
            basis.push_back({i, j, x});
            supply[i] -= x;
            demand[j] -= x;
            if (i == m - 1 && j == n - 1) break;
            if ((supply[i] <= demand[j] && i < m - 1) || j == n - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    const double tol = 1e-12 * (1.0 + cost.maxCoeff());
    constexpr int kMaxPivots = 100000;
    for (int pivot = 0;; ++pivot) {
        if (pivot == kMaxPivots) {
            throw Error(ErrorKind::InvalidArgument, "transportation simplex did not terminate");
        }
        // Potentials u_i + v_j = c_ij on the basis tree, u_0 = 0.
        std::vector<double> u(m, 0.0), v(n, 0.0);
        std::vector<bool> has_u(m, false), has_v(n, false);
        has_u[0] = true;
        for (std::size_t settled = 1; settled < m + n;) {
            bool progress = false;
            for (const Cell& c : basis) {
                if (has_u[c.i] && !has_v[c.j]) {
                    v[c.j] = cost(c.i, c.j) - u[c.i];
                    has_v[c.j] = true;
                    ++settled;
                    progress = true;
                } else if (!has_u[c.i] && has_v[c.j]) {
                    u[c.i] = cost(c.i, c.j) - v[c.j];
                    has_u[c.i] = true;
                    ++settled;
                    progress = true;
                }
            }
            if (!progress) throw Error(ErrorKind::InvalidArgument, "disconnected transport basis");
        }

        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> in_basis =
            Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, n, false);
        for (const Cell& c : basis) in_basis(c.i, c.j) = true;

        // Bland: first improving cell in row-major order.
        bool found = false;
        std::size_t ei = 0, ej = 0;
        for (std::size_t i = 0; i < m && !found; ++i) {
            for (std::size_t j = 0; j < n && !found; ++j) {
                if (!in_basis(i, j) && cost(i, j) - u[i] - v[j] < -tol) {
                    ei = i;
                    ej = j;
                    found = true;
                }
            }
        }
        if (!found) break;

        // Cells along the cycle alternate -, +, -, ... starting next to column ej.
        const std::vector<std::size_t> path = tree_path(basis, m, n, ej, ei);
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leaving = basis.size();
        for (std::size_t p = 0; p < path.size(); p += 2) {
            const Cell& c = basis[path[p]];
            const bool better = c.value < theta;
            const bool tie_lower_id =
                c.value == theta && leaving < basis.size() &&
                (c.i < basis[leaving].i || (c.i == basis[leaving].i && c.j < basis[leaving].j));
            if (better || tie_lower_id) {
                theta = c.value;
                leaving = path[p];
            }
        }
        for (std::size_t p = 0; p < path.size(); ++p) {
            Cell& c = basis[path[p]];
            c.value += (p % 2 == 0) ? -theta : theta;
        }
        basis[leaving] = {ei, ej, theta};
    }

    TransportPlan out;
    out.plan = Eigen::MatrixXd::Zero(m, n);
    for (const Cell& c : basis) out.plan(c.i, c.j) = std::max(c.value, 0.0);
    out.cost = (out.plan.array() * cost.array()).sum();
    return out;
}

}  // namespace d2oc
