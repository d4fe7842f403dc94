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
#include "d2oc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "d2oc/error.hpp"

namespace d2oc {

SpectralNorms contraction_factor(const Eigen::MatrixXd& P) {
    if (P.rows() != P.cols()) throw Error(ErrorKind::DimensionMismatch, "P must be square");
    if (P.size() > 0 && (P - P.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw Error(ErrorKind::NotSymmetric, "P is not symmetric");
    }
    return spectral_norms(P);
}

namespace {

Eigen::VectorXd omega_diagonal(const StepRecord& r) {
    const Eigen::Index d = r.qbar.size();
    Eigen::VectorXd diag(static_cast<Eigen::Index>(r.omega_blocks.size()) * d);
    for (std::size_t h = 0; h < r.omega_blocks.size(); ++h) {
        diag.segment(static_cast<Eigen::Index>(h) * d, d).setConstant(r.omega_blocks[h]);
    }
    return diag;
}

}  // namespace

Eigen::VectorXd stacked_perturbation(const StepRecord& now, const StepRecord& next) {
    const Point jitter = next.qbar - now.qbar - now.drift;
    return jitter.replicate(static_cast<Eigen::Index>(now.omega_blocks.size()), 1);
}

Eigen::VectorXd stacked_drift(const StepRecord& record) {
    const Eigen::Index d = record.drift.size();
    const auto H = static_cast<Eigen::Index>(record.omega_blocks.size());
    Eigen::VectorXd out(H * d);
    for (Eigen::Index h = 0; h < H; ++h) {
        out.segment(h * d, d) = static_cast<double>(h + 1) * record.drift;
    }
    return out;
}

Disturbances estimate_disturbances(std::span<const StepRecord> series) {
    Disturbances out;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Eigen::VectorXd omega = omega_diagonal(series[k]);
        out.delta = std::max(out.delta, omega.cwiseProduct(stacked_drift(series[k])).norm());
        if (k + 1 < series.size()) {
            const Eigen::VectorXd h = stacked_perturbation(series[k], series[k + 1]);
            out.zeta = std::max(out.zeta, omega.cwiseProduct(h).norm());
        }
    }
    return out;
}

BoundInputs bound_inputs(std::span<const StepRecord> series) {
    BoundInputs in;
    const Disturbances dist = estimate_disturbances(series);
    in.zeta = dist.zeta;
    in.delta = dist.delta;
    for (const auto& r : series) {
        in.lambda = std::max(in.lambda, r.lambda);
        in.p_norm = std::max(in.p_norm, r.p_norm);
        in.c_bar = std::max(in.c_bar, r.variance);
    }
    return in;
}

double ultimate_bound(const BoundInputs& in) {
    if (!(in.lambda < 1.0)) {
        throw Error(ErrorKind::NoContraction, "lambda = " + std::to_string(in.lambda) + " >= 1");
    }
    const double steady = (in.lambda * in.zeta + 0.5 * in.p_norm * in.delta) / (1.0 - in.lambda);
    return std::sqrt(steady * steady + in.c_bar);
}

BoundCheck verify_bound(std::span<const double> w, double bound, double settle_fraction) {
    if (!(settle_fraction > 0.0 && settle_fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "settle_fraction must lie in (0, 1)");
    }
    BoundCheck check;
    const auto n = static_cast<std::int64_t>(w.size());
    check.settle_step = static_cast<std::int64_t>(std::floor(settle_fraction * static_cast<double>(n)));

    std::int64_t entry = n;
    while (entry > 0 && w[static_cast<std::size_t>(entry - 1)] <= bound) --entry;
    if (entry < n || n == 0) check.entry_step = entry;

    for (std::int64_t k = check.settle_step; k < n; ++k) {
        const double excess = w[static_cast<std::size_t>(k)] - bound;
        if (excess > 0.0) {
            if (!check.first_violation) check.first_violation = k;
            ++check.violations;
            check.max_excess = std::max(check.max_excess, excess);
        }
    }
    check.pass = check.violations == 0;
    return check;
}

std::vector<RecursionResidual> recursion_residuals(std::span<const StepRecord> series,
                                                   const Eigen::MatrixXd& P) {
    std::vector<RecursionResidual> out;
    if (series.size() < 2) return out;
    const Eigen::MatrixXd I_minus_P = Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P;
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        const StepRecord& now = series[k];
        const StepRecord& next = series[k + 1];
        if (next.reselected || next.step != now.step + 1) continue;
        const Eigen::VectorXd omega_now = omega_diagonal(now);
        const Eigen::VectorXd omega_next = omega_diagonal(next);
        const Eigen::VectorXd disturbance = omega_now.cwiseProduct(stacked_perturbation(now, next));
        const Eigen::VectorXd predicted =
            I_minus_P * (now.e_w - disturbance) +
            0.5 * (P * omega_next.cwiseProduct(stacked_drift(next)));
        out.push_back({now.step, (next.e_w - predicted).norm()});
    }
    return out;
}

AgentBoundReport assess_bound(std::span<const StepRecord> series, double settle_fraction) {
    AgentBoundReport report;
    if (!series.empty()) {
        report.agent = series.front().agent;
        report.controller = series.front().controller;
    }
    report.inputs = bound_inputs(series);
    std::vector<double> w;
    w.reserve(series.size());
    for (const auto& r : series) w.push_back(r.wasserstein);
    if (report.inputs.lambda < 1.0) {
        report.bound = ultimate_bound(report.inputs);
        report.check = verify_bound(w, *report.bound, settle_fraction);
    } else {
        report.check.pass = false;
        report.check.settle_step =
            static_cast<std::int64_t>(std::floor(settle_fraction * static_cast<double>(w.size())));
    }
    return report;
}

}  // namespace d2oc
