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
#ifndef D2OC_ANALYSIS_HPP
#define D2OC_ANALYSIS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "d2oc/control.hpp"
#include "d2oc/metrics.hpp"

namespace d2oc {

/// Inputs of the ultimate bound on the local Wasserstein distance.
struct BoundInputs {
    double lambda = 0.0;  // ||I − P||_2
    double p_norm = 0.0;  // ||P||_2
    double zeta = 0.0;    // sup ||Ω𝓗||, m
    double delta = 0.0;   // sup ||ΩΔQ̄||, m
    double c_bar = 0.0;   // sup C(k), m^2
};

/// Spectral norms of a symmetric P; NotSymmetric beyond 1e-9.
SpectralNorms contraction_factor(const Eigen::MatrixXd& P);

struct Disturbances {
    double zeta = 0.0;
    double delta = 0.0;
};

/// Stacked perturbation 1_H ⊗ (q̄(k+1) − q̄(k) − Δq̄(k)) for consecutive records.
Eigen::VectorXd stacked_perturbation(const StepRecord& now, const StepRecord& next);

/// Stacked ramp drift ΔQ̄ of a record (block h = (h + 1) Δq̄).
Eigen::VectorXd stacked_drift(const StepRecord& record);

/**
 * @brief zeta = max_k ||Ω𝓗(k)||, delta = max_k ||ΩΔQ̄(k)|| over one agent's series.
 *
 * 𝓗(k) is measured from realized barycenters, so it carries both the
 * discretization residual and any jump caused by re-selecting samples.
 */
Disturbances estimate_disturbances(std::span<const StepRecord> series);

/// Empirical BoundInputs: disturbances plus sup of lambda, ||P|| and C(k).
BoundInputs bound_inputs(std::span<const StepRecord> series);

/// sqrt(((lambda zeta + ½ ||P|| delta) / (1 − lambda))^2 + c_bar).
/// Throws NoContraction when lambda >= 1.
double ultimate_bound(const BoundInputs& inputs);

struct BoundCheck {
    bool pass = true;
    std::int64_t settle_step = 0;
    /// First step from which W stays at or below the bound to the end.
    std::optional<std::int64_t> entry_step;
    std::size_t violations = 0;
    std::optional<std::int64_t> first_violation;
    double max_excess = 0.0;  // max(W − bound) after settling, 0 when none
};

/// W(k) <= bound for every k >= settle_fraction * len (steps are indices).
BoundCheck verify_bound(std::span<const double> wasserstein, double bound, double settle_fraction);

struct RecursionResidual {
    std::int64_t step = 0;  // k of the pair (k, k+1)
    double residual = 0.0;
};

/**
 * Residual of e_w(k+1) = (I − P)(e_w(k) − Ω𝓗(k)) + ½ P Ω ΔQ̄(k+1) on
 * consecutive records whose assignment was not re-selected at k+1.
 */
std::vector<RecursionResidual> recursion_residuals(std::span<const StepRecord> series,
                                                   const Eigen::MatrixXd& P);

/// Bound inputs, bound and its verification for one agent's series.
struct AgentBoundReport {
    std::size_t agent = 0;
    Controller controller = Controller::Feedforward;
    BoundInputs inputs;
    std::optional<double> bound;  // empty when lambda >= 1
    BoundCheck check;
};

AgentBoundReport assess_bound(std::span<const StepRecord> series, double settle_fraction);

}  // namespace d2oc

#endif  // D2OC_ANALYSIS_HPP
