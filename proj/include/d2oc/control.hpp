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
#ifndef D2OC_CONTROL_HPP
#define D2OC_CONTROL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>

#include "d2oc/dynamics.hpp"
#include "d2oc/reference.hpp"
#include "d2oc/transport.hpp"

namespace d2oc {

/// blkdiag(sqrt(pi_sums[h]) I_d) for h = 0..H-1.
Eigen::MatrixXd build_omega(std::span<const double> pi_sums, Eigen::Index d);

/// One-step barycenter drift dt * sum_j pi_j v(q_j, k) / sum_j pi_j under a
/// frozen assignment.
Point predict_drift(const LocalAssignment& assignment, std::span<const Point> positions,
                    const VelocityField& field, const FlowState& flow, double dt, std::int64_t k);

/// Stacked horizon targets: Q̄ and the feedforward drift ΔQ̄.
struct HorizonReference {
    Eigen::VectorXd qbar_stack;
    Eigen::VectorXd drift_stack;

    /// Current barycenter repeated over the horizon, no drift.
    static HorizonReference nominal(const Eigen::VectorXd& qbar, int horizon);
    /// Same Q̄, with block h of the drift equal to (h + 1) * drift.
    static HorizonReference feedforward(const Eigen::VectorXd& qbar, const Eigen::VectorXd& drift,
                                        int horizon);
};

/// Unconstrained QP  J(U) = ½ Uᵀ H U + fᵀ U + const.
struct QpProblem {
    Eigen::MatrixXd hessian;         // 2((ΩΘ)ᵀ(ΩΘ) + R)
    Eigen::VectorXd gradient;        // 2(ΩΘ)ᵀ Ω (Φx − Q̄)
    Eigen::MatrixXd omega;
    Eigen::MatrixXd weighted_theta;  // ΩΘ
    Eigen::LLT<Eigen::MatrixXd> factor;
};

QpProblem assemble_qp(const LiftedSystem& lifted, const Eigen::MatrixXd& omega,
                      const Eigen::VectorXd& x, const HorizonReference& reference,
                      const Eigen::MatrixXd& R);

/// U* = −H⁻¹ f, through the Cholesky factor.
Eigen::VectorXd solve_nominal(const QpProblem& qp);

/// U_ff = −H⁻¹ f + H⁻¹ (ΩΘ)ᵀ Ω ΔQ̄. With ΔQ̄ = 0 this is bit-identical to
/// solve_nominal.
Eigen::VectorXd solve_feedforward(const QpProblem& qp, const LiftedSystem& lifted,
                                  const Eigen::MatrixXd& omega,
                                  const Eigen::VectorXd& drift_stack);

/// P = 2 ΩΘ H⁻¹ (ΩΘ)ᵀ, symmetrized.
Eigen::MatrixXd projection_matrix(const QpProblem& qp);

struct SpectralNorms {
    double p_norm = 0.0;  // ||P||_2
    double lambda = 0.0;  // ||I − P||_2
};

/// Both norms from one symmetric eigendecomposition of P.
SpectralNorms spectral_norms(const Eigen::MatrixXd& P);

struct ErrorReport {
    Eigen::VectorXd e_w;       // (I − P)ΩΓ + ½PΩΔQ̄
    Eigen::VectorXd e0_total;  // (I − P)ΩΓ − ΩΔQ̄
    std::optional<double> ratio;
    double p_norm = 0.0;
    double lambda = 0.0;

    /// Throws UndefinedRatio when |E0| is below 1e-12.
    double require_ratio() const;
};

inline constexpr double kUndefinedRatioThreshold = 1e-12;

/**
 * @brief Weighted tracking error of the feedforward law against the nominal one.
 *
 * Checks e_w = E0 + (I + ½P)ΩΔQ̄ before returning.
 */
ErrorReport error_decomposition(const LiftedSystem& lifted, const Eigen::MatrixXd& omega,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& qbar_stack,
                                const Eigen::VectorXd& drift_stack, const Eigen::MatrixXd& R);

/// Same, reusing an assembled QP and its projection.
ErrorReport error_decomposition(const QpProblem& qp, const LiftedSystem& lifted,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& qbar_stack,
                                const Eigen::VectorXd& drift_stack, const Eigen::MatrixXd& P,
                                const SpectralNorms& norms);

}  // namespace d2oc

#endif  // D2OC_CONTROL_HPP
