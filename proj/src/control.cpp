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
#include "d2oc/control.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "d2oc/error.hpp"

namespace d2oc {

Eigen::MatrixXd build_omega(std::span<const double> pi_sums, Eigen::Index d) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "output dimension must be >= 1");
    const auto H = static_cast<Eigen::Index>(pi_sums.size());
    Eigen::VectorXd diag(H * d);
    for (Eigen::Index h = 0; h < H; ++h) {
        if (pi_sums[h] < 0.0) throw Error(ErrorKind::InvalidArgument, "negative transport mass");
        diag.segment(h * d, d).setConstant(std::sqrt(pi_sums[h]));
    }
    return diag.asDiagonal();
}

Point predict_drift(const LocalAssignment& assignment, std::span<const Point> positions,
                    const VelocityField& field, const FlowState& flow, double dt, std::int64_t k) {
    Point acc = Point::Zero();
    const double mass = assignment.mass();
    if (!(mass > 0.0)) return acc;
    for (std::size_t s = 0; s < assignment.indices.size(); ++s) {
        acc += assignment.pi[s] * velocity_at(field, flow, positions[assignment.indices[s]], k);
    }
    return dt * acc / mass;
}

HorizonReference HorizonReference::nominal(const Eigen::VectorXd& qbar, int horizon) {
    const Eigen::Index d = qbar.size();
    HorizonReference ref;
    ref.qbar_stack = qbar.replicate(horizon, 1);
    ref.drift_stack = Eigen::VectorXd::Zero(d * horizon);
    return ref;
}

HorizonReference HorizonReference::feedforward(const Eigen::VectorXd& qbar,
                                               const Eigen::VectorXd& drift, int horizon) {
    if (drift.size() != qbar.size()) {
        throw Error(ErrorKind::DimensionMismatch, "drift and barycenter differ in dimension");
    }
    const Eigen::Index d = qbar.size();
    HorizonReference ref;
    ref.qbar_stack = qbar.replicate(horizon, 1);
    ref.drift_stack.resize(d * horizon);
    for (int h = 0; h < horizon; ++h) {
        ref.drift_stack.segment(h * d, d) = static_cast<double>(h + 1) * drift;
    }
    return ref;
}

QpProblem assemble_qp(const LiftedSystem& lifted, const Eigen::MatrixXd& omega,
                      const Eigen::VectorXd& x, const HorizonReference& reference,
                      const Eigen::MatrixXd& R) {
    const Eigen::Index rows = lifted.theta.rows();
    const Eigen::Index cols = lifted.theta.cols();
    if (omega.rows() != rows || omega.cols() != rows) {
        throw Error(ErrorKind::DimensionMismatch, "omega must be (dH)x(dH)");
    }
    if (R.rows() != cols || R.cols() != cols) {
        throw Error(ErrorKind::DimensionMismatch, "R must be (mH)x(mH)");
    }
    if (x.size() != lifted.phi.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension mismatch");
    }
    if (reference.qbar_stack.size() != rows) {
        throw Error(ErrorKind::DimensionMismatch, "reference stack must have dH entries");
    }
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + R.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::NotSymmetric, "R must be symmetric");
    }

    QpProblem qp;
    qp.omega = omega;
    qp.weighted_theta = omega * lifted.theta;
    qp.hessian = 2.0 * (qp.weighted_theta.transpose() * qp.weighted_theta + R);
    const Eigen::VectorXd gamma = lifted.phi * x - reference.qbar_stack;
    qp.gradient = 2.0 * qp.weighted_theta.transpose() * (omega * gamma);
    qp.factor.compute(qp.hessian);
    if (qp.factor.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "Cholesky of the QP Hessian failed");
    }
    return qp;
}

Eigen::VectorXd solve_nominal(const QpProblem& qp) {
    return qp.factor.solve(-qp.gradient);
}

Eigen::VectorXd solve_feedforward(const QpProblem& qp, const LiftedSystem& lifted,
                                  const Eigen::MatrixXd& omega,
                                  const Eigen::VectorXd& drift_stack) {
    if (drift_stack.size() != lifted.theta.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "drift stack must have dH entries");
    }
    const Eigen::VectorXd push = (omega * lifted.theta).transpose() * (omega * drift_stack);
    // −H⁻¹f + H⁻¹g as one solve of −(f − g); f − 0 keeps f's bits.
    return qp.factor.solve(-(qp.gradient - push));
}

Eigen::MatrixXd projection_matrix(const QpProblem& qp) {
    const Eigen::MatrixXd solved = qp.factor.solve(qp.weighted_theta.transpose());
    const Eigen::MatrixXd P = 2.0 * qp.weighted_theta * solved;
    return 0.5 * (P + P.transpose());
}

SpectralNorms spectral_norms(const Eigen::MatrixXd& P) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    SpectralNorms out;
    out.p_norm = ev.cwiseAbs().maxCoeff();
    out.lambda = (1.0 - ev.array()).abs().maxCoeff();
    return out;
}

double ErrorReport::require_ratio() const {
    if (!ratio) throw Error(ErrorKind::UndefinedRatio, "nominal error norm is zero");
    return *ratio;
}

ErrorReport error_decomposition(const QpProblem& qp, const LiftedSystem& lifted,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& qbar_stack,
                                const Eigen::VectorXd& drift_stack, const Eigen::MatrixXd& P,
                                const SpectralNorms& norms) {
    const Eigen::Index rows = lifted.theta.rows();
    if (drift_stack.size() != rows || qbar_stack.size() != rows || P.rows() != rows) {
        throw Error(ErrorKind::DimensionMismatch, "stacked vectors must have dH entries");
    }
    const Eigen::VectorXd omega_gamma = qp.omega * (lifted.phi * x - qbar_stack);
    const Eigen::VectorXd omega_drift = qp.omega * drift_stack;
    const Eigen::VectorXd feedback = omega_gamma - P * omega_gamma;  // (I − P)ΩΓ

    ErrorReport report;
    report.e_w = feedback + 0.5 * (P * omega_drift);
    report.e0_total = feedback - omega_drift;
    report.p_norm = norms.p_norm;
    report.lambda = norms.lambda;

    const Eigen::VectorXd identity_rhs = report.e0_total + omega_drift + 0.5 * (P * omega_drift);
    const double scale = 1.0 + omega_gamma.norm() + omega_drift.norm();
    if ((report.e_w - identity_rhs).norm() > 1e-9 * scale) {
        throw Error(ErrorKind::InvalidArgument, "error decomposition identity violated");
    }
    const double e0 = report.e0_total.norm();
    if (e0 >= kUndefinedRatioThreshold) report.ratio = report.e_w.norm() / e0;
    return report;
}

ErrorReport error_decomposition(const LiftedSystem& lifted, const Eigen::MatrixXd& omega,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& qbar_stack,
                                const Eigen::VectorXd& drift_stack, const Eigen::MatrixXd& R) {
    HorizonReference ref;
    ref.qbar_stack = qbar_stack;
    ref.drift_stack = drift_stack;
    const QpProblem qp = assemble_qp(lifted, omega, x, ref, R);
    const Eigen::MatrixXd P = projection_matrix(qp);
    return error_decomposition(qp, lifted, x, qbar_stack, drift_stack, P, spectral_norms(P));
}

}  // namespace d2oc
