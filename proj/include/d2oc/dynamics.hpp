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
#ifndef D2OC_DYNAMICS_HPP
#define D2OC_DYNAMICS_HPP

#include <Eigen/Dense>

namespace d2oc {

/// Entrywise zero threshold used when probing C·A^(l-1)·B.
double markov_zero_tolerance(const Eigen::MatrixXd& B, const Eigen::MatrixXd& C);

/**
 * @brief Smallest r <= max_probe with C·A^(r-1)·B nonzero.
 *
 * Throws NoRelativeDegree if every probed Markov parameter vanishes, and
 * DimensionMismatch for inconsistent matrices.
 */
int relative_degree(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                    int max_probe);

/**
 * @brief Discrete-time LTI plant x(k+1) = A x(k) + B u(k), y(k) = C x(k).
 *
 * Immutable after construction; the output relative degree is computed once
 * in the constructor (probing up to the state dimension n).
 */
class LtiModel {
public:
    LtiModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C, double dt);

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& B() const { return B_; }
    const Eigen::MatrixXd& C() const { return C_; }
    double dt() const { return dt_; }
    int relative_degree() const { return r_; }

    Eigen::Index state_dim() const { return A_.rows(); }
    Eigen::Index input_dim() const { return B_.cols(); }
    Eigen::Index output_dim() const { return C_.rows(); }

    Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
        return A_ * x + B_ * u;
    }
    Eigen::VectorXd output(const Eigen::VectorXd& x) const { return C_ * x; }

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd B_;
    Eigen::MatrixXd C_;
    double dt_;
    int r_;
};

/**
 * @brief Horizon prediction Y = theta·U + phi·x.
 *
 * Y stacks y(k+r) .. y(k+r+H-1); U stacks u(k) .. u(k+H-1).
 */
struct LiftedSystem {
    Eigen::MatrixXd theta;  // (dH) x (mH), lower block triangular
    Eigen::MatrixXd phi;    // (dH) x n
    int horizon = 0;
    int relative_degree = 0;
    Eigen::Index output_dim = 0;
    Eigen::Index input_dim = 0;

    Eigen::VectorXd predict(const Eigen::VectorXd& x, const Eigen::VectorXd& U) const {
        return theta * U + phi * x;
    }
};

LiftedSystem build_lifted(const LtiModel& model, int horizon);

/**
 * Linearized quadcopter about hover, state [p_x, v_x, θ, θ̇, p_y, v_y, φ, φ̇].
 * Per axis, forward-Euler of ṗ = v, v̇ = g·θ, θ̇ = ω, ω̇ = (u - ω)/tau.
 * Inputs are the two attitude-rate commands; the output is (p_x, p_y).
 */
LtiModel make_quadcopter_model(double dt, double g, double tau);

}  // namespace d2oc

#endif  // D2OC_DYNAMICS_HPP
