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
#include "d2oc/dynamics.hpp"

#include <string>
#include <vector>

#include "d2oc/error.hpp"

namespace d2oc {

namespace {

void check_dimensions(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& C) {
    if (A.rows() == 0 || A.rows() != A.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "A must be square and non-empty");
    }
    if (B.rows() != A.rows() || B.cols() == 0) {
        throw Error(ErrorKind::DimensionMismatch,
                    "B must have " + std::to_string(A.rows()) + " rows");
    }
    if (C.cols() != A.rows() || C.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch,
                    "C must have " + std::to_string(A.rows()) + " columns");
    }
}

}  // namespace

double markov_zero_tolerance(const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
    // ||.||_inf of a matrix is its max absolute row sum.
    const double c_inf = C.cwiseAbs().rowwise().sum().maxCoeff();
    const double b_inf = B.cwiseAbs().rowwise().sum().maxCoeff();
    return 1e-9 * (1.0 + c_inf * b_inf);
}

int relative_degree(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                    int max_probe) {
    check_dimensions(A, B, C);
    if (max_probe < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_probe must be >= 1");
    }
    const double tol = markov_zero_tolerance(B, C);
    Eigen::MatrixXd AlB = B;  // A^(l-1) B
    for (int l = 1; l <= max_probe; ++l) {
        if ((C * AlB).cwiseAbs().maxCoeff() > tol) return l;
        AlB = A * AlB;
    }
    throw Error(ErrorKind::NoRelativeDegree,
                "C·A^(l-1)·B vanishes for all l <= " + std::to_string(max_probe));
}

LtiModel::LtiModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C, double dt)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), dt_(dt), r_(0) {
    check_dimensions(A_, B_, C_);
    if (!(dt_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    r_ = d2oc::relative_degree(A_, B_, C_, static_cast<int>(A_.rows()));
}

LiftedSystem build_lifted(const LtiModel& model, int horizon) {
    if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
    const auto& A = model.A();
    const auto& B = model.B();
    const auto& C = model.C();
    check_dimensions(A, B, C);
    const int r = model.relative_degree();
    const Eigen::Index d = C.rows();
    const Eigen::Index m = B.cols();
    const Eigen::Index n = A.rows();

    // markov[s] = C A^(r-1+s) B for s = 0..H-1; powers[h] = C A^(r+h).
    std::vector<Eigen::MatrixXd> markov(horizon);
    Eigen::MatrixXd CA = C;
    for (int p = 0; p < r - 1; ++p) CA = CA * A;  // C A^(r-1)
    for (int s = 0; s < horizon; ++s) {
        markov[s] = CA * B;
        CA = CA * A;
    }

    LiftedSystem lifted;
    lifted.horizon = horizon;
    lifted.relative_degree = r;
    lifted.output_dim = d;
    lifted.input_dim = m;
    lifted.theta = Eigen::MatrixXd::Zero(d * horizon, m * horizon);
    lifted.phi.resize(d * horizon, n);

    Eigen::MatrixXd CAr = C;
    for (int p = 0; p < r; ++p) CAr = CAr * A;  // C A^r
    for (int h = 0; h < horizon; ++h) {
        lifted.phi.middleRows(h * d, d) = CAr;
        CAr = CAr * A;
        for (int l = 0; l <= h; ++l) {
            lifted.theta.block(h * d, l * m, d, m) = markov[h - l];
        }
    }
    return lifted;
}

LtiModel make_quadcopter_model(double dt, double g, double tau) {
    if (!(dt > 0.0) || !(g > 0.0) || !(tau > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "dt, g and tau must be positive");
    }
    Eigen::Matrix4d axis;
    axis << 1.0, dt, 0.0, 0.0,
            0.0, 1.0, dt * g, 0.0,
            0.0, 0.0, 1.0, dt,
            0.0, 0.0, 0.0, 1.0 - dt / tau;
    Eigen::Vector4d drive(0.0, 0.0, 0.0, dt / tau);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(8, 8);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(8, 2);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 8);
    A.topLeftCorner<4, 4>() = axis;
    A.bottomRightCorner<4, 4>() = axis;
    B.block<4, 1>(0, 0) = drive;
    B.block<4, 1>(4, 1) = drive;
    C(0, 0) = 1.0;
    C(1, 4) = 1.0;
    return LtiModel(std::move(A), std::move(B), std::move(C), dt);
}

}  // namespace d2oc
