// SPDX-License-Identifier: Apache-2.0
//
// rzf-mimo: asymptotic analysis and simulation of the regularised
// zero-forcing receiver for correlated massive MIMO with imperfect CSI
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include "rzf/rng.hpp"

namespace rzf {

struct DataPhase {
    Eigen::VectorXd x0;  // BPSK symbols, +-1
    Eigen::VectorXd y;   // received signal
    Eigen::VectorXd w;   // noise, N(0, I)
};

// y = sqrt(rho_d/n) A x0 + w. The noise vector is kept so tests can strip it.
DataPhase simulate_data_phase(const Eigen::MatrixXd& A, const Eigen::VectorXd& x0, double rho_d,
                              Rng& rng);

/**
 * Ridge-regularised least squares on the channel estimate:
 *
 *     x_hat = (At^T At + rho_d*lambda I)^{-1} At^T y,   At = sqrt(rho_d/n) A_hat
 *
 * solved via a symmetric factorisation of the n x n regularised Gram matrix,
 * never an explicit inverse. The normal-equation residual is checked on
 * every call: ||(At^T At + rho_d*lambda I) x_hat - At^T y|| <= 1e-8 ||At^T y||.
 */
Eigen::VectorXd rzf_estimate(const Eigen::MatrixXd& A_hat, const Eigen::VectorXd& y, double rho_d,
                             double lambda);

// Entrywise sign; a tie at exactly 0 maps to +1.
Eigen::VectorXd detect(const Eigen::VectorXd& x_hat);

struct Metrics {
    double mse;  // (1/n) ||x0 - x_hat||^2
    double ber;  // fraction of sign disagreements
};

Metrics empirical_metrics(const Eigen::VectorXd& x0, const Eigen::VectorXd& x_hat);

struct DetectionResult {
    Eigen::VectorXd x_hat;   // soft RZF output
    Eigen::VectorXd x_star;  // hard decisions
    double mse;
    double ber;
};

DetectionResult detect_and_score(const Eigen::VectorXd& x0, Eigen::VectorXd x_hat);

}  // namespace rzf
