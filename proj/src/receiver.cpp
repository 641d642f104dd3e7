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

#include "rzf/receiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rzf {

DataPhase simulate_data_phase(const Eigen::MatrixXd& A, const Eigen::VectorXd& x0, double rho_d,
                              Rng& rng) {
    if (A.cols() != x0.size())
        throw std::invalid_argument("simulate_data_phase: A has " + std::to_string(A.cols()) +
                                    " columns but x0 has " + std::to_string(x0.size()) +
                                    " entries");
    if (!(rho_d > 0.0)) throw std::invalid_argument("simulate_data_phase: rho_d must be > 0");
    DataPhase phase;
    phase.x0 = x0;
    phase.w = gaussian_vector(static_cast<int>(A.rows()), rng);
    phase.y = std::sqrt(rho_d / static_cast<double>(x0.size())) * (A * x0) + phase.w;
    return phase;
}

Eigen::VectorXd rzf_estimate(const Eigen::MatrixXd& A_hat, const Eigen::VectorXd& y, double rho_d,
                             double lambda) {
    const auto m = A_hat.rows();
    const auto n = A_hat.cols();
    if (m != y.size())
        throw std::invalid_argument("rzf_estimate: A_hat has " + std::to_string(m) +
                                    " rows but y has " + std::to_string(y.size()) + " entries");
    if (!(rho_d > 0.0)) throw std::invalid_argument("rzf_estimate: rho_d must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("rzf_estimate: lambda must be >= 0");
    if (lambda == 0.0 && m < n)
        throw std::invalid_argument("rzf_estimate: zero-forcing (lambda = 0) requires m >= n "
                                    "and a full-column-rank channel estimate");

    const Eigen::MatrixXd At = std::sqrt(rho_d / static_cast<double>(n)) * A_hat;
    Eigen::MatrixXd gram = At.transpose() * At;
    gram.diagonal().array() += rho_d * lambda;
    const Eigen::VectorXd rhs = At.transpose() * y;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("rzf_estimate: factorisation of the regularised Gram matrix "
                                 "failed (lambda = " + std::to_string(lambda) + ")");
    if (lambda == 0.0) {
        // The residual alone cannot expose a rank-deficient but consistent
        // system, so the pivots are checked directly.
        const Eigen::VectorXd& pivots = ldlt.vectorD();
        if (pivots.maxCoeff() <= 0.0 || pivots.minCoeff() < 1e-10 * pivots.maxCoeff()) {
            throw std::runtime_error("rzf_estimate: zero-forcing rank condition violated "
                                     "(At^T At is singular; the channel estimate is rank "
                                     "deficient)");
        }
    }
    Eigen::VectorXd x_hat = ldlt.solve(rhs);

    const double residual = (gram * x_hat - rhs).norm();
    if (residual > 1e-8 * rhs.norm()) {
        throw std::runtime_error(
            "rzf_estimate: normal-equation residual " + std::to_string(residual) +
            " exceeds 1e-8 * ||At^T y||" +
            (lambda == 0.0 ? " (zero-forcing rank condition violated: At^T At is singular)" : ""));
    }
    return x_hat;
}

Eigen::VectorXd detect(const Eigen::VectorXd& x_hat) {
    Eigen::VectorXd out(x_hat.size());
    for (Eigen::Index i = 0; i < x_hat.size(); ++i) out(i) = x_hat(i) >= 0.0 ? 1.0 : -1.0;
    return out;
}

Metrics empirical_metrics(const Eigen::VectorXd& x0, const Eigen::VectorXd& x_hat) {
    if (x0.size() != x_hat.size())
        throw std::invalid_argument("empirical_metrics: length mismatch (" +
                                    std::to_string(x0.size()) + " vs " +
                                    std::to_string(x_hat.size()) + ")");
    const auto n = static_cast<double>(x0.size());
    Metrics metrics;
    metrics.mse = (x0 - x_hat).squaredNorm() / n;
    int errors = 0;
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
        const double sign = x_hat(i) >= 0.0 ? 1.0 : -1.0;
        if (sign != x0(i)) ++errors;
    }
    metrics.ber = errors / n;
    return metrics;
}

DetectionResult detect_and_score(const Eigen::VectorXd& x0, Eigen::VectorXd x_hat) {
    DetectionResult result;
    const Metrics metrics = empirical_metrics(x0, x_hat);
    result.x_star = detect(x_hat);
    result.x_hat = std::move(x_hat);
    result.mse = metrics.mse;
    result.ber = metrics.ber;
    return result;
}

}  // namespace rzf
