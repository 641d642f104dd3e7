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

#include <optional>

#include <Eigen/Dense>

#include "rzf/correlation.hpp"
#include "rzf/rng.hpp"

namespace rzf {

/**
 * Scenario parameters. Dimensions grow as m = round(zeta*n); the block
 * consists of tau_t*n pilot symbols and (tau - tau_t)*n data symbols, with
 * the average power rho (given in dB) split between the two phases by the
 * data power ratio alpha.
 */
struct SystemConfig {
    int n = 0;             // transmit antennas
    double zeta = 1.0;     // receive/transmit ratio, m = round(zeta*n)
    double tau = 2.0;      // normalised coherence time, > 1
    double tau_t = 1.0;    // normalised pilot length, in [1, tau)
    double rho_db = 10.0;  // average power in dB
    double alpha = 0.5;    // data power ratio, in (0,1)
    std::optional<double> lambda;  // nullopt => optimal regulariser
    CorrelationSpec correlation;

    int m() const;                 // round half up
    double achieved_zeta() const;  // exact m/n
    double rho_linear() const { return std::pow(10.0, rho_db / 10.0); }
    double tau_d() const { return tau - tau_t; }

    // Throws std::invalid_argument naming the offending field and bound.
    void validate() const;
};

struct PowerSplit {
    double rho_t;  // pilot power
    double rho_d;  // data power
    double tau_d;  // normalised data length
};

// Conservation of time and energy: rho_t*tau_t + rho_d*tau_d == rho*tau,
// with rho_d*tau_d == alpha*rho*tau.
PowerSplit derive_powers(const SystemConfig& cfg);

struct ChannelInstance {
    Eigen::MatrixXd A;      // true channel
    Eigen::MatrixXd A_hat;  // LMMSE estimate
    Eigen::MatrixXd Delta;  // A_hat - A
};

// A = R^{1/2} H with H i.i.d. standard normal; columns i.i.d. N(0, R).
Eigen::MatrixXd sample_true_channel(const Eigen::MatrixXd& R_sqrt, int n, Rng& rng);

/**
 * LMMSE training in column sufficient-statistic form:
 *
 *     a_hat_k = R (R + c I)^{-1} (a_k + e_k),   e_k ~ N(0, c I)
 *
 * whose output covariance is exactly R_Ahat and whose error Delta is
 * independent of A_hat with covariance R_Delta.
 */
Eigen::MatrixXd simulate_training(const Eigen::MatrixXd& A, const SpectralModel& model, Rng& rng);

// Debug path that materialises an explicit orthogonal pilot matrix X_t with
// X_t X_t^T = T_t I and runs the full training phase Y_t = sqrt(rho_t/n) A X_t + W_t.
// Statistically identical to simulate_training; kept for the
// distributional-equivalence test.
Eigen::MatrixXd simulate_training_pilot_matrix(const Eigen::MatrixXd& A, const SpectralModel& model,
                                               double rho_t, int T_t, Rng& rng);

// Fast path: A_hat ~ N(0, R_Ahat) and Delta ~ N(0, R_Delta) drawn
// independently, A = A_hat - Delta. Distributionally identical to
// simulate_training composed with sample_true_channel.
ChannelInstance sample_estimate_direct(const SpectralModel& model, int n, Rng& rng);

// Precomputes the square-root factors once; safe to share across trials.
class ChannelSampler {
  public:
    explicit ChannelSampler(const SpectralModel& model);

    ChannelInstance direct(int n, Rng& rng) const;
    ChannelInstance faithful(int n, Rng& channel_rng, Rng& training_rng) const;

  private:
    const SpectralModel& model_;
    Eigen::MatrixXd sqrt_r_;
    Eigen::MatrixXd sqrt_r_ahat_;
    Eigen::MatrixXd sqrt_r_delta_;
    Eigen::MatrixXd lmmse_filter_;  // R (R + c I)^{-1}
};

}  // namespace rzf
