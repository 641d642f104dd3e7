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

#include "rzf/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rzf {

namespace {

// LMMSE filter R (R + c I)^{-1}; in the shared eigenbasis this is the
// eigenvalue map delta_j / (delta_j + c).
Eigen::MatrixXd lmmse_filter(const SpectralModel& model) {
    Eigen::VectorXd ratio(model.m);
    for (int j = 0; j < model.m; ++j) {
        const double denom = model.delta(j) + model.c;
        ratio(j) = denom > 0.0 ? model.delta(j) / denom : 0.0;
    }
    return model.basis * ratio.asDiagonal() * model.basis.transpose();
}

}  // namespace

int SystemConfig::m() const { return static_cast<int>(std::floor(zeta * n + 0.5)); }

double SystemConfig::achieved_zeta() const { return static_cast<double>(m()) / n; }

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (n < 1) fail("n must be a positive integer, got " + std::to_string(n));
    if (!(zeta > 0.0)) fail("zeta must be > 0, got " + std::to_string(zeta));
    if (m() < 1) fail("m = round(zeta*n) must be >= 1");
    if (!(tau > 1.0)) fail("tau must be > 1, got " + std::to_string(tau));
    if (!(tau_t >= 1.0)) fail("tau_t must be >= 1 (orthogonal pilots need T_t >= n), got " +
                              std::to_string(tau_t));
    if (!(tau_t < tau)) fail("tau_t must be < tau so that tau_d = tau - tau_t > 0");
    if (!std::isfinite(rho_db)) fail("rho_db must be finite");
    if (!(rho_linear() > 0.0)) fail("rho must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1), got " + std::to_string(alpha));
    if (lambda.has_value() && !(*lambda >= 0.0))
        fail("lambda must be >= 0, got " + std::to_string(*lambda));
    if (correlation.kind != CorrelationKind::kFile &&
        correlation.kind != CorrelationKind::kIdentity) {
        if (correlation.r < 0.0 || correlation.r >= 1.0)
            fail("correlation coefficient r must lie in [0,1), got " +
                 std::to_string(correlation.r));
    }
    if (correlation.kind == CorrelationKind::kFile && correlation.path.empty())
        fail("correlation model 'file' requires a path");
}

PowerSplit derive_powers(const SystemConfig& cfg) {
    cfg.validate();
    const double tau_d = cfg.tau_d();
    if (!(tau_d > 0.0)) throw std::invalid_argument("derive_powers: tau_d must be positive");
    const double rho = cfg.rho_linear();
    PowerSplit split;
    split.tau_d = tau_d;
    split.rho_d = cfg.alpha * rho * cfg.tau / tau_d;
    split.rho_t = (1.0 - cfg.alpha) * rho * cfg.tau / cfg.tau_t;
    return split;
}

Eigen::MatrixXd sample_true_channel(const Eigen::MatrixXd& R_sqrt, int n, Rng& rng) {
    return R_sqrt * gaussian_matrix(static_cast<int>(R_sqrt.rows()), n, rng);
}

Eigen::MatrixXd simulate_training(const Eigen::MatrixXd& A, const SpectralModel& model, Rng& rng) {
    if (A.rows() != model.m)
        throw std::invalid_argument("simulate_training: channel has " + std::to_string(A.rows()) +
                                    " rows but the model expects " + std::to_string(model.m));
    const int n = static_cast<int>(A.cols());
    Eigen::MatrixXd noisy = A + std::sqrt(model.c) * gaussian_matrix(model.m, n, rng);
    return lmmse_filter(model) * noisy;
}

Eigen::MatrixXd simulate_training_pilot_matrix(const Eigen::MatrixXd& A, const SpectralModel& model,
                                               double rho_t, int T_t, Rng& rng) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (m != model.m) throw std::invalid_argument("simulate_training_pilot_matrix: row mismatch");
    if (T_t < n)
        throw std::invalid_argument("simulate_training_pilot_matrix: orthogonal pilots need T_t >= n");

    // Orthogonal pilots with X_t X_t^T = T_t I_n: scaled identity rows.
    Eigen::MatrixXd Xt = Eigen::MatrixXd::Zero(n, T_t);
    for (int i = 0; i < n; ++i) Xt(i, i) = std::sqrt(static_cast<double>(T_t));

    Eigen::MatrixXd Wt = gaussian_matrix(m, T_t, rng);
    Eigen::MatrixXd Yt = std::sqrt(rho_t / n) * A * Xt + Wt;

    // 1/T_t-normalised sufficient statistic: sqrt(n/rho_t) (1/T_t) Y_t X_t^T = A + Z,
    // Z entries N(0, n/(T_t rho_t)) = N(0, c).
    Eigen::MatrixXd suff = std::sqrt(n / rho_t) / T_t * (Yt * Xt.transpose());
    return lmmse_filter(model) * suff;
}

ChannelInstance sample_estimate_direct(const SpectralModel& model, int n, Rng& rng) {
    return ChannelSampler(model).direct(n, rng);
}

ChannelSampler::ChannelSampler(const SpectralModel& model)
    : model_(model),
      sqrt_r_(model.sqrt_r()),
      sqrt_r_ahat_(model.sqrt_r_ahat()),
      sqrt_r_delta_(model.sqrt_r_delta()),
      lmmse_filter_(lmmse_filter(model)) {}

ChannelInstance ChannelSampler::direct(int n, Rng& rng) const {
    ChannelInstance inst;
    inst.A_hat = sqrt_r_ahat_ * gaussian_matrix(model_.m, n, rng);
    inst.A = inst.A_hat - sqrt_r_delta_ * gaussian_matrix(model_.m, n, rng);
    inst.Delta = inst.A_hat - inst.A;  // definitional, exact in floating point
    return inst;
}

ChannelInstance ChannelSampler::faithful(int n, Rng& channel_rng, Rng& training_rng) const {
    ChannelInstance inst;
    inst.A = sqrt_r_ * gaussian_matrix(model_.m, n, channel_rng);
    Eigen::MatrixXd noisy =
        inst.A + std::sqrt(model_.c) * gaussian_matrix(model_.m, n, training_rng);
    inst.A_hat = lmmse_filter_ * noisy;
    inst.Delta = inst.A_hat - inst.A;
    return inst;
}

}  // namespace rzf
