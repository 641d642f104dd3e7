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

#include <vector>

#include "rzf/asymptotics.hpp"
#include "rzf/channel.hpp"

namespace rzf {

/**
 * Objective for the data power ratio search. kBer minimises the asymptotic
 * BER directly; kMaxMu maximises mu_star instead, which is kept only for
 * comparison — across alpha it drives alpha towards 1 and does not minimise
 * the BER.
 */
enum class PowerObjective { kMse, kBer, kMaxMu };

struct AlphaOptions {
    double tol = 1e-5;             // golden-section tolerance in alpha
    bool recompute_lambda = true;  // re-derive lambda_star at every alpha
    RdeltaReading reading = RdeltaReading::kDiagonalMean;
};

/**
 * Golden-section search of the asymptotic objective over alpha in
 * [1e-3, 1-1e-3]; the regulariser is held at its optimal value. Every
 * evaluation re-derives the power split and the spectral model (the
 * estimation noise level c depends on rho_t). Falls back to a 1000-point
 * grid scan if the golden-section result is inconsistent with a coarse scan.
 */
double optimize_alpha(const SystemConfig& cfg, PowerObjective objective,
                      const AlphaOptions& options = {});

/**
 * Closed-form optimum for the uncorrelated channel:
 *
 *   theta = (1 + rho*tau) / (rho*tau*(1 - 1/tau_d))
 *   alpha = theta - sqrt(theta(theta-1))  if tau_d > 1
 *           1/2                           if tau_d = 1
 *           theta + sqrt(theta(theta-1))  if tau_d < 1
 *
 * Throws if the result falls outside (0,1).
 */
double closed_form_alpha(double rho, double tau, double tau_d);

struct PowerAllocationResult {
    double alpha_mse = 0.0;
    double alpha_ber = 0.0;
    double alpha_closed_form = 0.0;
    bool grid_fallback = false;  // a golden-section run was rejected

    struct Sample {
        double alpha;
        double mse;
        double ber;
    };
    std::vector<Sample> objective_curve;
};

PowerAllocationResult allocate_power(const SystemConfig& cfg, const AlphaOptions& options = {},
                                     int curve_samples = 41);

}  // namespace rzf
