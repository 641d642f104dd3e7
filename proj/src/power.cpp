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

#include "rzf/power.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rzf {

namespace {

constexpr double kAlphaLo = 1e-3;
constexpr double kAlphaHi = 1.0 - 1e-3;

// One asymptotic evaluation at a given data power ratio. The spectral model
// is rebuilt from the cached eigendecomposition because c depends on rho_t.
struct AlphaEvaluator {
    const SystemConfig& cfg;
    const SpectralModel& base;
    const AlphaOptions& options;
    std::optional<double> fixed_lambda;  // set when recompute_lambda is off

    AsymptoticPrediction at(double alpha) const {
        SystemConfig point = cfg;
        point.alpha = alpha;
        const PowerSplit split = derive_powers(point);
        const SpectralModel model = base.with_noise_level(1.0 / (point.tau_t * split.rho_t));
        std::optional<double> lambda = fixed_lambda;
        if (!lambda.has_value()) lambda = optimal_lambda(model, split.rho_d);
        return predict(model, split.rho_d, lambda, cfg.n, options.reading);
    }

    double objective(double alpha, PowerObjective which) const {
        const AsymptoticPrediction p = at(alpha);
        switch (which) {
            case PowerObjective::kMse: return p.mse;
            case PowerObjective::kBer: return p.ber;
            case PowerObjective::kMaxMu: return -p.fixed_point.mu;
        }
        throw std::logic_error("unreachable power objective");
    }
};

double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double optimize_alpha(const SystemConfig& cfg, PowerObjective objective,
                      const AlphaOptions& options) {
    SystemConfig base_cfg = cfg;
    base_cfg.lambda.reset();  // the search runs at the optimal regulariser
    base_cfg.validate();

    const CorrelationMatrix R = build_correlation(base_cfg.correlation, base_cfg.m());
    const PowerSplit base_split = derive_powers(base_cfg);
    const SpectralModel base = spectral_model(R, base_cfg.tau_t, base_split.rho_t);

    AlphaEvaluator eval{base_cfg, base, options, std::nullopt};
    if (!options.recompute_lambda) {
        eval.fixed_lambda = optimal_lambda(base, base_split.rho_d);
    }
    auto f = [&](double alpha) { return eval.objective(alpha, objective); };

    const double alpha_golden = golden_section_min(f, kAlphaLo, kAlphaHi, options.tol);
    const double f_golden = f(alpha_golden);

    // Unimodality check against a coarse scan; a bracket that skipped a
    // better basin falls back to a dense grid.
    bool consistent = true;
    for (int i = 0; i <= 32; ++i) {
        const double alpha = kAlphaLo + (kAlphaHi - kAlphaLo) * i / 32.0;
        if (f(alpha) < f_golden - 1e-10 * (1.0 + std::abs(f_golden))) {
            consistent = false;
            break;
        }
    }
    if (consistent) return alpha_golden;

    double best_alpha = alpha_golden;
    double best_value = f_golden;
    for (int i = 0; i <= 1000; ++i) {
        const double alpha = kAlphaLo + (kAlphaHi - kAlphaLo) * i / 1000.0;
        const double value = f(alpha);
        if (value < best_value) {
            best_value = value;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

double closed_form_alpha(double rho, double tau, double tau_d) {
    if (!(rho > 0.0)) throw std::invalid_argument("closed_form_alpha: rho must be > 0");
    if (!(tau > 1.0)) throw std::invalid_argument("closed_form_alpha: tau must be > 1");
    if (!(tau_d > 0.0)) throw std::invalid_argument("closed_form_alpha: tau_d must be > 0");
    if (tau_d == 1.0) return 0.5;

    const double theta = (1.0 + rho * tau) / (rho * tau * (1.0 - 1.0 / tau_d));
    const double discriminant = theta * (theta - 1.0);
    if (!(discriminant >= 0.0)) {
        throw std::runtime_error("closed_form_alpha: theta*(theta-1) = " +
                                 std::to_string(discriminant) +
                                 " < 0, outside the validity regime");
    }
    const double alpha = tau_d > 1.0 ? theta - std::sqrt(discriminant)
                                     : theta + std::sqrt(discriminant);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::runtime_error("closed_form_alpha: result " + std::to_string(alpha) +
                                 " lies outside (0,1); parameters outside the validity regime");
    }
    return alpha;
}

PowerAllocationResult allocate_power(const SystemConfig& cfg, const AlphaOptions& options,
                                     int curve_samples) {
    PowerAllocationResult result;
    result.alpha_mse = optimize_alpha(cfg, PowerObjective::kMse, options);
    result.alpha_ber = optimize_alpha(cfg, PowerObjective::kBer, options);
    result.alpha_closed_form = closed_form_alpha(cfg.rho_linear(), cfg.tau, cfg.tau_d());

    if (curve_samples >= 2) {
        SystemConfig base_cfg = cfg;
        base_cfg.lambda.reset();
        const CorrelationMatrix R = build_correlation(base_cfg.correlation, base_cfg.m());
        const PowerSplit base_split = derive_powers(base_cfg);
        const SpectralModel base = spectral_model(R, base_cfg.tau_t, base_split.rho_t);
        AlphaEvaluator eval{base_cfg, base, options, std::nullopt};
        result.objective_curve.reserve(curve_samples);
        for (int i = 0; i < curve_samples; ++i) {
            const double alpha = kAlphaLo + (kAlphaHi - kAlphaLo) * i / (curve_samples - 1);
            const AsymptoticPrediction p = eval.at(alpha);
            result.objective_curve.push_back({alpha, p.mse, p.ber});
        }
    }
    return result;
}

}  // namespace rzf
