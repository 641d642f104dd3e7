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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rzf/power.hpp"

using namespace rzf;

namespace {

// Power-sweep reference settings: zeta=1.5, n=400, T=1000, T_t=n, rho=10 dB.
SystemConfig power_config(double r) {
    SystemConfig cfg;
    cfg.n = 400;
    cfg.zeta = 1.5;
    cfg.tau = 2.5;
    cfg.tau_t = 1.0;
    cfg.rho_db = 10.0;
    cfg.alpha = 0.5;
    if (r == 0.0) {
        cfg.correlation.kind = CorrelationKind::kIdentity;
    } else {
        cfg.correlation.kind = CorrelationKind::kStandardExponential;
        cfg.correlation.r = r;
    }
    return cfg;
}

}  // namespace

TEST_CASE("closed_form_alpha - branch values") {
    SECTION("tau_d = 1 gives the symmetric split") {
        CHECK(closed_form_alpha(10.0, 2.0, 1.0) == 0.5);
    }
    SECTION("tau_d > 1 branch") {
        // rho=10, tau=2.5, tau_d=1.5: theta = 26/(25/3) = 3.12,
        // alpha = 3.12 - sqrt(3.12*2.12) = 0.548152...
        const double theta = 26.0 / (25.0 / 3.0);
        const double expected = theta - std::sqrt(theta * (theta - 1.0));
        CHECK(closed_form_alpha(10.0, 2.5, 1.5) == Catch::Approx(expected).margin(1e-15));
        CHECK(closed_form_alpha(10.0, 2.5, 1.5) == Catch::Approx(0.548152).margin(1e-6));
    }
    SECTION("tau_d < 1 branch") {
        // rho=10, tau=1.5, tau_d=0.5: theta = 16/(-15), alpha ~ 0.418
        const double theta = 16.0 / (-15.0);
        const double expected = theta + std::sqrt(theta * (theta - 1.0));
        CHECK(closed_form_alpha(10.0, 1.5, 0.5) == Catch::Approx(expected).margin(1e-15));
        CHECK(closed_form_alpha(10.0, 1.5, 0.5) == Catch::Approx(0.418).margin(5e-4));
    }
}

TEST_CASE("closed_form_alpha - stays in (0,1) across regimes") {
    Rng rng(2025);
    std::uniform_real_distribution<double> rho_dist(0.05, 100.0);
    std::uniform_real_distribution<double> tau_dist(1.05, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double rho = rho_dist(rng);
        const double tau = tau_dist(rng);
        std::uniform_real_distribution<double> tau_d_dist(0.05, tau - 1.0);
        const double tau_d = tau_d_dist(rng);
        const double alpha = closed_form_alpha(rho, tau, tau_d);
        CHECK(alpha > 0.0);
        CHECK(alpha < 1.0);
    }
}

TEST_CASE("closed_form_alpha - rejects invalid parameters") {
    CHECK_THROWS_AS(closed_form_alpha(-1.0, 2.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_alpha(10.0, 0.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_alpha(10.0, 2.5, 0.0), std::invalid_argument);
}

TEST_CASE("optimize_alpha - uncorrelated optimum matches the closed form") {
    const SystemConfig cfg = power_config(0.0);
    const double alpha_mse = optimize_alpha(cfg, PowerObjective::kMse);
    const double closed = closed_form_alpha(10.0, 2.5, 1.5);
    CHECK(std::abs(alpha_mse - closed) <= 0.02);
}

TEST_CASE("optimize_alpha - MSE and BER objectives agree") {
    const SystemConfig cfg = power_config(0.4);
    const double alpha_mse = optimize_alpha(cfg, PowerObjective::kMse);
    const double alpha_ber = optimize_alpha(cfg, PowerObjective::kBer);
    CHECK(std::abs(alpha_mse - alpha_ber) <= 2e-3);
}

TEST_CASE("optimize_alpha - maximizing mu does not minimise the BER") {
    // The argmax-mu reduction pushes all energy into the data phase; it is
    // kept only as a comparison mode.
    const SystemConfig cfg = power_config(0.4);
    const double alpha_mu = optimize_alpha(cfg, PowerObjective::kMaxMu);
    const double alpha_ber = optimize_alpha(cfg, PowerObjective::kBer);
    CHECK(alpha_mu > 0.9);
    CHECK(std::abs(alpha_mu - alpha_ber) > 0.1);
}

TEST_CASE("optimize_alpha - minimum beats the endpoints") {
    const SystemConfig cfg = power_config(0.3);
    const double alpha_star = optimize_alpha(cfg, PowerObjective::kMse);

    auto mse_at = [&](double alpha) {
        SystemConfig point = cfg;
        point.alpha = alpha;
        const PowerSplit split = derive_powers(point);
        const CorrelationMatrix R = build_correlation(point.correlation, point.m());
        const SpectralModel model = spectral_model(R, point.tau_t, split.rho_t);
        return predict(model, split.rho_d, std::nullopt, point.n).mse;
    };
    const double at_star = mse_at(alpha_star);
    CHECK(at_star <= mse_at(0.05));
    CHECK(at_star <= mse_at(0.95));
}

TEST_CASE("optimize_alpha - fixed-lambda variant stays close") {
    const SystemConfig cfg = power_config(0.4);
    AlphaOptions fixed;
    fixed.recompute_lambda = false;
    const double alpha_fixed = optimize_alpha(cfg, PowerObjective::kMse, fixed);
    const double alpha_opt = optimize_alpha(cfg, PowerObjective::kMse);
    CHECK(std::abs(alpha_fixed - alpha_opt) < 0.05);
}

TEST_CASE("allocate_power - local-minimum certificate on the sampled curve") {
    const SystemConfig cfg = power_config(0.4);
    const PowerAllocationResult result = allocate_power(cfg, {}, 41);
    REQUIRE(result.objective_curve.size() == 41);
    CHECK(result.alpha_mse > 0.0);
    CHECK(result.alpha_mse < 1.0);
    CHECK(result.alpha_ber > 0.0);
    CHECK(result.alpha_ber < 1.0);
    CHECK(result.alpha_closed_form > 0.0);
    CHECK(result.alpha_closed_form < 1.0);

    // Nearest sampled neighbours of alpha_mse bracket a local minimum.
    const auto& curve = result.objective_curve;
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (std::abs(curve[i].alpha - result.alpha_mse) <
            std::abs(curve[nearest].alpha - result.alpha_mse))
            nearest = i;
    }
    REQUIRE(nearest > 0);
    REQUIRE(nearest + 1 < curve.size());
    CHECK(curve[nearest].mse <= curve[nearest - 1].mse + 1e-12);
    CHECK(curve[nearest].mse <= curve[nearest + 1].mse + 1e-12);
    CHECK(curve[nearest].ber <= curve[nearest - 1].ber + 1e-12);
    CHECK(curve[nearest].ber <= curve[nearest + 1].ber + 1e-12);
}
