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

#include "rzf/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rzf/receiver.hpp"

namespace rzf {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct TrialOutcome {
    double mse = 0.0;
    double ber = 0.0;
};

// Work is split into contiguous chunks; per-trial outcomes land in a
// preallocated slot indexed by trial, so the reduction below is a fixed
// sequential pass independent of the worker count.
void run_parallel(int trials, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            body(t);
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, trials);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

TrialAggregate run_trials(const SystemConfig& cfg, int trials, std::uint64_t master_seed,
                          const McOptions& options) {
    cfg.validate();
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");

    const int n = cfg.n;
    const int m = cfg.m();
    const PowerSplit split = derive_powers(cfg);
    const CorrelationMatrix R = build_correlation(cfg.correlation, m);
    const SpectralModel model = spectral_model(R, cfg.tau_t, split.rho_t);
    const double lambda = cfg.lambda.value_or(optimal_lambda(model, split.rho_d));
    const ChannelSampler sampler(model);

    std::vector<TrialOutcome> outcomes(trials);
    std::mutex error_mutex;
    std::string first_error;
    int first_error_trial = std::numeric_limits<int>::max();

    auto body = [&](int t) {
        try {
            Rng channel_rng = substream(master_seed, t, StreamPurpose::kChannel);
            ChannelInstance inst;
            if (options.faithful_training) {
                Rng training_rng = substream(master_seed, t, StreamPurpose::kTraining);
                inst = sampler.faithful(n, channel_rng, training_rng);
            } else {
                inst = sampler.direct(n, channel_rng);
            }

            Rng symbol_rng = substream(master_seed, t, StreamPurpose::kSymbols);
            const Eigen::VectorXd x0 = bpsk_vector(n, symbol_rng);

            Rng noise_rng = substream(master_seed, t, StreamPurpose::kNoise);
            DataPhase phase = simulate_data_phase(inst.A, x0, split.rho_d, noise_rng);
            if (options.force_zero_noise) phase.y -= phase.w;

            const Eigen::VectorXd x_hat = rzf_estimate(inst.A_hat, phase.y, split.rho_d, lambda);
            const Metrics metrics = empirical_metrics(x0, x_hat);
            outcomes[t] = {metrics.mse, metrics.ber};
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (t < first_error_trial) {
                first_error_trial = t;
                first_error = e.what();
            }
        }
    };
    run_parallel(trials, resolve_threads(options.threads), body);

    // A single failed trial aborts the run: silently skipping it would bias P_e.
    if (!first_error.empty()) {
        throw std::runtime_error("run_trials: trial " + std::to_string(first_error_trial) +
                                 " failed: " + first_error);
    }

    // Deterministic reduction in trial order.
    double sum_mse = 0.0, sum_ber = 0.0;
    for (const TrialOutcome& o : outcomes) {
        sum_mse += o.mse;
        sum_ber += o.ber;
    }
    const double mean_mse = sum_mse / trials;
    const double mean_ber = sum_ber / trials;
    double var_mse = 0.0, var_ber = 0.0;
    for (const TrialOutcome& o : outcomes) {
        var_mse += (o.mse - mean_mse) * (o.mse - mean_mse);
        var_ber += (o.ber - mean_ber) * (o.ber - mean_ber);
    }

    TrialAggregate agg;
    agg.trials = trials;
    agg.mean_mse = mean_mse;
    agg.mean_ber = mean_ber;
    if (trials >= 2) {
        agg.stderr_mse = std::sqrt(var_mse / (trials - 1)) / std::sqrt(double(trials));
        agg.stderr_ber = std::sqrt(var_ber / (trials - 1)) / std::sqrt(double(trials));
    } else {
        agg.stderr_mse = std::numeric_limits<double>::quiet_NaN();
        agg.stderr_ber = std::numeric_limits<double>::quiet_NaN();
    }
    agg.master_seed = master_seed;
    agg.achieved_zeta = cfg.achieved_zeta();
    return agg;
}

std::string to_string(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::kLambda: return "lambda";
        case SweepVariable::kRhoDb: return "rho_db";
        case SweepVariable::kAlpha: return "alpha";
        case SweepVariable::kR: return "r";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
    if (name == "lambda") return SweepVariable::kLambda;
    if (name == "rho_db") return SweepVariable::kRhoDb;
    if (name == "alpha") return SweepVariable::kAlpha;
    if (name == "r") return SweepVariable::kR;
    throw std::invalid_argument("unknown sweep variable '" + name +
                                "' (expected lambda, rho_db, alpha or r)");
}

namespace {

SystemConfig substitute(const SystemConfig& base, SweepVariable variable, double value) {
    SystemConfig cfg = base;
    switch (variable) {
        case SweepVariable::kLambda: cfg.lambda = value; break;
        case SweepVariable::kRhoDb: cfg.rho_db = value; break;
        case SweepVariable::kAlpha: cfg.alpha = value; break;
        case SweepVariable::kR:
            if (cfg.correlation.kind != CorrelationKind::kExponential &&
                cfg.correlation.kind != CorrelationKind::kStandardExponential) {
                throw std::invalid_argument("sweep over r requires an exponential correlation model");
            }
            cfg.correlation.r = value;
            break;
    }
    return cfg;
}

}  // namespace

std::vector<SweepRow> sweep(const SystemConfig& cfg, SweepVariable variable,
                            const std::vector<double>& values, int trials,
                            std::uint64_t master_seed, const McOptions& options) {
    if (values.empty()) throw std::invalid_argument("sweep: values must be nonempty");

    // The eigendecomposition of R is shared across points unless r itself is
    // swept; only the noise level c moves with rho or alpha.
    std::optional<SpectralModel> base_model;
    if (variable != SweepVariable::kR) {
        try {
            const CorrelationMatrix R = build_correlation(cfg.correlation, cfg.m());
            base_model = spectral_model(R, cfg.tau_t, derive_powers(cfg).rho_t);
        } catch (const std::exception&) {
            // Per-point construction below reports the failure per row.
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow row;
        row.value = values[i];
        try {
            const SystemConfig point = substitute(cfg, variable, values[i]);
            point.validate();
            const PowerSplit split = derive_powers(point);
            SpectralModel model =
                base_model.has_value()
                    ? base_model->with_noise_level(1.0 / (point.tau_t * split.rho_t))
                    : spectral_model(build_correlation(point.correlation, point.m()), point.tau_t,
                                     split.rho_t);
            row.asym = predict(model, split.rho_d, point.lambda, point.n, options.reading);
            if (trials > 0) {
                row.mc = run_trials(point, trials, derive_seed(master_seed, i), options);
            }
        } catch (const std::exception& e) {
            // A diverging point must not kill the figure; record and move on.
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rzf
