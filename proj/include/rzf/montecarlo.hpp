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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rzf/asymptotics.hpp"
#include "rzf/channel.hpp"

namespace rzf {

struct TrialAggregate {
    int trials = 0;
    double mean_mse = 0.0;
    double mean_ber = 0.0;
    double stderr_mse = 0.0;  // NaN when trials < 2
    double stderr_ber = 0.0;
    std::uint64_t master_seed = 0;
    double achieved_zeta = 0.0;  // exact m/n
};

struct McOptions {
    int threads = 0;                // 0 = hardware concurrency
    bool faithful_training = false; // full training phase instead of direct sampling
    bool force_zero_noise = false;  // debug: w = 0 in the data phase
    RdeltaReading reading = RdeltaReading::kDiagonalMean;
};

/**
 * Runs independent trials of the full pipeline (channel, training, data
 * phase, RZF, metrics). Trial t draws its randomness from substreams keyed
 * by (master_seed, t, purpose); per-trial metrics are stored and reduced in
 * trial order, so the aggregate is bit-identical for any worker count.
 * A failing trial aborts the run with the trial index attached.
 */
TrialAggregate run_trials(const SystemConfig& cfg, int trials, std::uint64_t master_seed,
                          const McOptions& options = {});

enum class SweepVariable { kLambda, kRhoDb, kAlpha, kR };

std::string to_string(SweepVariable variable);
SweepVariable sweep_variable_from_string(const std::string& name);

struct SweepRow {
    double value = 0.0;
    std::optional<AsymptoticPrediction> asym;
    std::optional<TrialAggregate> mc;
    std::string error;  // empty on success
};

/**
 * Per value: fresh config with the variable substituted, analytics computed
 * once, Monte Carlo (when trials > 0) with a value-specific subseed. Errors
 * at one point are recorded in the row and the sweep continues.
 */
std::vector<SweepRow> sweep(const SystemConfig& cfg, SweepVariable variable,
                            const std::vector<double>& values, int trials,
                            std::uint64_t master_seed, const McOptions& options = {});

}  // namespace rzf
