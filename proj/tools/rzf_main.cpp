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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rzf/experiment.hpp"

namespace {

struct CliOverrides {
    std::optional<std::string> config;
    std::optional<std::string> preset;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> lambda;
    bool lambda_optimal = false;
    std::optional<double> alpha;
    std::optional<double> rho_db;
    std::optional<double> r;
    std::optional<int> n;
    std::optional<double> zeta;
    std::optional<double> tau;
    std::optional<double> tau_t;
    std::optional<std::string> model;
    std::optional<int> threads;
    bool faithful_training = false;
    bool raw_diagonal_rdelta = false;
    bool eigenvalue_rdelta = false;
    std::optional<std::string> sweep_variable;
    std::optional<std::string> sweep_values;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config, "experiment config file");
    cmd->add_option("--preset", o.preset, "figure preset (fig2..fig7)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials (0 = analytics only)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output CSV path (default: stdout)");
    cmd->add_option("--lambda", o.lambda, "explicit regulariser value");
    cmd->add_flag("--optimal-lambda", o.lambda_optimal, "use the optimal regulariser");
    cmd->add_option("--alpha", o.alpha, "data power ratio");
    cmd->add_option("--rho-db", o.rho_db, "average power in dB");
    cmd->add_option("--r", o.r, "correlation coefficient");
    cmd->add_option("--n", o.n, "transmit antennas");
    cmd->add_option("--zeta", o.zeta, "receive/transmit ratio");
    cmd->add_option("--tau", o.tau, "normalised coherence time");
    cmd->add_option("--tau-t", o.tau_t, "normalised pilot length");
    cmd->add_option("--model", o.model,
                    "correlation model (identity|exponential|standard-exponential|file)");
    cmd->add_option("--threads", o.threads, "Monte Carlo worker count (0 = hardware)");
    cmd->add_flag("--faithful-training", o.faithful_training,
                  "simulate the full training phase instead of direct sampling");
    cmd->add_flag("--raw-diagonal-rdelta", o.raw_diagonal_rdelta,
                  "read [R_Delta]_jj as the average diagonal entry (default)");
    cmd->add_flag("--eigenvalue-rdelta", o.eigenvalue_rdelta,
                  "read [R_Delta]_jj as the eigenvalue d_j (comparison mode)");
    cmd->add_option("--sweep-variable", o.sweep_variable, "sweep variable (lambda|rho_db|alpha|r)");
    cmd->add_option("--sweep-values", o.sweep_values, "sweep values, a:step:b or comma list");
}

rzf::ExperimentSpec build_spec(const CliOverrides& o, rzf::RunMode mode) {
    rzf::ExperimentSpec spec;
    if (o.preset.has_value()) rzf::apply_preset(spec, *o.preset);
    if (o.config.has_value()) {
        rzf::ExperimentSpec from_file = rzf::parse_config_file(*o.config);
        from_file.preset = spec.preset;
        if (o.preset.has_value() && !from_file.sweep.has_value()) from_file.sweep = spec.sweep;
        spec = std::move(from_file);
        if (o.preset.has_value()) rzf::apply_preset(spec, *o.preset);
    }
    spec.mode = mode;

    if (o.trials) spec.trials = *o.trials;
    if (o.seed) spec.seed = *o.seed;
    if (o.out) spec.out = *o.out;
    if (o.lambda) spec.cfg.lambda = *o.lambda;
    if (o.lambda_optimal) spec.cfg.lambda.reset();
    if (o.alpha) spec.cfg.alpha = *o.alpha;
    if (o.rho_db) spec.cfg.rho_db = *o.rho_db;
    if (o.r) spec.cfg.correlation.r = *o.r;
    if (o.n) spec.cfg.n = *o.n;
    if (o.zeta) spec.cfg.zeta = *o.zeta;
    if (o.tau) spec.cfg.tau = *o.tau;
    if (o.tau_t) spec.cfg.tau_t = *o.tau_t;
    if (o.model) spec.cfg.correlation.kind = rzf::correlation_kind_from_string(*o.model);
    if (o.threads) spec.mc.threads = *o.threads;
    if (o.faithful_training) spec.mc.faithful_training = true;
    if (o.raw_diagonal_rdelta && o.eigenvalue_rdelta)
        throw std::invalid_argument("--raw-diagonal-rdelta and --eigenvalue-rdelta conflict");
    if (o.raw_diagonal_rdelta) spec.mc.reading = rzf::RdeltaReading::kDiagonalMean;
    if (o.eigenvalue_rdelta) spec.mc.reading = rzf::RdeltaReading::kEigenvalues;
    if (o.sweep_variable || o.sweep_values) {
        if (!o.sweep_variable || !o.sweep_values)
            throw std::invalid_argument("--sweep-variable and --sweep-values must come together");
        spec.sweep = {rzf::sweep_variable_from_string(*o.sweep_variable),
                      rzf::parse_value_list(*o.sweep_values)};
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RZF receiver analytics and Monte Carlo simulation for correlated massive MIMO"};
    app.require_subcommand(1);

    struct SubPlan {
        CLI::App* cmd;
        rzf::RunMode mode;
        CliOverrides overrides;
    };
    std::vector<SubPlan> plans;
    plans.reserve(8);  // CLI11 keeps pointers into the overrides; no reallocation
    auto add = [&](const char* name, const char* help, rzf::RunMode mode) {
        plans.push_back({app.add_subcommand(name, help), mode, {}});
        add_common_options(plans.back().cmd, plans.back().overrides);
    };
    add("asym", "analytic MSE/BER prediction for one configuration", rzf::RunMode::kAsym);
    add("mc", "Monte Carlo + analytics for one configuration", rzf::RunMode::kMc);
    add("sweep", "paired analytic/Monte Carlo sweep over one variable", rzf::RunMode::kSweep);
    add("power", "optimal pilot/data power split", rzf::RunMode::kPower);
    add("figure", "reproduce a paper figure preset (fig2..fig7)", rzf::RunMode::kFigure);

    CLI11_PARSE(app, argc, argv);

    for (const SubPlan& plan : plans) {
        if (!plan.cmd->parsed()) continue;
        try {
            const rzf::ExperimentSpec spec = build_spec(plan.overrides, plan.mode);
            return rzf::run(spec);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}
