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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rzf/montecarlo.hpp"
#include "rzf/power.hpp"

namespace rzf {

enum class RunMode { kAsym, kMc, kSweep, kPower, kFigure };

struct ExperimentSpec {
    SystemConfig cfg;
    RunMode mode = RunMode::kAsym;
    std::optional<std::pair<SweepVariable, std::vector<double>>> sweep;
    int trials = 0;  // 0 = analytics only
    std::uint64_t seed = 1;
    std::string out;     // CSV path; empty = stdout
    std::string preset;  // required for mode == kFigure
    McOptions mc;

    void validate() const;
};

// Flat sectioned key/value config file (sections: system, correlation,
// sweep, montecarlo, output). Unknown sections or keys are rejected.
ExperimentSpec parse_config_file(const std::filesystem::path& path);

// Bundled experiment presets (fig2..fig7). The presets use the standard
// exponential correlation model, which is the variant that reproduces the
// reference curves.
void apply_preset(ExperimentSpec& spec, const std::string& name);
std::vector<std::string> preset_names();

// One CSV row. Header:
//   var,value,mse_mc,mse_stderr,ber_mc,ber_stderr,mse_asym,ber_asym,
//   nu_star,mu_star,lambda_star,alpha_star,status
// Missing cells are emitted empty, never zero; decimals carry 12
// significant digits.
struct CsvRow {
    std::string var;
    double value = 0.0;
    std::optional<double> mse_mc, mse_stderr, ber_mc, ber_stderr;
    std::optional<double> mse_asym, ber_asym, nu_star, mu_star, lambda_star, alpha_star;
    std::string status = "ok";
};

extern const char* const kCsvHeader;

std::vector<CsvRow> run_rows(const ExperimentSpec& spec);
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

// Executes the experiment and writes the CSV. Exit status: 0 on success,
// 1 on configuration errors, 2 when any row carries an error status or a
// runtime failure occurs.
int run(const ExperimentSpec& spec);

// Helpers shared between the config parser and the CLI.
std::vector<double> parse_value_list(const std::string& text);  // "a:step:b" or comma list

}  // namespace rzf
