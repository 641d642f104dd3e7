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

#include "rzf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace rzf {

const char* const kCsvHeader =
    "var,value,mse_mc,mse_stderr,ber_mc,ber_stderr,mse_asym,ber_asym,"
    "nu_star,mu_star,lambda_star,alpha_star,status";

void ExperimentSpec::validate() const {
    cfg.validate();
    if (trials < 0) throw std::invalid_argument("config: trials must be >= 0");
    if (mode == RunMode::kSweep && !sweep.has_value())
        throw std::invalid_argument("config: sweep mode requires a sweep section");
    if (mode == RunMode::kFigure) {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), preset) == names.end())
            throw std::invalid_argument("config: figure mode requires a preset in "
                                        "{fig2, fig3, fig4, fig5, fig6, fig7}");
    }
    if (sweep.has_value() && sweep->second.empty())
        throw std::invalid_argument("config: sweep values must be nonempty");
}

// ---- config file ----------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value +
                                    "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double d = parse_double(key, value);
    const int i = static_cast<int>(d);
    if (d != i) throw std::invalid_argument("config: key '" + key + "' expects an integer");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' expects true/false, got '" + value +
                                "'");
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        // start:step:stop, inclusive of stop up to a half-step tolerance
        double start, step, stop;
        char c1, c2;
        std::istringstream ss(text);
        if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
            throw std::invalid_argument("cannot parse range '" + text + "' (expected a:step:b)");
        if (!(step > 0.0)) throw std::invalid_argument("range step must be positive: " + text);
        for (int i = 0;; ++i) {
            const double v = start + i * step;
            if (v > stop + step / 2.0) break;
            values.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            if (!cell.empty()) values.push_back(parse_double("values", cell));
        }
    }
    if (values.empty()) throw std::invalid_argument("empty value list: '" + text + "'");
    return values;
}

ExperimentSpec parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());

    ExperimentSpec spec;
    std::optional<SweepVariable> sweep_variable;
    std::vector<double> sweep_values;

    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "correlation" && section != "sweep" &&
                section != "montecarlo" && section != "output")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "system") {
            if (key == "n") spec.cfg.n = parse_int(key, value);
            else if (key == "zeta") spec.cfg.zeta = parse_double(key, value);
            else if (key == "tau") spec.cfg.tau = parse_double(key, value);
            else if (key == "tau_t") spec.cfg.tau_t = parse_double(key, value);
            else if (key == "rho_db") spec.cfg.rho_db = parse_double(key, value);
            else if (key == "alpha") spec.cfg.alpha = parse_double(key, value);
            else if (key == "lambda") {
                if (value == "optimal") spec.cfg.lambda.reset();
                else spec.cfg.lambda = parse_double(key, value);
            }
            else throw std::invalid_argument("config: unknown key '" + key + "' in [system]");
        } else if (section == "correlation") {
            if (key == "model") spec.cfg.correlation.kind = correlation_kind_from_string(value);
            else if (key == "r") spec.cfg.correlation.r = parse_double(key, value);
            else if (key == "path") spec.cfg.correlation.path = value;
            else throw std::invalid_argument("config: unknown key '" + key + "' in [correlation]");
        } else if (section == "sweep") {
            if (key == "variable") sweep_variable = sweep_variable_from_string(value);
            else if (key == "values") sweep_values = parse_value_list(value);
            else throw std::invalid_argument("config: unknown key '" + key + "' in [sweep]");
        } else if (section == "montecarlo") {
            if (key == "trials") spec.trials = parse_int(key, value);
            else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_double(key, value));
            else if (key == "threads") spec.mc.threads = parse_int(key, value);
            else if (key == "faithful_training") spec.mc.faithful_training = parse_bool(key, value);
            else if (key == "rdelta_reading") {
                if (value == "diagonal") spec.mc.reading = RdeltaReading::kDiagonalMean;
                else if (value == "eigenvalue") spec.mc.reading = RdeltaReading::kEigenvalues;
                else throw std::invalid_argument("config: rdelta_reading expects diagonal or "
                                                 "eigenvalue, got '" + value + "'");
            }
            else throw std::invalid_argument("config: unknown key '" + key + "' in [montecarlo]");
        } else if (section == "output") {
            if (key == "path") spec.out = value;
            else throw std::invalid_argument("config: unknown key '" + key + "' in [output]");
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": key outside any section");
        }
    }

    if (sweep_variable.has_value() || !sweep_values.empty()) {
        if (!sweep_variable.has_value() || sweep_values.empty())
            throw std::invalid_argument("config: [sweep] needs both 'variable' and 'values'");
        spec.sweep = {*sweep_variable, std::move(sweep_values)};
    }
    return spec;
}

// ---- presets --------------------------------------------------------------

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

void apply_preset(ExperimentSpec& spec, const std::string& name) {
    // All figure presets use the standard exponential model; it is the
    // variant that reproduces the reference analytical curves.
    auto base = [&spec](int n, double zeta, double tau, double r) {
        spec.cfg.n = n;
        spec.cfg.zeta = zeta;
        spec.cfg.tau = tau;
        spec.cfg.tau_t = 1.0;
        spec.cfg.rho_db = 10.0;
        spec.cfg.alpha = 0.5;
        spec.cfg.lambda.reset();
        spec.cfg.correlation.kind =
            r == 0.0 ? CorrelationKind::kIdentity : CorrelationKind::kStandardExponential;
        spec.cfg.correlation.r = r;
    };

    if (name == "fig2") {
        // zeta=1.5, n=400, r=0.4, T=1000, T_t=n, alpha=0.5, rho=10 dB
        base(400, 1.5, 2.5, 0.4);
        spec.sweep = {SweepVariable::kLambda, parse_value_list("0.001:0.01:2.001")};
        spec.mode = RunMode::kSweep;
    } else if (name == "fig3" || name == "fig4" || name == "fig5") {
        // zeta=1.5, n=500, alpha=0.5, T=1000, T_t=n; rho swept, one curve per r
        base(500, 1.5, 2.0, 0.4);
        spec.sweep = {SweepVariable::kRhoDb, parse_value_list("0:1:20")};
        spec.mode = RunMode::kFigure;
        if (name == "fig3") spec.trials = 0;  // emits lambda_star only
    } else if (name == "fig6") {
        base(500, 1.5, 2.0, 0.4);
        spec.sweep = {SweepVariable::kRhoDb, parse_value_list("0:1:20")};
        spec.mode = RunMode::kFigure;
    } else if (name == "fig7") {
        // zeta=1.5, n=400, T=1000, T_t=n
        base(400, 1.5, 2.5, 0.0);
        spec.cfg.correlation.kind = CorrelationKind::kStandardExponential;
        spec.sweep = {SweepVariable::kR, parse_value_list("0:0.1:0.9")};
        spec.mode = RunMode::kPower;
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected fig2, fig3, fig4, fig5, fig6 or fig7)");
    }
    spec.preset = name;
}

// ---- execution ------------------------------------------------------------

namespace {

std::string format_cell(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string sanitize_status(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s.empty() ? "ok" : s;
}

CsvRow row_from_sweep(const std::string& var, const SweepRow& src) {
    CsvRow row;
    row.var = var;
    row.value = src.value;
    if (src.asym.has_value()) {
        row.mse_asym = src.asym->mse;
        row.ber_asym = src.asym->ber;
        row.nu_star = src.asym->fixed_point.nu;
        row.mu_star = src.asym->fixed_point.mu;
        row.lambda_star = src.asym->lambda_star;
    }
    if (src.mc.has_value()) {
        row.mse_mc = src.mc->mean_mse;
        row.ber_mc = src.mc->mean_ber;
        if (src.mc->trials >= 2) {
            row.mse_stderr = src.mc->stderr_mse;
            row.ber_stderr = src.mc->stderr_ber;
        }
    }
    if (!src.error.empty()) row.status = sanitize_status(src.error);
    return row;
}

std::vector<CsvRow> run_single(const ExperimentSpec& spec, bool with_mc) {
    const SystemConfig& cfg = spec.cfg;
    const PowerSplit split = derive_powers(cfg);
    const CorrelationMatrix R = build_correlation(cfg.correlation, cfg.m());
    const SpectralModel model = spectral_model(R, cfg.tau_t, split.rho_t);
    const AsymptoticPrediction pred =
        predict(model, split.rho_d, cfg.lambda, cfg.n, spec.mc.reading);

    CsvRow row;
    row.var = "lambda";
    row.value = pred.lambda_used;
    row.mse_asym = pred.mse;
    row.ber_asym = pred.ber;
    row.nu_star = pred.fixed_point.nu;
    row.mu_star = pred.fixed_point.mu;
    row.lambda_star = optimal_lambda(model, split.rho_d);
    if (with_mc && spec.trials > 0) {
        SystemConfig mc_cfg = cfg;
        mc_cfg.lambda = pred.lambda_used;
        const TrialAggregate agg = run_trials(mc_cfg, spec.trials, spec.seed, spec.mc);
        row.mse_mc = agg.mean_mse;
        row.ber_mc = agg.mean_ber;
        if (agg.trials >= 2) {
            row.mse_stderr = agg.stderr_mse;
            row.ber_stderr = agg.stderr_ber;
        }
    }
    return {row};
}

std::vector<CsvRow> run_sweep_rows(const ExperimentSpec& spec, const std::string& label,
                                   const SystemConfig& cfg) {
    const auto& [variable, values] = *spec.sweep;
    const std::vector<SweepRow> rows = sweep(cfg, variable, values, spec.trials, spec.seed, spec.mc);
    std::vector<CsvRow> out;
    out.reserve(rows.size());
    for (const SweepRow& r : rows) out.push_back(row_from_sweep(label, r));
    return out;
}

std::vector<CsvRow> run_power_rows(const ExperimentSpec& spec) {
    std::vector<double> r_values;
    if (spec.sweep.has_value()) {
        if (spec.sweep->first != SweepVariable::kR)
            throw std::invalid_argument("power mode sweeps the correlation coefficient r only");
        r_values = spec.sweep->second;
    }

    AlphaOptions options;
    options.reading = spec.mc.reading;
    std::vector<CsvRow> out;
    auto emit = [&](double r_value, const SystemConfig& cfg) {
        PowerAllocationResult result = allocate_power(cfg, options, 0);
        for (const auto& [var, alpha] :
             std::initializer_list<std::pair<const char*, double>>{
                 {"r:alpha_mse", result.alpha_mse},
                 {"r:alpha_ber", result.alpha_ber},
                 {"r:alpha_closed_form", result.alpha_closed_form}}) {
            CsvRow row;
            row.var = var;
            row.value = r_value;
            row.alpha_star = alpha;
            out.push_back(std::move(row));
        }
    };

    if (r_values.empty()) {
        emit(spec.cfg.correlation.r, spec.cfg);
    } else {
        for (double r : r_values) {
            SystemConfig cfg = spec.cfg;
            if (r == 0.0) {
                cfg.correlation.kind = CorrelationKind::kIdentity;
                cfg.correlation.r = 0.0;
            } else {
                cfg.correlation.r = r;
            }
            try {
                emit(r, cfg);
            } catch (const std::exception& e) {
                CsvRow row;
                row.var = "r:alpha_mse";
                row.value = r;
                row.status = sanitize_status(e.what());
                out.push_back(std::move(row));
            }
        }
    }
    return out;
}

std::vector<CsvRow> run_figure_rows(const ExperimentSpec& spec) {
    if (spec.preset == "fig2") {
        return run_sweep_rows(spec, "lambda", spec.cfg);
    }
    if (spec.preset == "fig7") {
        return run_power_rows(spec);
    }
    if (spec.preset == "fig6") {
        // RZF at the optimal regulariser vs plain ZF (lambda = 0).
        std::vector<CsvRow> out;
        SystemConfig rzf_cfg = spec.cfg;
        rzf_cfg.lambda.reset();
        for (CsvRow& row : run_sweep_rows(spec, "rho_db[rzf]", rzf_cfg)) out.push_back(std::move(row));
        SystemConfig zf_cfg = spec.cfg;
        zf_cfg.lambda = 0.0;
        for (CsvRow& row : run_sweep_rows(spec, "rho_db[zf]", zf_cfg)) out.push_back(std::move(row));
        return out;
    }
    // fig3/fig4/fig5: one curve per correlation coefficient.
    ExperimentSpec sub = spec;
    if (spec.preset == "fig3") sub.trials = 0;  // fig3 emits lambda_star only
    std::vector<CsvRow> out;
    for (double r : {0.0, 0.4, 0.9}) {
        SystemConfig cfg = spec.cfg;
        if (r == 0.0) {
            cfg.correlation.kind = CorrelationKind::kIdentity;
            cfg.correlation.r = 0.0;
        } else {
            cfg.correlation.kind = CorrelationKind::kStandardExponential;
            cfg.correlation.r = r;
        }
        char label[32];
        std::snprintf(label, sizeof label, "rho_db[r=%g]", r);
        for (CsvRow& row : run_sweep_rows(sub, label, cfg)) {
            if (spec.preset == "fig3") {
                // Fig. 3 plots the optimal regulariser only.
                CsvRow slim;
                slim.var = row.var;
                slim.value = row.value;
                slim.lambda_star = row.lambda_star;
                slim.status = row.status;
                out.push_back(std::move(slim));
            } else {
                out.push_back(std::move(row));
            }
        }
    }
    return out;
}

}  // namespace

std::vector<CsvRow> run_rows(const ExperimentSpec& spec) {
    spec.validate();
    switch (spec.mode) {
        case RunMode::kAsym: return run_single(spec, /*with_mc=*/false);
        case RunMode::kMc: return run_single(spec, /*with_mc=*/true);
        case RunMode::kSweep:
            return run_sweep_rows(spec, to_string(spec.sweep->first), spec.cfg);
        case RunMode::kPower: return run_power_rows(spec);
        case RunMode::kFigure: return run_figure_rows(spec);
    }
    throw std::logic_error("unreachable run mode");
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << kCsvHeader << "\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_cell(*v) : ""; };
    for (const CsvRow& row : rows) {
        os << row.var << ',' << format_cell(row.value) << ',' << cell(row.mse_mc) << ','
           << cell(row.mse_stderr) << ',' << cell(row.ber_mc) << ',' << cell(row.ber_stderr) << ','
           << cell(row.mse_asym) << ',' << cell(row.ber_asym) << ',' << cell(row.nu_star) << ','
           << cell(row.mu_star) << ',' << cell(row.lambda_star) << ',' << cell(row.alpha_star)
           << ',' << row.status << "\n";
    }
}

int run(const ExperimentSpec& spec) {
    std::vector<CsvRow> rows;
    try {
        rows = run_rows(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (spec.out.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream out(spec.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write output file " << spec.out << "\n";
            return 2;
        }
        write_csv(out, rows);
        if (!out.good()) {
            std::cerr << "error: write failure on " << spec.out << "\n";
            return 2;
        }
    }

    for (const CsvRow& row : rows) {
        if (row.status != "ok") return 2;
    }
    return 0;
}

}  // namespace rzf
