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

#include "rzf/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rzf {

namespace {

constexpr double kMuTolerance = 1e-12;
constexpr int kMaxIterations = 10000;

// Estimation-error level per eigenvalue under the selected reading.
Eigen::VectorXd effective_rdelta(const SpectralModel& model, RdeltaReading reading) {
    if (reading == RdeltaReading::kEigenvalues) return model.d;
    return Eigen::VectorXd::Constant(model.m, model.rdelta_trace_mean());
}

double objective_on(double nu, double mu, const Eigen::VectorXd& gamma,
                    const Eigen::VectorXd& dvec, double rho_d, double lambda, int n) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        sum += (gamma(j) * rho_d * nu + rho_d * dvec(j) + 1.0) / (0.5 + rho_d * gamma(j) / mu);
    }
    return sum / (2.0 * n) + lambda * rho_d * (nu + 1.0) - nu * mu / 2.0 -
           2.0 * lambda * lambda * rho_d * rho_d / mu;
}

// Right-hand side of the mu fixed-point equation.
double mu_rhs(double mu, const Eigen::VectorXd& gamma, double rho_d, double lambda, int n) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        sum += mu * rho_d * gamma(j) / (mu / 2.0 + rho_d * gamma(j));
    }
    return sum / n + 2.0 * lambda * rho_d;
}

struct MuSolution {
    double mu;
    int iterations;
    double residual;
    bool converged;
};

MuSolution solve_mu_impl(const SpectralModel& model, double rho_d, double lambda, int n) {
    if (!(rho_d > 0.0)) throw std::invalid_argument("solve_mu: rho_d must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("solve_mu: lambda must be >= 0");
    const Eigen::VectorXd& gamma = model.gamma;

    if (lambda == 0.0) {
        int positive = 0;
        for (Eigen::Index j = 0; j < gamma.size(); ++j)
            if (gamma(j) > 0.0) ++positive;
        if (positive <= n) {
            throw std::runtime_error(
                "solve_mu: ZF regime infeasible (lambda = 0 needs rank(R_Ahat) > n, got rank " +
                std::to_string(positive) + " with n = " + std::to_string(n) + ")");
        }
    }

    const double mu0 = 2.0 * lambda * rho_d + rho_d * gamma.sum() / n;
    double mu = mu0;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    for (; iterations < kMaxIterations; ++iterations) {
        const double rhs = mu_rhs(mu, gamma, rho_d, lambda, n);
        residual = std::abs(rhs - mu) / mu;
        if (residual <= kMuTolerance) {
            return {rhs, iterations + 1, residual, true};
        }
        mu = 0.5 * mu + 0.5 * rhs;  // damping 0.5
    }

    // Bracketed bisection fallback on g(mu) = rhs - mu over [1e-12, 1e3*mu0].
    double lo = 1e-12;
    double hi = mu0 * 1e3;
    auto g = [&](double x) { return mu_rhs(x, gamma, rho_d, lambda, n) - x; };
    if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
        throw std::runtime_error("solve_mu: fixed-point iteration stalled and the fallback "
                                 "bracket [1e-12, 1e3*mu0] does not enclose a root");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    mu = 0.5 * (lo + hi);
    residual = std::abs(g(mu)) / mu;
    return {mu, kMaxIterations, residual, residual <= kMuTolerance * 10.0};
}

double solve_nu_on(double mu, const Eigen::VectorXd& gamma, const Eigen::VectorXd& dvec,
                   double rho_d, double lambda, int n) {
    if (!(mu > 0.0)) throw std::invalid_argument("solve_nu: mu must be > 0");
    double numer = 0.0;
    double vsum = 0.0;
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        const double q = mu / 2.0 + rho_d * gamma(j);
        numer += rho_d * gamma(j) * (rho_d * dvec(j) + 1.0) / (q * q);
        vsum += rho_d * rho_d * gamma(j) * gamma(j) / (q * q);
    }
    numer = numer / n + 4.0 * lambda * lambda * rho_d * rho_d / (mu * mu);
    const double denom = 1.0 - vsum / n;
    if (!(denom > 0.0)) {
        throw std::runtime_error("solve_nu: asymptotic MSE diverges (stationarity denominator " +
                                 std::to_string(denom) + " <= 0)");
    }
    return numer / denom;
}

double s_gamma_on(double nu, double mu, const Eigen::VectorXd& gamma, const Eigen::VectorXd& dvec,
                  double rho_d, int n) {
    if (!(nu > 0.0 && mu > 0.0)) throw std::invalid_argument("s_gamma: nu and mu must be > 0");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        const double q = 0.5 + rho_d * gamma(j) / mu;
        sum += (rho_d * gamma(j) * gamma(j) * nu + gamma(j) * (rho_d * dvec(j) + 1.0)) / (q * q);
    }
    return sum / n;
}

}  // namespace

double objective_F(double nu, double mu, const SpectralModel& model, double rho_d, double lambda,
                   int n, RdeltaReading reading) {
    if (!(nu > 0.0 && mu > 0.0))
        throw std::invalid_argument("objective_F: nu and mu must be > 0");
    return objective_on(nu, mu, model.gamma, effective_rdelta(model, reading), rho_d, lambda, n);
}

double solve_mu(const SpectralModel& model, double rho_d, double lambda, int n) {
    return solve_mu_impl(model, rho_d, lambda, n).mu;
}

double solve_nu(double mu_star, const SpectralModel& model, double rho_d, double lambda, int n,
                RdeltaReading reading) {
    return solve_nu_on(mu_star, model.gamma, effective_rdelta(model, reading), rho_d, lambda, n);
}

FixedPoint solve_fixed_point(const SpectralModel& model, double rho_d, double lambda, int n,
                             RdeltaReading reading) {
    const MuSolution mu = solve_mu_impl(model, rho_d, lambda, n);
    FixedPoint fp;
    fp.mu = mu.mu;
    fp.iterations = mu.iterations;
    fp.residual = mu.residual;
    fp.converged = mu.converged;
    fp.nu = solve_nu(mu.mu, model, rho_d, lambda, n, reading);
    return fp;
}

double s_gamma(double nu, double mu, const SpectralModel& model, double rho_d, int n,
               RdeltaReading reading) {
    return s_gamma_on(nu, mu, model.gamma, effective_rdelta(model, reading), rho_d, n);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double asymptotic_ber(const FixedPoint& fp, double s_gamma_value, double rho_d, double lambda) {
    if (!(fp.nu > 0.0))
        throw std::invalid_argument("asymptotic_ber: nu must be > 0, got " +
                                    std::to_string(fp.nu));
    if (!(s_gamma_value > 0.0))
        throw std::invalid_argument("asymptotic_ber: S must be > 0, got " +
                                    std::to_string(s_gamma_value));
    const double radicand = 4.0 * rho_d * lambda * lambda + s_gamma_value;
    if (!(radicand >= 0.0) || !(fp.nu * s_gamma_value > 0.0)) {
        throw std::runtime_error("asymptotic_ber: invalid Q-argument radicand (nu = " +
                                 std::to_string(fp.nu) + ", S = " + std::to_string(s_gamma_value) +
                                 ", lambda = " + std::to_string(lambda) + ")");
    }
    const double arg = (std::sqrt(radicand) - 2.0 * lambda * std::sqrt(rho_d * fp.nu)) /
                       std::sqrt(fp.nu * s_gamma_value);
    return q_function(arg);
}

double optimal_lambda(const SpectralModel& model, double rho_d) {
    if (!(rho_d > 0.0)) throw std::invalid_argument("optimal_lambda: rho_d must be > 0");
    return 1.0 / rho_d + model.rdelta_trace_mean();
}

AsymptoticPrediction predict(const SpectralModel& model, double rho_d,
                             std::optional<double> lambda, int n, RdeltaReading reading) {
    AsymptoticPrediction out;
    out.lambda_star = optimal_lambda(model, rho_d);
    out.lambda_used = lambda.value_or(out.lambda_star);
    out.fixed_point = solve_fixed_point(model, rho_d, out.lambda_used, n, reading);
    out.mse = out.fixed_point.nu;
    out.s_gamma = s_gamma(out.fixed_point.nu, out.fixed_point.mu, model, rho_d, n, reading);
    out.ber = asymptotic_ber(out.fixed_point, out.s_gamma, rho_d, out.lambda_used);
    return out;
}

std::vector<double> GridSpec::materialize() const {
    if (points < 2) throw std::invalid_argument("GridSpec: need at least 2 points");
    if (!(hi > lo)) throw std::invalid_argument("GridSpec: hi must exceed lo");
    if (log_spaced && !(lo > 0.0))
        throw std::invalid_argument("GridSpec: log spacing needs lo > 0");
    std::vector<double> grid(points);
    if (log_spaced) {
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < points; ++i)
            grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

SaddlePoint grid_minimax_oracle(const SpectralModel& model, double rho_d, double lambda, int n,
                                const GridSpec& nu_grid, const GridSpec& mu_grid,
                                RdeltaReading reading) {
    const std::vector<double> nus = nu_grid.materialize();
    const std::vector<double> mus = mu_grid.materialize();
    const Eigen::VectorXd dvec = effective_rdelta(model, reading);

    double best_value = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        double inner = -std::numeric_limits<double>::infinity();
        std::size_t inner_j = 0;
        for (std::size_t j = 0; j < mus.size(); ++j) {
            const double value =
                objective_on(nus[i], mus[j], model.gamma, dvec, rho_d, lambda, n);
            if (value > inner) {
                inner = value;
                inner_j = j;
            }
        }
        if (inner < best_value) {
            best_value = inner;
            best_i = i;
            best_j = inner_j;
        }
    }
    if (best_i == 0 || best_i + 1 == nus.size() || best_j == 0 || best_j + 1 == mus.size()) {
        throw std::runtime_error("grid_minimax_oracle: saddle on grid boundary (nu = " +
                                 std::to_string(nus[best_i]) + ", mu = " +
                                 std::to_string(mus[best_j]) + "); expand the grid");
    }
    return {nus[best_i], mus[best_j], best_value};
}

SaddlePoint oracle_check(const SpectralModel& model, double rho_d, double lambda, int n,
                         const FixedPoint& fp, RdeltaReading reading) {
    const GridSpec nu_grid = GridSpec::logspace(fp.nu / 3.0, fp.nu * 3.0, 400);
    const GridSpec mu_grid = GridSpec::logspace(fp.mu / 3.0, fp.mu * 3.0, 400);
    return grid_minimax_oracle(model, rho_d, lambda, n, nu_grid, mu_grid, reading);
}

}  // namespace rzf
