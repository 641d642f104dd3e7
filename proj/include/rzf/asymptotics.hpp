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

#include <optional>
#include <vector>

#include "rzf/correlation.hpp"

namespace rzf {

/**
 * How the per-antenna estimation-error level enters the scalar formulas.
 *
 * kDiagonalMean reads the error level as the average diagonal entry
 * tr(R_Delta)/m (the diagonal of R_Delta is constant up to edge effects for
 * the correlation models used here); kEigenvalues pairs each gamma_j with
 * the eigenvalue d_j of R_Delta in the common eigenbasis. The two coincide
 * whenever R is proportional to the identity. Default is kDiagonalMean,
 * which is the reading that reproduces the reference analytical curves.
 */
enum class RdeltaReading { kDiagonalMean, kEigenvalues };

/**
 * Solved scalar saddle point. nu is the asymptotic MSE in squared-symbol
 * units; mu is the auxiliary dual scalar parameterising the BER.
 */
struct FixedPoint {
    double nu = 0.0;
    double mu = 0.0;
    int iterations = 0;
    double residual = 0.0;  // final |rhs(mu) - mu| / mu
    bool converged = false;
};

/**
 * The scalar minimax objective
 *
 *   F(nu,mu) = (1/2n) sum_j (gamma_j rho_d nu + rho_d d_j + 1) / (1/2 + rho_d gamma_j / mu)
 *            + lambda rho_d (nu + 1) - nu mu / 2 - 2 lambda^2 rho_d^2 / mu
 *
 * whose saddle (min over nu, max over mu) gives the asymptotic MSE.
 */
double objective_F(double nu, double mu, const SpectralModel& model, double rho_d, double lambda,
                   int n, RdeltaReading reading = RdeltaReading::kDiagonalMean);

/**
 * Solves mu = (1/n) sum_j mu rho_d gamma_j / (mu/2 + rho_d gamma_j) + 2 lambda rho_d
 * by damped fixed-point iteration (damping 0.5) with a bracketed-bisection
 * fallback. Convergence at |rhs - mu|/mu <= 1e-12 or 1e4 iterations.
 *
 * For lambda = 0 a positive root exists only when rank(R_Ahat)/n > 1;
 * otherwise throws ("ZF regime infeasible").
 */
double solve_mu(const SpectralModel& model, double rho_d, double lambda, int n);

/**
 * Stationarity of F in mu at the solved mu_star:
 *
 *   nu = [ (1/n) sum_j rho_d gamma_j (rho_d d_j + 1) / (mu/2 + rho_d gamma_j)^2
 *          + 4 lambda^2 rho_d^2 / mu^2 ]
 *        / [ 1 - (1/n) sum_j rho_d^2 gamma_j^2 / (mu/2 + rho_d gamma_j)^2 ]
 *
 * Throws when the denominator is <= 0 (asymptotic MSE diverges).
 */
double solve_nu(double mu_star, const SpectralModel& model, double rho_d, double lambda, int n,
                RdeltaReading reading = RdeltaReading::kDiagonalMean);

FixedPoint solve_fixed_point(const SpectralModel& model, double rho_d, double lambda, int n,
                             RdeltaReading reading = RdeltaReading::kDiagonalMean);

/**
 * Spectral sum entering the BER argument:
 *
 *   S(nu,mu) = (1/n) sum_j [rho_d gamma_j^2 nu + gamma_j (rho_d d_j + 1)]
 *                          / (1/2 + rho_d gamma_j / mu)^2
 *
 * At the saddle it satisfies rho_d * S + 4 lambda^2 rho_d^2 == mu^2 nu.
 */
double s_gamma(double nu, double mu, const SpectralModel& model, double rho_d, int n,
               RdeltaReading reading = RdeltaReading::kDiagonalMean);

// Upper tail of the standard normal, Q(x) = erfc(x/sqrt(2))/2.
double q_function(double x);

/**
 * Asymptotic bit error rate
 *
 *   BER = Q( (sqrt(4 rho_d lambda^2 + S) - 2 lambda sqrt(rho_d nu)) / sqrt(nu S) )
 *
 * which at the saddle equals Q((1 - b)/sqrt(nu - b^2)) with the ridge
 * shrinkage b = 2 lambda rho_d / mu.
 */
double asymptotic_ber(const FixedPoint& fp, double s_gamma_value, double rho_d, double lambda);

// Optimal regulariser lambda_star = 1/rho_d + tr(R_Delta)/m; minimises both
// the asymptotic MSE and BER.
double optimal_lambda(const SpectralModel& model, double rho_d);

struct AsymptoticPrediction {
    double mse = 0.0;
    double ber = 0.0;
    double s_gamma = 0.0;
    double lambda_used = 0.0;  // regulariser the prediction ran at
    double lambda_star = 0.0;  // optimal regulariser for this configuration
    FixedPoint fixed_point;
};

// Full analytic chain: resolves the lambda policy (explicit value or the
// optimal regulariser), solves the fixed point and evaluates MSE/BER.
AsymptoticPrediction predict(const SpectralModel& model, double rho_d,
                             std::optional<double> lambda, int n,
                             RdeltaReading reading = RdeltaReading::kDiagonalMean);

// --- brute-force saddle oracle ------------------------------------------

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    bool log_spaced = false;

    static GridSpec linear(double lo, double hi, int points) { return {lo, hi, points, false}; }
    static GridSpec logspace(double lo, double hi, int points) { return {lo, hi, points, true}; }
    std::vector<double> materialize() const;
};

struct SaddlePoint {
    double nu;
    double mu;
    double value;
};

/**
 * Brute-force min over the nu grid of max over the mu grid of objective_F.
 * This is the independent oracle for the fixed-point solver; it throws if
 * the saddle lands on a grid boundary (the grid must be expanded).
 */
SaddlePoint grid_minimax_oracle(const SpectralModel& model, double rho_d, double lambda, int n,
                                const GridSpec& nu_grid, const GridSpec& mu_grid,
                                RdeltaReading reading = RdeltaReading::kDiagonalMean);

// Checker convenience: 400x400 log-spaced grids spanning [x/3, 3x] around a
// solved fixed point.
SaddlePoint oracle_check(const SpectralModel& model, double rho_d, double lambda, int n,
                         const FixedPoint& fp,
                         RdeltaReading reading = RdeltaReading::kDiagonalMean);

}  // namespace rzf
