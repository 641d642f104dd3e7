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

#include <filesystem>
#include <string>

#include <Eigen/Dense>

namespace rzf {

/**
 * Validated m x m receive-correlation matrix.
 *
 * Invariants enforced at construction: square, exactly symmetric (inputs
 * asymmetric beyond 1e-8 are rejected, smaller asymmetry is symmetrised
 * away), and positive semi-definite with minimum eigenvalue >= -1e-10.
 */
class CorrelationMatrix {
  public:
    // Validates and takes ownership of a dense symmetric PSD matrix.
    static CorrelationMatrix from_dense(Eigen::MatrixXd entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }

  private:
    explicit CorrelationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
    Eigen::MatrixXd entries_;
};

// Exponential correlation with squared index distance, R_ij = r^(|i-j|^2).
CorrelationMatrix exponential_correlation(int m, double r);

// Standard exponential (Kac-Murdock-Szego) variant, R_ij = r^|i-j|.
CorrelationMatrix standard_exponential_correlation(int m, double r);

CorrelationMatrix identity_correlation(int m);

// Dense CSV matrix, one row per line, comma separated, no header.
CorrelationMatrix load_correlation(const std::filesystem::path& path);

// Symmetric PSD square root S with S*S^T == R; eigenvalues in [-1e-10, 0)
// are clamped to zero.
Eigen::MatrixXd psd_sqrt(const CorrelationMatrix& R);

/**
 * Common-eigenbasis description of R, R_Ahat and R_Delta.
 *
 * All three matrices are rational functions of R and therefore commute; the
 * per-eigenvalue maps are
 *
 *     gamma_j = delta_j^2 / (delta_j + c)      (eigenvalue of R_Ahat)
 *     d_j     = delta_j * c / (delta_j + c)    (eigenvalue of R_Delta)
 *
 * with c = 1/(tau_t * rho_t) the estimation noise level; c -> 0 is the
 * perfect-CSI limit.
 */
struct SpectralModel {
    int m = 0;
    Eigen::MatrixXd basis;  // columns = shared eigenvectors
    Eigen::VectorXd delta;  // eigenvalues of R, descending
    Eigen::VectorXd gamma;  // eigenvalues of R_Ahat
    Eigen::VectorXd d;      // eigenvalues of R_Delta
    double c = 0.0;

    // tr(R_Delta)/m, the average estimation-error level per antenna.
    double rdelta_trace_mean() const { return d.mean(); }

    // Same correlation matrix, different estimation noise level. Reuses the
    // eigendecomposition; used by power sweeps where c varies with alpha.
    SpectralModel with_noise_level(double c_new) const;

    Eigen::MatrixXd sqrt_r() const;        // R^{1/2}
    Eigen::MatrixXd sqrt_r_ahat() const;   // R_Ahat^{1/2}
    Eigen::MatrixXd sqrt_r_delta() const;  // R_Delta^{1/2}
};

// Eigendecomposes R once and applies the eigenvalue maps above.
SpectralModel spectral_model(const CorrelationMatrix& R, double tau_t, double rho_t);

// Correlation model selection as it appears in configs and CLI flags.
enum class CorrelationKind { kIdentity, kExponential, kStandardExponential, kFile };

struct CorrelationSpec {
    CorrelationKind kind = CorrelationKind::kIdentity;
    double r = 0.0;
    std::string path;  // kind == kFile
};

CorrelationMatrix build_correlation(const CorrelationSpec& spec, int m);

std::string to_string(CorrelationKind kind);
CorrelationKind correlation_kind_from_string(const std::string& name);

}  // namespace rzf
