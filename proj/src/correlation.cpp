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

#include "rzf/correlation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rzf {

namespace {

constexpr double kPsdTolerance = 1e-10;
constexpr double kSymmetryTolerance = 1e-8;

// Eigenvalues in [-1e-10, 0) are clamped to 0; more negative values signal a
// genuinely non-PSD input.
void clamp_eigenvalues(Eigen::VectorXd& values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -kPsdTolerance) {
            throw std::invalid_argument("correlation matrix is not positive semi-definite "
                                        "(minimum eigenvalue " +
                                        std::to_string(values.minCoeff()) + " < -1e-10)");
        }
        if (values(i) < 0.0) values(i) = 0.0;
    }
}

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& basis, const Eigen::VectorXd& values) {
    return basis * values.asDiagonal() * basis.transpose();
}

}  // namespace

CorrelationMatrix CorrelationMatrix::from_dense(Eigen::MatrixXd entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        throw std::invalid_argument("correlation matrix must be square and non-empty, got " +
                                    std::to_string(entries.rows()) + "x" +
                                    std::to_string(entries.cols()));
    }
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance) {
        throw std::invalid_argument("correlation matrix is asymmetric beyond 1e-8 (max deviation " +
                                    std::to_string(asym) + ")");
    }
    // Make the symmetry exact so downstream eigendecompositions agree bitwise.
    entries = ((entries + entries.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::invalid_argument("eigendecomposition of correlation matrix failed");
    }
    if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw std::invalid_argument("correlation matrix is not positive semi-definite "
                                    "(minimum eigenvalue " +
                                    std::to_string(solver.eigenvalues().minCoeff()) + ")");
    }
    return CorrelationMatrix(std::move(entries));
}

CorrelationMatrix exponential_correlation(int m, double r) {
    if (m < 1) throw std::invalid_argument("exponential_correlation: m must be >= 1");
    if (r < 0.0 || r >= 1.0)
        throw std::invalid_argument("exponential_correlation: r must lie in [0,1), got " +
                                    std::to_string(r));
    Eigen::MatrixXd R(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double k = std::abs(i - j);
            R(i, j) = (i == j) ? 1.0 : std::pow(r, k * k);
        }
    return CorrelationMatrix::from_dense(std::move(R));
}

CorrelationMatrix standard_exponential_correlation(int m, double r) {
    if (m < 1) throw std::invalid_argument("standard_exponential_correlation: m must be >= 1");
    if (r < 0.0 || r >= 1.0)
        throw std::invalid_argument("standard_exponential_correlation: r must lie in [0,1), got " +
                                    std::to_string(r));
    Eigen::MatrixXd R(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) R(i, j) = (i == j) ? 1.0 : std::pow(r, std::abs(i - j));
    return CorrelationMatrix::from_dense(std::move(R));
}

CorrelationMatrix identity_correlation(int m) {
    if (m < 1) throw std::invalid_argument("identity_correlation: m must be >= 1");
    return CorrelationMatrix::from_dense(Eigen::MatrixXd::Identity(m, m));
}

CorrelationMatrix load_correlation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open correlation file: " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument("correlation file " + path.string() +
                                            ": cannot parse value '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("correlation file is empty: " + path.string());

    const std::size_t m = rows.size();
    for (const auto& row : rows) {
        if (row.size() != m) {
            throw std::invalid_argument("correlation file " + path.string() + " is not square (" +
                                        std::to_string(m) + " rows, a row has " +
                                        std::to_string(row.size()) + " columns)");
        }
    }
    Eigen::MatrixXd R(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) R(i, j) = rows[i][j];
    return CorrelationMatrix::from_dense(std::move(R));
}

Eigen::MatrixXd psd_sqrt(const CorrelationMatrix& R) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R.entries());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("psd_sqrt: eigendecomposition failed");
    Eigen::VectorXd values = solver.eigenvalues();
    clamp_eigenvalues(values);
    return reconstruct(solver.eigenvectors(), values.cwiseSqrt());
}

namespace {

SpectralModel model_from_eigen(Eigen::MatrixXd basis, Eigen::VectorXd delta, double c) {
    SpectralModel model;
    model.m = static_cast<int>(delta.size());
    model.basis = std::move(basis);
    model.delta = std::move(delta);
    model.c = c;
    model.gamma.resize(model.m);
    model.d.resize(model.m);
    for (int j = 0; j < model.m; ++j) {
        const double dj = model.delta(j);
        const double denom = dj + c;
        model.gamma(j) = denom > 0.0 ? dj * dj / denom : 0.0;
        model.d(j) = denom > 0.0 ? dj * c / denom : 0.0;
    }
    return model;
}

}  // namespace

SpectralModel spectral_model(const CorrelationMatrix& R, double tau_t, double rho_t) {
    if (!(tau_t * rho_t > 0.0))
        throw std::invalid_argument("spectral_model: tau_t * rho_t must be positive");
    const double c = 1.0 / (tau_t * rho_t);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R.entries());
    if (solver.info() != Eigen::Success)
        throw std::invalid_argument("spectral_model: eigendecomposition failed");

    // Descending eigenvalue order for deterministic output.
    const int m = R.size();
    Eigen::VectorXd delta(m);
    Eigen::MatrixXd basis(m, m);
    for (int j = 0; j < m; ++j) {
        delta(j) = solver.eigenvalues()(m - 1 - j);
        basis.col(j) = solver.eigenvectors().col(m - 1 - j);
    }
    clamp_eigenvalues(delta);
    return model_from_eigen(std::move(basis), std::move(delta), c);
}

SpectralModel SpectralModel::with_noise_level(double c_new) const {
    if (c_new < 0.0) throw std::invalid_argument("with_noise_level: c must be >= 0");
    return model_from_eigen(basis, delta, c_new);
}

Eigen::MatrixXd SpectralModel::sqrt_r() const { return reconstruct(basis, delta.cwiseSqrt()); }

Eigen::MatrixXd SpectralModel::sqrt_r_ahat() const {
    return reconstruct(basis, gamma.cwiseSqrt());
}

Eigen::MatrixXd SpectralModel::sqrt_r_delta() const { return reconstruct(basis, d.cwiseSqrt()); }

CorrelationMatrix build_correlation(const CorrelationSpec& spec, int m) {
    switch (spec.kind) {
        case CorrelationKind::kIdentity: return identity_correlation(m);
        case CorrelationKind::kExponential: return exponential_correlation(m, spec.r);
        case CorrelationKind::kStandardExponential:
            return standard_exponential_correlation(m, spec.r);
        case CorrelationKind::kFile: {
            CorrelationMatrix R = load_correlation(spec.path);
            if (R.size() != m) {
                throw std::invalid_argument("correlation file holds a " + std::to_string(R.size()) +
                                            "x" + std::to_string(R.size()) + " matrix but m = " +
                                            std::to_string(m));
            }
            return R;
        }
    }
    throw std::logic_error("unreachable correlation kind");
}

std::string to_string(CorrelationKind kind) {
    switch (kind) {
        case CorrelationKind::kIdentity: return "identity";
        case CorrelationKind::kExponential: return "exponential";
        case CorrelationKind::kStandardExponential: return "standard-exponential";
        case CorrelationKind::kFile: return "file";
    }
    return "?";
}

CorrelationKind correlation_kind_from_string(const std::string& name) {
    if (name == "identity") return CorrelationKind::kIdentity;
    if (name == "exponential") return CorrelationKind::kExponential;
    if (name == "standard-exponential") return CorrelationKind::kStandardExponential;
    if (name == "file") return CorrelationKind::kFile;
    throw std::invalid_argument("unknown correlation model '" + name +
                                "' (expected identity, exponential, standard-exponential or file)");
}

}  // namespace rzf
