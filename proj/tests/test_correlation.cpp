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

#include <filesystem>
#include <fstream>

#include "rzf/correlation.hpp"
#include "rzf/rng.hpp"

using namespace rzf;

namespace {

std::filesystem::path write_temp_csv(const char* name, const char* content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("exponential_correlation - r = 0 gives the identity") {
    const CorrelationMatrix R = exponential_correlation(3, 0.0);
    CHECK((R.entries() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exponential_correlation - squared index distance") {
    // m=3, r=0.4: |i-j|=1 -> 0.4, |i-j|=2 -> 0.4^4 = 0.0256
    const CorrelationMatrix R = exponential_correlation(3, 0.4);
    CHECK(R.entries()(0, 0) == 1.0);
    CHECK(R.entries()(0, 1) == Catch::Approx(0.4).margin(1e-15));
    CHECK(R.entries()(1, 0) == Catch::Approx(0.4).margin(1e-15));
    CHECK(R.entries()(0, 2) == Catch::Approx(0.0256).margin(1e-15));
}

TEST_CASE("standard_exponential_correlation - plain index distance") {
    const CorrelationMatrix R = standard_exponential_correlation(3, 0.4);
    CHECK(R.entries()(0, 1) == Catch::Approx(0.4).margin(1e-15));
    CHECK(R.entries()(0, 2) == Catch::Approx(0.16).margin(1e-15));
}

TEST_CASE("exponential_correlation - PSD at strong correlation") {
    const CorrelationMatrix R = exponential_correlation(50, 0.9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R.entries(), Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("exponential_correlation - symmetry and off-diagonal decay") {
    for (double r : {0.2, 0.5, 0.9}) {
        const CorrelationMatrix R = standard_exponential_correlation(20, r);
        CHECK((R.entries() - R.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(R.entries()(0, 1) == Catch::Approx(r).margin(1e-15));
        for (int k = 2; k < 20; ++k) {
            CHECK(R.entries()(0, k) <= R.entries()(0, k - 1));
        }
    }
}

TEST_CASE("exponential_correlation - rejects invalid arguments") {
    CHECK_THROWS_AS(exponential_correlation(0, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(exponential_correlation(4, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(exponential_correlation(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(standard_exponential_correlation(4, 1.2), std::invalid_argument);
}

TEST_CASE("spectral_model - identity correlation, scalar maps") {
    // tau_t * rho_t = 12.5 -> c = 0.08, gamma = 1/1.08, d = 0.08/1.08
    const CorrelationMatrix R = identity_correlation(6);
    const SpectralModel model = spectral_model(R, 1.0, 12.5);
    CHECK(model.c == Catch::Approx(0.08).margin(1e-15));
    for (int j = 0; j < model.m; ++j) {
        CHECK(model.gamma(j) == Catch::Approx(1.0 / 1.08).margin(1e-12));
        CHECK(model.d(j) == Catch::Approx(0.08 / 1.08).margin(1e-12));
    }
}

TEST_CASE("spectral_model - perfect CSI limit") {
    const CorrelationMatrix R = standard_exponential_correlation(12, 0.5);
    const SpectralModel model = spectral_model(R, 1.0, 1e12);
    CHECK((model.gamma - model.delta).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(model.d.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral_model - invariants") {
    const CorrelationMatrix R = standard_exponential_correlation(25, 0.6);
    const SpectralModel model = spectral_model(R, 1.5, 4.0);

    SECTION("orthonormal basis") {
        const Eigen::MatrixXd gram = model.basis.transpose() * model.basis;
        CHECK((gram - Eigen::MatrixXd::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("eigenvalue maps and spectrum consistency") {
        for (int j = 0; j < model.m; ++j) {
            const double dj = model.delta(j);
            CHECK(model.gamma(j) == Catch::Approx(dj * dj / (dj + model.c)).margin(1e-12));
            CHECK(model.d(j) == Catch::Approx(dj * model.c / (dj + model.c)).margin(1e-12));
            CHECK(model.gamma(j) + model.d(j) == Catch::Approx(dj).margin(1e-12));
            CHECK(model.gamma(j) >= 0.0);
            CHECK(model.d(j) >= 0.0);
            CHECK(model.gamma(j) <= dj + 1e-15);
            CHECK(model.d(j) <= std::min(dj, model.c) + 1e-15);
        }
    }
    SECTION("descending order") {
        for (int j = 1; j < model.m; ++j) CHECK(model.delta(j) <= model.delta(j - 1));
    }
    SECTION("round trip reconstructs R") {
        const Eigen::MatrixXd back =
            model.basis * model.delta.asDiagonal() * model.basis.transpose();
        CHECK((back - R.entries()).norm() < 1e-8 * R.entries().norm());
    }
}

TEST_CASE("spectral_model - estimation improves with pilot energy") {
    const CorrelationMatrix R = standard_exponential_correlation(30, 0.7);
    double previous = 1e300;
    for (double energy : {0.5, 1.0, 2.0, 8.0, 32.0, 128.0}) {
        const SpectralModel model = spectral_model(R, 1.0, energy);
        const double err = model.rdelta_trace_mean();
        CHECK(err < previous);
        previous = err;
    }
}

TEST_CASE("spectral_model - rejects nonpositive pilot energy") {
    const CorrelationMatrix R = identity_correlation(4);
    CHECK_THROWS_AS(spectral_model(R, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("psd_sqrt - identity and diagonal cases") {
    CHECK((psd_sqrt(identity_correlation(5)) - Eigen::MatrixXd::Identity(5, 5))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = 4.0;
    D(1, 1) = 1.0;
    const Eigen::MatrixXd S = psd_sqrt(CorrelationMatrix::from_dense(D));
    CHECK(S(0, 0) == Catch::Approx(2.0).margin(1e-12));
    CHECK(S(1, 1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(S(0, 1)) < 1e-12);
}

TEST_CASE("psd_sqrt - reconstruction on exponential model") {
    const CorrelationMatrix R = exponential_correlation(10, 0.4);
    const Eigen::MatrixXd S = psd_sqrt(R);
    CHECK((S * S.transpose() - R.entries()).norm() <= 1e-10 * R.entries().norm());
}

TEST_CASE("psd_sqrt - random PSD matrices reconstruct") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 12);
        const Eigen::MatrixXd G = gaussian_matrix(m, m, rng);
        const CorrelationMatrix R = CorrelationMatrix::from_dense(G * G.transpose());
        const Eigen::MatrixXd S = psd_sqrt(R);
        CHECK((S * S.transpose() - R.entries()).norm() <= 1e-10 * (1.0 + R.entries().norm()));
    }
}

TEST_CASE("load_correlation - valid identity file") {
    const auto path = write_temp_csv("rzf_identity.csv", "1,0\n0,1\n");
    const CorrelationMatrix R = load_correlation(path);
    CHECK(R.size() == 2);
    CHECK(R.entries()(0, 1) == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("load_correlation - rejects non-PSD input") {
    // eigenvalues of [[1,2],[2,1]] are 3 and -1
    const auto path = write_temp_csv("rzf_nonpsd.csv", "1,2\n2,1\n");
    CHECK_THROWS_WITH(load_correlation(path), Catch::Matchers::ContainsSubstring("semi-definite"));
    std::filesystem::remove(path);
}

TEST_CASE("load_correlation - rejects non-square input") {
    const auto path = write_temp_csv("rzf_nonsquare.csv", "1,0,0\n0,1,0\n");
    CHECK_THROWS_WITH(load_correlation(path), Catch::Matchers::ContainsSubstring("square"));
    std::filesystem::remove(path);
}

TEST_CASE("load_correlation - rejects asymmetry beyond 1e-8") {
    const auto path = write_temp_csv("rzf_asym.csv", "1,0.5\n0.6,1\n");
    CHECK_THROWS_WITH(load_correlation(path), Catch::Matchers::ContainsSubstring("asymmetric"));
    std::filesystem::remove(path);
}

TEST_CASE("load_correlation - rejects garbage and missing files") {
    const auto path = write_temp_csv("rzf_garbage.csv", "1,x\nx,1\n");
    CHECK_THROWS_AS(load_correlation(path), std::invalid_argument);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_correlation("/nonexistent/rzf.csv"), std::invalid_argument);
}

TEST_CASE("with_noise_level - reuses the eigendecomposition consistently") {
    const CorrelationMatrix R = standard_exponential_correlation(15, 0.5);
    const SpectralModel a = spectral_model(R, 1.0, 5.0);
    const SpectralModel b = a.with_noise_level(1.0 / (1.0 * 9.0));
    const SpectralModel direct = spectral_model(R, 1.0, 9.0);
    CHECK((b.gamma - direct.gamma).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b.d - direct.d).cwiseAbs().maxCoeff() < 1e-14);
}
