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
#include <random>

#include <Eigen/Dense>

namespace rzf {

using Rng = std::mt19937_64;

// Purpose tags keep the substreams of one trial independent of each other,
// so adding a new stream never perturbs the draws of existing ones.
enum class StreamPurpose : std::uint64_t {
    kChannel = 1,
    kTraining = 2,
    kSymbols = 3,
    kNoise = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based substream derivation keyed by (master seed, trial, purpose).
inline Rng substream(std::uint64_t master_seed, std::uint64_t trial, StreamPurpose purpose) {
    std::uint64_t key = splitmix64(master_seed);
    key = splitmix64(key ^ splitmix64(trial));
    key = splitmix64(key ^ static_cast<std::uint64_t>(purpose));
    return Rng(key);
}

// Independent seed for a derived run (e.g. one sweep point).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(salt));
}

// i.i.d. N(0,1) entries, filled column-major for a deterministic draw order.
inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
    return out;
}

inline Eigen::VectorXd gaussian_vector(int size, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd out(size);
    for (int i = 0; i < size; ++i) out(i) = normal(rng);
    return out;
}

// Uniform BPSK symbols over {-1,+1}^n.
inline Eigen::VectorXd bpsk_vector(int size, Rng& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    Eigen::VectorXd out(size);
    for (int i = 0; i < size; ++i) out(i) = bit(rng) ? 1.0 : -1.0;
    return out;
}

}  // namespace rzf
