// SPDX-License-Identifier: Apache-2.0
//
// gsmimo: link-level simulation of uplink multiuser GSM-MIMO
// Copyright (C) 2026 The gsmimo Authors
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

#include "gsmimo/channel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace gsmimo {

namespace {

std::vector<double> resolve_column_vars(int columns, std::span<const double> column_vars)
{
    if (column_vars.empty()) return std::vector<double>(static_cast<std::size_t>(columns), 1.0);
    if (static_cast<int>(column_vars.size()) != columns)
        throw ConfigError("column_vars must have K*n_t = " + std::to_string(columns) + " entries");
    double total = 0.0;
    for (double v : column_vars) {
        if (!(v >= 0.0)) throw ConfigError("column variances must be non-negative");
        total += v;
    }
    if (std::abs(total - columns) > 1e-9 * columns) throw ConfigError("column variances must sum to K*n_t");
    return {column_vars.begin(), column_vars.end()};
}

} // namespace

FlatChannel sample_flat(int N, int K, int n_t, std::span<const double> column_vars, Rng& rng)
{
    if (N < 1 || K < 1 || n_t < 1) throw ConfigError("channel dimensions must be positive");
    const int cols = K * n_t;
    FlatChannel ch;
    ch.column_vars = resolve_column_vars(cols, column_vars);
    ch.users = K;
    ch.n_t = n_t;
    ch.gains.resize(N, cols);
    ComplexNormal cn;
    for (int c = 0; c < cols; ++c)
        for (int i = 0; i < N; ++i) ch.gains(i, c) = cn(rng, ch.column_vars[static_cast<std::size_t>(c)]);
    return ch;
}

FlatChannel sample_flat(int N, int K, int n_t, std::span<const double> column_vars, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return sample_flat(N, K, n_t, column_vars, rng);
}

CVector transmit_flat(const FlatChannel& channel, const CVector& x, NoiseModel noise, Rng& rng)
{
    if (x.size() != channel.gains.cols())
        throw std::invalid_argument("transmit_flat: x has length " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(channel.gains.cols()));
    CVector y = channel.gains * x;
    if (noise.sigma2 > 0.0) {
        ComplexNormal cn;
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += cn(rng, noise.sigma2);
    }
    return y;
}

CVector transmit_flat(const FlatChannel& channel, const CVector& x, NoiseModel noise, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return transmit_flat(channel, x, noise, rng);
}

std::vector<double> power_delay_profile(int L, double xi_db)
{
    if (L < 1) throw ConfigError("need L >= 1");
    if (!(xi_db >= 0.0)) throw ConfigError("need xi >= 0 dB");
    std::vector<double> omega(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) omega[static_cast<std::size_t>(l)] = std::pow(10.0, -xi_db * l / 10.0);
    const double total = std::accumulate(omega.begin(), omega.end(), 0.0);
    for (double& w : omega) w /= total;
    return omega;
}

SelectiveChannel sample_selective(int N, int K, int n_t, int L, double xi_db, Rng& rng)
{
    if (N < 1 || K < 1 || n_t < 1) throw ConfigError("channel dimensions must be positive");
    SelectiveChannel ch;
    ch.profile = power_delay_profile(L, xi_db);
    ch.decay_db = xi_db;
    ch.users = K;
    ch.n_t = n_t;
    ComplexNormal cn;
    for (int l = 0; l < L; ++l) {
        CMatrix tap(N, K * n_t);
        for (int c = 0; c < K * n_t; ++c)
            for (int i = 0; i < N; ++i) tap(i, c) = cn(rng, ch.profile[static_cast<std::size_t>(l)]);
        ch.taps.push_back(std::move(tap));
    }
    return ch;
}

SelectiveChannel sample_selective(int N, int K, int n_t, int L, double xi_db, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return sample_selective(N, K, n_t, L, xi_db, rng);
}

double snr_to_sigma2(double snr_db, int K, int n_rf, double avg_energy)
{
    return K * n_rf * avg_energy / std::pow(10.0, snr_db / 10.0);
}

CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, double sigma2, Rng& rng)
{
    CMatrix w(rows, cols);
    ComplexNormal cn;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) w(r, c) = cn(rng, sigma2);
    return w;
}

} // namespace gsmimo
