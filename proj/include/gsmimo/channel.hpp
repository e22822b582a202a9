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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gsmimo/common.hpp"
#include "gsmimo/rng.hpp"

namespace gsmimo {

// H is N x K*n_t; column (k*n_t + j) belongs to antenna j of user k.
struct FlatChannel {
    CMatrix gains;
    std::vector<double> column_vars;
    int users = 0;
    int n_t = 0;

    int receive_antennas() const { return static_cast<int>(gains.rows()); }
};

struct SelectiveChannel {
    std::vector<CMatrix> taps;     // L matrices, N x K*n_t
    std::vector<double> profile;   // Omega_0 .. Omega_{L-1}, sums to 1
    double decay_db = 0.0;
    int users = 0;
    int n_t = 0;

    int taps_count() const { return static_cast<int>(taps.size()); }
    int receive_antennas() const { return taps.empty() ? 0 : static_cast<int>(taps.front().rows()); }
    int columns() const { return taps.empty() ? 0 : static_cast<int>(taps.front().cols()); }
};

// Complex noise power per receive antenna; sigma2/2 per real dimension.
struct NoiseModel {
    double sigma2 = 1.0;
};

// Empty column_vars means perfect power control (all ones).
FlatChannel sample_flat(int N, int K, int n_t, std::span<const double> column_vars, Rng& rng);
FlatChannel sample_flat(int N, int K, int n_t, std::span<const double> column_vars, std::uint64_t seed);

CVector transmit_flat(const FlatChannel& channel, const CVector& x, NoiseModel noise, Rng& rng);
CVector transmit_flat(const FlatChannel& channel, const CVector& x, NoiseModel noise, std::uint64_t seed);

// Exponential power-delay profile Omega_l = Omega_0 10^(-xi l / 10), normalized.
std::vector<double> power_delay_profile(int L, double xi_db);

SelectiveChannel sample_selective(int N, int K, int n_t, int L, double xi_db, Rng& rng);
SelectiveChannel sample_selective(int N, int K, int n_t, int L, double xi_db, std::uint64_t seed);

// Noise power giving the requested average received SNR per receive antenna
// under unit-variance channel gains: sigma2 = K n_rf E_s / 10^(snr/10).
double snr_to_sigma2(double snr_db, int K, int n_rf, double avg_energy);

// Matrix of i.i.d. noise samples with E|w|^2 = sigma2.
CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, double sigma2, Rng& rng);

} // namespace gsmimo
