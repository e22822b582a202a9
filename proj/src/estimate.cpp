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

#include "gsmimo/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace gsmimo {

double pilot_amplitude(int K, double symbol_energy) { return std::sqrt(K * symbol_energy); }

FlatPilotObservation flat_pilot_phase(const FlatChannel& channel, double sigma2, double symbol_energy, Rng& rng)
{
    FlatPilotObservation obs;
    obs.amplitude = pilot_amplitude(channel.users, symbol_energy);
    obs.Y_p = obs.amplitude * channel.gains;
    if (sigma2 > 0.0) obs.Y_p += noise_matrix(channel.gains.rows(), channel.gains.cols(), sigma2, rng);
    return obs;
}

FlatPilotObservation flat_pilot_phase(const FlatChannel& channel, double sigma2, double symbol_energy, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return flat_pilot_phase(channel, sigma2, symbol_energy, rng);
}

CMatrix mmse_channel_estimate_flat(const CMatrix& Y_p, double A, double sigma2)
{
    return (A / (A * A + sigma2)) * Y_p;
}

CMatrix estimate_J(const CMatrix& Y_p, double A, double sigma2, int N, GramCorrection correction)
{
    if (N < 1) throw std::invalid_argument("estimate_J: N must be positive");
    const double A2 = A * A;
    CMatrix J = Y_p.adjoint() * Y_p / (N * A2);
    const double shift = correction == GramCorrection::full ? sigma2 / A2 : sigma2 / N / A2;
    J.diagonal().array() -= shift;
    return J;
}

CVector estimate_z(const CMatrix& Y_p, const CVector& y, double A, int N)
{
    if (Y_p.rows() != y.size()) throw std::invalid_argument("estimate_z: pilot rows do not match y");
    return Y_p.adjoint() * y / (N * A);
}

GramModel estimated_gram_model(const CMatrix& Y_p, const CVector& y, double A, double sigma2, GramCorrection correction)
{
    const int N = static_cast<int>(Y_p.rows());
    return GramModel{estimate_z(Y_p, y, A, N), estimate_J(Y_p, A, sigma2, N, correction), sigma2 / N};
}

int pilot_block_length(int K, int n_t, int L) { return (L - 1) + K * n_t * L; }

SelectivePilotObservation extract_selective_pilots(const CMatrix& received_block, int K, int n_t, int L, double pilot_power)
{
    if (received_block.cols() != pilot_block_length(K, n_t, L))
        throw std::invalid_argument("extract_selective_pilots: block length mismatch");
    const int cols = K * n_t;
    SelectivePilotObservation obs;
    obs.pilot_power = pilot_power;
    obs.taps = L;
    obs.y_P.resize(received_block.rows(), static_cast<Eigen::Index>(cols) * L);
    for (int c = 0; c < cols; ++c)
        for (int l = 0; l < L; ++l) obs.y_P.col(c * L + l) = received_block.col((L - 1) + c * L + l);
    return obs;
}

CVector mmse_channel_estimate_selective(const CVector& y_P_i, double P, double sigma2)
{
    return (std::sqrt(P) / (P + sigma2)) * y_P_i;
}

std::vector<CMatrix> estimate_selective_taps(const SelectivePilotObservation& obs, double sigma2)
{
    const Eigen::Index N = obs.y_P.rows();
    const int L = obs.taps;
    const Eigen::Index cols = obs.y_P.cols() / L;
    std::vector<CMatrix> taps(static_cast<std::size_t>(L), CMatrix(N, cols));
    for (Eigen::Index i = 0; i < N; ++i) {
        const CVector h = mmse_channel_estimate_selective(obs.y_P.row(i).transpose(), obs.pilot_power, sigma2);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (int l = 0; l < L; ++l) taps[static_cast<std::size_t>(l)](i, c) = h[c * L + l];
    }
    return taps;
}

} // namespace gsmimo
