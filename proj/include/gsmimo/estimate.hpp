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
#include <vector>

#include "gsmimo/channel.hpp"
#include "gsmimo/common.hpp"
#include "gsmimo/detect.hpp"
#include "gsmimo/rng.hpp"

namespace gsmimo {

// Received pilots for the flat channel: Y_p = A H + W_p.
struct FlatPilotObservation {
    CMatrix Y_p;
    double amplitude = 0.0;
};

double pilot_amplitude(int K, double symbol_energy);

FlatPilotObservation flat_pilot_phase(const FlatChannel& channel, double sigma2, double symbol_energy, Rng& rng);
FlatPilotObservation flat_pilot_phase(const FlatChannel& channel, double sigma2, double symbol_energy, std::uint64_t seed);

CMatrix mmse_channel_estimate_flat(const CMatrix& Y_p, double A, double sigma2);

// `partial` subtracts sigma2/(N A^2) from the diagonal; `full` subtracts the
// whole pilot-noise mean sigma2/A^2.
enum class GramCorrection { partial, full };

CMatrix estimate_J(const CMatrix& Y_p, double A, double sigma2, int N, GramCorrection correction = GramCorrection::partial);
CVector estimate_z(const CMatrix& Y_p, const CVector& y, double A, int N);

// Gram model for the matched-filter detector built from pilots only.
GramModel estimated_gram_model(const CMatrix& Y_p, const CVector& y, double A, double sigma2,
                               GramCorrection correction = GramCorrection::partial);

// Selective-channel pilots: for receive antenna i, y_P^i has K n_t L entries
// ordered (transmit column, tap), each sqrt(P) h + noise.
struct SelectivePilotObservation {
    CMatrix y_P;   // row i is y_P^i
    double pilot_power = 0.0;
    int taps = 1;
};

int pilot_block_length(int K, int n_t, int L);

// Pick the impulse responses out of a received pilot block (N x pilot_block_length).
SelectivePilotObservation extract_selective_pilots(const CMatrix& received_block, int K, int n_t, int L, double pilot_power);

CVector mmse_channel_estimate_selective(const CVector& y_P_i, double P, double sigma2);

// All receive antennas, reshaped into L tap matrices of N x K n_t.
std::vector<CMatrix> estimate_selective_taps(const SelectivePilotObservation& obs, double sigma2);

} // namespace gsmimo
