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
#include "gsmimo/modulation.hpp"
#include "gsmimo/rng.hpp"

namespace gsmimo {

struct CpscFrameConfig {
    int Q = 6;   // data vectors per block
    int I = 1;   // data blocks per frame
    int L = 3;   // multipath taps

    int cp_len() const { return L - 1; }
    int block_length() const { return Q + L - 1; }
    int frame_length(int K, int n_t) const { return (K * n_t + 1) * L + (Q + L - 1) * I - 1; }
    // Fraction of the frame spent on pilots and cyclic prefixes.
    double overhead(int K, int n_t) const;
    void validate() const;
};

// N Q x K n_t Q matrix with H^(l) at block (t, (t - l) mod Q).
CMatrix build_block_circulant(const std::vector<CMatrix>& taps, int Q);
inline CMatrix build_block_circulant(const SelectiveChannel& ch, int Q) { return build_block_circulant(ch.taps, Q); }

// Unitary block DFT F (x) I_n.
CMatrix block_dft(int Q, int n);

// D_q = sum_l H^(l) exp(-j 2 pi q l / Q).
std::vector<CMatrix> dft_diagonalize(const std::vector<CMatrix>& taps, int Q);
inline std::vector<CMatrix> dft_diagonalize(const SelectiveChannel& ch, int Q) { return dft_diagonalize(ch.taps, Q); }

// Frequency-domain model z' = D (F (x) I) x' + w'.
struct EquivalentModel {
    CVector z_prime;
    std::vector<CMatrix> D_blocks;
    double sigma2 = 0.0;

    int bins() const { return static_cast<int>(D_blocks.size()); }
    CMatrix block_diagonal() const;
    // H-bar, dense. Columns follow x' = [x^(0); ...; x^(Q-1)], so the
    // detectors see K Q virtual users.
    CMatrix equivalent_channel() const;
};

// Block DFT of a CP-stripped block y' (length N Q).
CVector block_dft_apply(const CVector& y_prime, int Q, int N);

EquivalentModel equivalent_model(const CVector& y_prime, const std::vector<CMatrix>& taps, int Q, double sigma2);

// One transmitted frame and what the receiver sees of it.
struct CpscFrame {
    CMatrix transmitted;                       // K n_t x frame length
    CMatrix received;                          // N x frame length
    CMatrix pilot_block;                       // received pilot block, N x ((L-1) + K n_t L)
    std::vector<CVector> data_blocks;          // CP-stripped y', length N Q each
    std::vector<std::vector<int>> codewords;   // [block][t K + k]
    std::vector<CVector> data_vectors;         // x' per block
};

// Time-domain transmit sequence of a frame (pilots, then CP + data per block).
// codewords[b][t K + k] is user k's codeword at use t of block b.
CMatrix build_frame(const std::vector<std::vector<int>>& codewords, const CpscFrameConfig& config, const GsmCodebook& codebook,
                    int K, double pilot_power);

// Linear convolution y(tau) = sum_l H^(l) x(tau - l), transmission starts from silence.
CMatrix convolve_taps(const std::vector<CMatrix>& taps, const CMatrix& X);

// user_bits[k] holds I Q bpcu bits, consumed block by block and use by use.
CpscFrame cpsc_frame_roundtrip(const std::vector<BitVector>& user_bits, const CpscFrameConfig& config,
                               const SelectiveChannel& channel, const GsmCodebook& codebook, double sigma2,
                               double pilot_power, Rng& rng);

} // namespace gsmimo
