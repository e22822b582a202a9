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

#include "gsmimo/cpsc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gsmimo/estimate.hpp"

namespace gsmimo {

double CpscFrameConfig::overhead(int K, int n_t) const
{
    const double total = frame_length(K, n_t);
    return (total - static_cast<double>(Q) * I) / total;
}

void CpscFrameConfig::validate() const
{
    if (L < 1) throw ConfigError("cpsc: L must be at least 1");
    if (I < 1) throw ConfigError("cpsc: I must be at least 1");
    if (Q < L) throw ConfigError("cpsc: Q must be at least L");
}

namespace {

void check_taps(const std::vector<CMatrix>& taps, int Q)
{
    if (taps.empty()) throw std::invalid_argument("cpsc: no channel taps");
    if (Q < static_cast<int>(taps.size())) throw std::invalid_argument("cpsc: Q must be at least L");
    for (const auto& t : taps)
        if (t.rows() != taps.front().rows() || t.cols() != taps.front().cols())
            throw std::invalid_argument("cpsc: tap dimensions differ");
}

} // namespace

CMatrix build_block_circulant(const std::vector<CMatrix>& taps, int Q)
{
    check_taps(taps, Q);
    const Eigen::Index N = taps.front().rows();
    const Eigen::Index C = taps.front().cols();
    CMatrix H = CMatrix::Zero(N * Q, C * Q);
    for (int t = 0; t < Q; ++t)
        for (std::size_t l = 0; l < taps.size(); ++l) {
            const int col = ((t - static_cast<int>(l)) % Q + Q) % Q;
            H.block(t * N, col * C, N, C) += taps[l];
        }
    return H;
}

CMatrix block_dft(int Q, int n)
{
    CMatrix F(Q, Q);
    const double scale = 1.0 / std::sqrt(static_cast<double>(Q));
    for (int u = 0; u < Q; ++u)
        for (int v = 0; v < Q; ++v) F(u, v) = scale * std::polar(1.0, -2.0 * std::numbers::pi * u * v / Q);
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(Q) * n, static_cast<Eigen::Index>(Q) * n);
    for (int u = 0; u < Q; ++u)
        for (int v = 0; v < Q; ++v) out.block(u * n, v * n, n, n).diagonal().setConstant(F(u, v));
    return out;
}

std::vector<CMatrix> dft_diagonalize(const std::vector<CMatrix>& taps, int Q)
{
    check_taps(taps, Q);
    std::vector<CMatrix> D(static_cast<std::size_t>(Q), CMatrix::Zero(taps.front().rows(), taps.front().cols()));
    for (int q = 0; q < Q; ++q)
        for (std::size_t l = 0; l < taps.size(); ++l)
            D[static_cast<std::size_t>(q)] += std::polar(1.0, -2.0 * std::numbers::pi * q * static_cast<double>(l) / Q) * taps[l];
    return D;
}

CMatrix EquivalentModel::block_diagonal() const
{
    if (D_blocks.empty()) return {};
    const Eigen::Index N = D_blocks.front().rows();
    const Eigen::Index C = D_blocks.front().cols();
    const int Q = bins();
    CMatrix D = CMatrix::Zero(N * Q, C * Q);
    for (int q = 0; q < Q; ++q) D.block(q * N, q * C, N, C) = D_blocks[static_cast<std::size_t>(q)];
    return D;
}

CMatrix EquivalentModel::equivalent_channel() const
{
    if (D_blocks.empty()) return {};
    const Eigen::Index N = D_blocks.front().rows();
    const Eigen::Index C = D_blocks.front().cols();
    const int Q = bins();
    // block (q, t) of D (F (x) I) is F(q, t) D_q
    CMatrix H = CMatrix(N * Q, C * Q);
    const double scale = 1.0 / std::sqrt(static_cast<double>(Q));
    for (int q = 0; q < Q; ++q)
        for (int t = 0; t < Q; ++t)
            H.block(q * N, t * C, N, C) = scale * std::polar(1.0, -2.0 * std::numbers::pi * q * t / Q) * D_blocks[static_cast<std::size_t>(q)];
    return H;
}

CVector block_dft_apply(const CVector& y_prime, int Q, int N)
{
    if (y_prime.size() != static_cast<Eigen::Index>(Q) * N) throw std::invalid_argument("block_dft_apply: length is not N Q");
    CVector z = CVector::Zero(y_prime.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(Q));
    for (int q = 0; q < Q; ++q)
        for (int t = 0; t < Q; ++t)
            z.segment(q * N, N) += scale * std::polar(1.0, -2.0 * std::numbers::pi * q * t / Q) * y_prime.segment(t * N, N);
    return z;
}

EquivalentModel equivalent_model(const CVector& y_prime, const std::vector<CMatrix>& taps, int Q, double sigma2)
{
    check_taps(taps, Q);
    const int N = static_cast<int>(taps.front().rows());
    EquivalentModel m;
    m.z_prime = block_dft_apply(y_prime, Q, N);
    m.D_blocks = dft_diagonalize(taps, Q);
    m.sigma2 = sigma2;
    return m;
}

CMatrix build_frame(const std::vector<std::vector<int>>& codewords, const CpscFrameConfig& config, const GsmCodebook& codebook,
                    int K, double pilot_power)
{
    config.validate();
    if (static_cast<int>(codewords.size()) != config.I) throw std::invalid_argument("build_frame: expected I blocks");
    const int nt = codebook.n_t();
    const int L = config.L;
    const int Q = config.Q;
    CMatrix X = CMatrix::Zero(static_cast<Eigen::Index>(K) * nt, config.frame_length(K, nt));

    // pilot block: L-1 silent uses, then one impulse per transmit column every L uses
    const int guard = L - 1;
    const double amp = std::sqrt(pilot_power);
    for (int c = 0; c < K * nt; ++c) X(c, guard + c * L) = amp;

    int tau = pilot_block_length(K, nt, L);
    for (int b = 0; b < config.I; ++b) {
        const auto& block = codewords[static_cast<std::size_t>(b)];
        if (static_cast<int>(block.size()) != Q * K) throw std::invalid_argument("build_frame: expected Q K codewords per block");
        CMatrix data(static_cast<Eigen::Index>(K) * nt, Q);
        for (int t = 0; t < Q; ++t)
            for (int k = 0; k < K; ++k) data.block(k * nt, t, nt, 1) = codebook.vector(block[static_cast<std::size_t>(t * K + k)]);
        X.middleCols(tau, config.cp_len()) = data.rightCols(config.cp_len());
        X.middleCols(tau + config.cp_len(), Q) = data;
        tau += config.block_length();
    }
    return X;
}

CMatrix convolve_taps(const std::vector<CMatrix>& taps, const CMatrix& X)
{
    if (taps.empty()) throw std::invalid_argument("convolve_taps: no taps");
    CMatrix Y = CMatrix::Zero(taps.front().rows(), X.cols());
    for (Eigen::Index tau = 0; tau < X.cols(); ++tau)
        for (std::size_t l = 0; l < taps.size() && static_cast<Eigen::Index>(l) <= tau; ++l)
            Y.col(tau) += taps[l] * X.col(tau - static_cast<Eigen::Index>(l));
    return Y;
}

CpscFrame cpsc_frame_roundtrip(const std::vector<BitVector>& user_bits, const CpscFrameConfig& config,
                               const SelectiveChannel& channel, const GsmCodebook& codebook, double sigma2,
                               double pilot_power, Rng& rng)
{
    config.validate();
    const int K = channel.users;
    const int nt = codebook.n_t();
    if (static_cast<int>(user_bits.size()) != K) throw std::invalid_argument("cpsc_frame_roundtrip: one bit stream per user");
    if (channel.taps_count() != config.L) throw std::invalid_argument("cpsc_frame_roundtrip: channel tap count differs from L");
    if (channel.columns() != K * nt) throw std::invalid_argument("cpsc_frame_roundtrip: channel columns differ from K n_t");
    const int bpcu = codebook.bpcu();
    const int Q = config.Q;

    CpscFrame f;
    f.codewords.assign(static_cast<std::size_t>(config.I), std::vector<int>(static_cast<std::size_t>(Q * K)));
    for (int k = 0; k < K; ++k) {
        const auto& bits = user_bits[static_cast<std::size_t>(k)];
        if (static_cast<int>(bits.size()) != config.I * Q * bpcu)
            throw std::invalid_argument("cpsc_frame_roundtrip: bit stream length is not I Q bpcu");
        for (int b = 0; b < config.I; ++b)
            for (int t = 0; t < Q; ++t) {
                const auto first = bits.begin() + static_cast<std::ptrdiff_t>((b * Q + t) * bpcu);
                f.codewords[static_cast<std::size_t>(b)][static_cast<std::size_t>(t * K + k)] =
                    gsm_encode(BitVector(first, first + bpcu), codebook).index;
            }
    }

    f.transmitted = build_frame(f.codewords, config, codebook, K, pilot_power);
    f.received = convolve_taps(channel.taps, f.transmitted);
    if (sigma2 > 0.0) f.received += noise_matrix(f.received.rows(), f.received.cols(), sigma2, rng);

    const int N = channel.receive_antennas();
    const int pilot_len = pilot_block_length(K, nt, config.L);
    f.pilot_block = f.received.leftCols(pilot_len);
    int tau = pilot_len;
    for (int b = 0; b < config.I; ++b) {
        const int start = tau + config.cp_len();
        CVector yp(static_cast<Eigen::Index>(N) * Q);
        CVector xp(static_cast<Eigen::Index>(K) * nt * Q);
        for (int t = 0; t < Q; ++t) {
            yp.segment(t * N, N) = f.received.col(start + t);
            xp.segment(t * K * nt, K * nt) = f.transmitted.col(start + t);
        }
        f.data_blocks.push_back(std::move(yp));
        f.data_vectors.push_back(std::move(xp));
        tau += config.block_length();
    }
    return f;
}

} // namespace gsmimo
