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

// Reference implementations used only by the tests. Each one takes a
// different route from the library code it checks.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "gsmimo/common.hpp"
#include "gsmimo/modulation.hpp"

namespace oracle {

using gsmimo::CMatrix;
using gsmimo::CVector;
using gsmimo::cplx;

// Activation patterns as bitmasks (antenna 1 = most significant of n_t bits),
// taken in decreasing numeric order and truncated to a power of two.
inline std::vector<unsigned> pattern_masks(int n_t, int n_rf)
{
    std::vector<unsigned> all;
    for (int m = (1 << n_t) - 1; m >= 0; --m)
        if (std::popcount(static_cast<unsigned>(m)) == n_rf) all.push_back(static_cast<unsigned>(m));
    std::size_t keep = 1;
    while (keep * 2 <= all.size()) keep *= 2;
    all.resize(keep);
    return all;
}

// Count ordered pattern-tuple pairs by q = K n_rf - sum of common active antennas.
inline std::vector<std::uint64_t> phi_by_enumeration(const std::vector<unsigned>& masks, int K, int n_rf)
{
    const std::size_t S = masks.size();
    std::uint64_t tuples = 1;
    for (int k = 0; k < K; ++k) tuples *= S;
    std::vector<std::uint64_t> phi(static_cast<std::size_t>(K * n_rf + 1), 0);
    for (std::uint64_t a = 0; a < tuples; ++a)
        for (std::uint64_t b = 0; b < tuples; ++b) {
            int common = 0;
            std::uint64_t ra = a, rb = b;
            for (int k = 0; k < K; ++k) {
                common += std::popcount(masks[ra % S] & masks[rb % S]);
                ra /= S;
                rb /= S;
            }
            ++phi[static_cast<std::size_t>(K * n_rf - common)];
        }
    return phi;
}

// Integrand of the finite-range form of the Rayleigh PEP,
// (1/pi) int_0^{pi/2} (1 + a / sin^2 t)^-N dt, by composite Simpson.
inline double pep_by_quadrature(double alpha, int N, int intervals = 20000)
{
    auto f = [&](double t) {
        const double s = std::sin(t);
        if (s == 0.0) return 0.0;
        return std::pow(s * s / (s * s + alpha), N);
    };
    const double h = (std::numbers::pi / 2) / intervals;
    double acc = f(0.0) + f(std::numbers::pi / 2);
    for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0 / std::numbers::pi;
}

// Average BPSK bit error probability over Rayleigh fading at mean SNR gamma.
inline double rayleigh_bpsk_ber(double gamma) { return 0.5 * (1.0 - std::sqrt(gamma / (1.0 + gamma))); }

// Stacked transmit vector for a tuple of codeword indices.
inline CVector stack(const gsmimo::GsmCodebook& cb, const std::vector<int>& idx)
{
    const int nt = cb.n_t();
    CVector x(static_cast<Eigen::Index>(idx.size()) * nt);
    for (std::size_t k = 0; k < idx.size(); ++k) x.segment(static_cast<Eigen::Index>(k) * nt, nt) = cb.vector(idx[k]);
    return x;
}

// Exhaustive ML iterating the last user fastest through full residuals.
// Ties resolve to the lexicographically smallest tuple.
inline std::vector<int> ml_by_enumeration(const CVector& y, const CMatrix& H, const gsmimo::GsmCodebook& cb, int K)
{
    const int S = cb.size();
    std::vector<int> cur(static_cast<std::size_t>(K), 0), best = cur;
    double best_metric = std::numeric_limits<double>::infinity();
    std::uint64_t total = 1;
    for (int k = 0; k < K; ++k) total *= static_cast<std::uint64_t>(S);
    for (std::uint64_t n = 0; n < total; ++n) {
        std::uint64_t r = n;
        for (int k = K - 1; k >= 0; --k) {
            cur[static_cast<std::size_t>(k)] = static_cast<int>(r % static_cast<std::uint64_t>(S));
            r /= static_cast<std::uint64_t>(S);
        }
        const double m = (y - H * stack(cb, cur)).squaredNorm();
        if (m < best_metric) {
            best_metric = m;
            best = cur;
        }
    }
    return best;
}

// Bit errors between two codeword-index tuples, XOR of their labels.
inline int bit_errors(const std::vector<int>& a, const std::vector<int>& b)
{
    int e = 0;
    for (std::size_t k = 0; k < a.size(); ++k) e += std::popcount(static_cast<unsigned>(a[k] ^ b[k]));
    return e;
}

// Block-circulant convolution of a length-Q block with cyclic wrap, written
// directly from y(t) = sum_l H_l x((t - l) mod Q).
inline CVector cyclic_convolve(const std::vector<CMatrix>& taps, const std::vector<CVector>& x)
{
    const int Q = static_cast<int>(x.size());
    const Eigen::Index N = taps.front().rows();
    CVector y = CVector::Zero(N * Q);
    for (int t = 0; t < Q; ++t)
        for (std::size_t l = 0; l < taps.size(); ++l)
            y.segment(t * N, N) += taps[l] * x[static_cast<std::size_t>(((t - static_cast<int>(l)) % Q + Q) % Q)];
    return y;
}

// Unitary DFT matrix of size Q, entries exp(-2 pi j u v / Q) / sqrt(Q).
inline CMatrix dft(int Q)
{
    CMatrix F(Q, Q);
    for (int u = 0; u < Q; ++u)
        for (int v = 0; v < Q; ++v) F(u, v) = std::polar(1.0 / std::sqrt(double(Q)), -2.0 * std::numbers::pi * u * v / Q);
    return F;
}

// Kronecker product F (x) I_n built entry by entry.
inline CMatrix kron_identity(const CMatrix& F, int n)
{
    CMatrix out = CMatrix::Zero(F.rows() * n, F.cols() * n);
    for (Eigen::Index u = 0; u < F.rows(); ++u)
        for (Eigen::Index v = 0; v < F.cols(); ++v)
            for (int i = 0; i < n; ++i) out(u * n + i, v * n + i) = F(u, v);
    return out;
}

} // namespace oracle
