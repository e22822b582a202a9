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

#include <cmath>

#include "doctest.h"
#include "gsmimo/channel.hpp"
#include "gsmimo/cpsc.hpp"
#include "gsmimo/estimate.hpp"
#include "oracles.hpp"

using namespace gsmimo;

TEST_SUITE("estimate")
{
    TEST_CASE("noiseless pilots reproduce the channel and its Gram model")
    {
        const auto cb = make_codebook(4, 2, ModulationKind::qam, 4);
        const auto ch = sample_flat(16, 3, 4, {}, 2);
        const auto obs = flat_pilot_phase(ch, 0.0, cb.alphabet().avg_energy, 3);
        CHECK(obs.amplitude == doctest::Approx(std::sqrt(6.0)));
        const CMatrix H_hat = mmse_channel_estimate_flat(obs.Y_p, obs.amplitude, 0.0);
        CHECK((H_hat - ch.gains).norm() <= 1e-12 * ch.gains.norm());

        const CMatrix J = ch.gains.adjoint() * ch.gains / 16.0;
        const CVector x = oracle::stack(cb, {3, 17, 60});
        const CVector y = ch.gains * x;
        CHECK((estimate_J(obs.Y_p, obs.amplitude, 0.0, 16) - J).norm() <= 1e-12 * J.norm());
        CHECK((estimate_z(obs.Y_p, y, obs.amplitude, 16) - J * x).norm() <= 1e-12 * (J * x).norm());
    }

    TEST_CASE("MMSE flat estimate reaches the scalar LMMSE error")
    {
        Rng rng = make_rng(4);
        const double sigma2 = 0.8, A = 1.5;
        double err = 0.0;
        const int draws = 4000;
        for (int d = 0; d < draws; ++d) {
            const auto ch = sample_flat(8, 1, 2, {}, rng);
            const CMatrix Y = A * ch.gains + noise_matrix(8, 2, sigma2, rng);
            err += (mmse_channel_estimate_flat(Y, A, sigma2) - ch.gains).squaredNorm() / 16.0;
        }
        CHECK(err / draws == doctest::Approx(sigma2 / (A * A + sigma2)).epsilon(0.03));
    }

    TEST_CASE("Gram correction bias")
    {
        // Averaging over pilot noise for a fixed channel: the full correction is
        // unbiased, the partial one leaves (1 - 1/N) sigma2 / A^2 on the diagonal.
        const int N = 4;
        const auto ch = sample_flat(N, 1, 2, {}, 6);
        const CMatrix J = ch.gains.adjoint() * ch.gains / double(N);
        const double sigma2 = 0.5, A = 1.0;
        Rng rng = make_rng(7);
        CMatrix sum_full = CMatrix::Zero(2, 2), sum_partial = CMatrix::Zero(2, 2);
        const int draws = 100000;
        for (int d = 0; d < draws; ++d) {
            const CMatrix Y = A * ch.gains + noise_matrix(N, 2, sigma2, rng);
            sum_full += estimate_J(Y, A, sigma2, N, GramCorrection::full);
            sum_partial += estimate_J(Y, A, sigma2, N, GramCorrection::partial);
        }
        const CMatrix bias_full = sum_full / draws - J;
        const CMatrix bias_partial = sum_partial / draws - J;
        CHECK(bias_full.cwiseAbs().maxCoeff() < 0.01);
        CHECK(bias_partial(0, 0).real() == doctest::Approx((1.0 - 1.0 / N) * sigma2 / (A * A)).epsilon(0.03));
        CHECK(std::abs(bias_partial(0, 1)) < 0.01);
    }

    TEST_CASE("estimated Gram model shape")
    {
        const auto ch = sample_flat(12, 2, 2, {}, 1);
        const auto obs = flat_pilot_phase(ch, 0.1, 1.0, 2);
        const auto g = estimated_gram_model(obs.Y_p, CVector::Ones(12), obs.amplitude, 0.1);
        CHECK(g.J.rows() == 4);
        CHECK(g.z.size() == 4);
        CHECK(g.sigma_v2 == doctest::Approx(0.1 / 12));
        CHECK(g.J.isApprox(g.J.adjoint()));
    }

    TEST_CASE("selective pilot block length")
    {
        CHECK(pilot_block_length(16, 4, 3) == 2 + 192);
        CHECK(pilot_block_length(1, 1, 1) == 1);
    }

    TEST_CASE("noiseless selective pilots reproduce every tap")
    {
        const int K = 2, nt = 2, N = 3, L = 3;
        const auto cb = make_codebook(nt, 1, ModulationKind::bpsk, 2);
        const auto ch = sample_selective(N, K, nt, L, 3.0, 5);
        const CpscFrameConfig cfg{4, 1, L};
        const std::vector<std::vector<int>> cw{std::vector<int>(static_cast<std::size_t>(cfg.Q * K), 1)};
        const double P = 2.5;
        const CMatrix Y = convolve_taps(ch.taps, build_frame(cw, cfg, cb, K, P));
        const auto obs = extract_selective_pilots(Y.leftCols(pilot_block_length(K, nt, L)), K, nt, L, P);
        CHECK(obs.y_P.cols() == K * nt * L);
        for (int i = 0; i < N; ++i) {
            const CVector h = mmse_channel_estimate_selective(obs.y_P.row(i).transpose(), P, 0.0);
            for (int c = 0; c < K * nt; ++c)
                for (int l = 0; l < L; ++l) CHECK(std::abs(h[c * L + l] - ch.taps[static_cast<std::size_t>(l)](i, c)) < 1e-12);
        }
        const auto taps = estimate_selective_taps(obs, 0.0);
        for (int l = 0; l < L; ++l)
            CHECK((taps[static_cast<std::size_t>(l)] - ch.taps[static_cast<std::size_t>(l)]).norm() <=
                  1e-12 * ch.taps[static_cast<std::size_t>(l)].norm());
    }

    TEST_CASE("selective pilot extraction checks the block length")
    {
        CHECK_THROWS(extract_selective_pilots(CMatrix::Zero(2, 6), 1, 1, 3, 1.0));
    }
}
