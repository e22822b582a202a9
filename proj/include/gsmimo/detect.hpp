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

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "gsmimo/common.hpp"
#include "gsmimo/modulation.hpp"

namespace gsmimo {

struct DetectorParams {
    double damping = 0.3;
    int max_iters = 8;
    double epsilon = 1e-3;   // stop when the stacked-posterior L2 change drops below; 0 disables
};

DetectorParams default_mpgsm_params();
DetectorParams default_chemp_params();

// Per-user probability vectors over the codebook.
struct SoftOutput {
    std::vector<Eigen::VectorXd> p;
    int iterations_used = 0;
};

// Hard output: one codebook index per user.
using Decisions = std::vector<int>;

struct SoftDetection {
    SoftOutput soft;
    Decisions decisions;
};

// Called for every probability vector a message-passing detector produces.
// `kind` is "edge" (MP-GSM variable-to-observation messages), "posterior" or
// "message" (CHEMP node output after damping).
using ProbabilityObserver = std::function<void(int iteration, std::string_view kind, std::span<const double> p)>;

// Exhaustive search over S^K, user 1 most significant. Requires |S|^K <= 2^16.
Decisions ml_detect(const CVector& y, const CMatrix& H, const GsmCodebook& codebook, int K);

// Regularized linear estimate (H^H H + sigma2/E_s I)^-1 H^H y.
CVector mmse_estimate(const CVector& y, const CMatrix& H, double sigma2, double symbol_energy);

// Codeword closest to x in Euclidean distance.
int nearest_codeword(const CVector& x, const GsmCodebook& codebook);

Decisions mmse_detect(const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook, int K);

SoftDetection mpgsm_detect(const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook, int K,
                           const DetectorParams& params = default_mpgsm_params(),
                           const ProbabilityObserver& observer = {});

// Matched-filter domain: z = J x + v.
struct GramModel {
    CVector z;
    CMatrix J;
    double sigma_v2 = 0.0;
};

GramModel gram_model(const CVector& y, const CMatrix& H, double sigma2);

SoftDetection chemp_detect(const GramModel& model, const GsmCodebook& codebook, int K,
                           const DetectorParams& params = default_chemp_params(),
                           const ProbabilityObserver& observer = {});

// Codeword formed from the most probable pattern and, per slot, the most
// probable symbol under the marginals of p.
int marginal_decision(const Eigen::VectorXd& p, const GsmCodebook& codebook);

int argmax_decision(const Eigen::VectorXd& p);

std::vector<BitVector> hard_bits(const Decisions& decisions, const GsmCodebook& codebook);

} // namespace gsmimo
