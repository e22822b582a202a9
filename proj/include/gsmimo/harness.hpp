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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gsmimo/config.hpp"
#include "gsmimo/detect.hpp"

namespace gsmimo {

std::string library_version();

struct BerPoint {
    double snr_db = 0.0;
    double sigma2 = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    double ci_half = 0.0;

    friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

struct BerResult {
    std::string scenario_id;
    ScenarioConfig config;
    std::vector<BerPoint> points;
    double wall_time_s = 0.0;
    std::string version;

    friend bool operator==(const BerResult&, const BerResult&) = default;
};

// 95% normal-approximation half-width of a binomial proportion.
double ci_half_width(std::uint64_t errors, std::uint64_t bits);

struct TrialOutcome {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

// One seeded trial: a channel draw and the data it carries. Pure function of
// (config, sigma2, trial); the SNR does not enter the stream keys, so every
// SNR point sees the same channels, bits and unit noise.
TrialOutcome run_trial(const ScenarioConfig& cfg, const GsmCodebook& codebook, double sigma2, std::uint64_t trial);

// Dispatch to the configured detector; `users` counts virtual users on the
// frequency-domain model.
Decisions run_detector(const ScenarioConfig& cfg, const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook,
                       int users);

BerPoint run_point(const ScenarioConfig& cfg, const GsmCodebook& codebook, double snr_db, int workers = 1);

BerResult run_ber(const ScenarioConfig& cfg, int workers = 1);

struct TargetCrossing {
    bool censored = true;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
};

// SNR where the BER curve crosses `target`, log-linear between the first
// bracketing pair of points. Zero-error points count as below any target.
TargetCrossing snr_at_target(std::span<const double> snr_db, std::span<const double> ber, double target);
TargetCrossing snr_at_target(const BerResult& result, double target);

struct SweepResult {
    std::string name;
    double target_ber = 1e-3;
    std::vector<BerResult> results;
    std::vector<TargetCrossing> crossings;
};

SweepResult run_sweep(const std::string& name, const std::vector<ScenarioConfig>& scenarios, double target_ber, int workers = 1);

struct Preset {
    std::string name;
    std::string description;
    std::string notes;
    std::vector<ScenarioConfig> scenarios;
    bool with_bound = false;   // overlay the analytical bound for each scenario
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

} // namespace gsmimo
