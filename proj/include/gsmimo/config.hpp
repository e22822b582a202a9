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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gsmimo/detect.hpp"
#include "gsmimo/estimate.hpp"
#include "gsmimo/modulation.hpp"

namespace gsmimo {

enum class DetectorKind { ml, mmse, mpgsm, chemp };
enum class CsiMode { perfect, estimated };
enum class ChannelMode { flat, selective };

DetectorKind parse_detector(std::string_view s);
CsiMode parse_csi(std::string_view s);
ChannelMode parse_channel(std::string_view s);
std::string to_string(DetectorKind d);
std::string to_string(CsiMode c);
std::string to_string(ChannelMode c);

// One experiment. Zero-valued detector parameters fall back to the
// detector's defaults; zero pilot power means K E_s.
struct ScenarioConfig {
    std::string id = "scenario";
    int K = 1;
    int N = 1;
    int n_t = 1;
    int n_rf = 1;
    ModulationKind modulation = ModulationKind::bpsk;
    int order = 2;
    std::vector<double> snr_db{0.0};

    DetectorKind detector = DetectorKind::ml;
    double damping = 0.0;
    int max_iters = 0;
    double epsilon = -1.0;

    CsiMode csi = CsiMode::perfect;
    GramCorrection gram_correction = GramCorrection::partial;
    double pilot_power = 0.0;

    ChannelMode channel = ChannelMode::flat;
    int L = 3;
    double xi_db = 3.0;
    int Q = 6;
    int I = 1;
    std::vector<double> column_vars;

    std::uint64_t min_errors = 200;
    std::uint64_t max_bits = 20'000'000;
    std::uint64_t max_trials = 0;        // 0 = unlimited
    int vectors_per_trial = 1;           // data vectors sharing one flat channel draw
    int batch_trials = 32;
    double ber_floor = 0.0;              // skip higher SNR points once BER falls below
    std::uint64_t seed = 1;

    GsmCodebook codebook() const;
    int bpcu() const;
    int eta() const { return K * bpcu(); }
    DetectorParams detector_params() const;
    double effective_pilot_power() const;
    // Throws ConfigError on the first inconsistency.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// key = value lines; '#' starts a comment; [section] headers are accepted
// and ignored. Values may be numbers, bare or quoted strings, or [a, b, ...].
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path& path);

// Apply entries on top of `base`. Unknown keys are an error.
ScenarioConfig apply_config(const ConfigMap& entries, ScenarioConfig base = {});
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Inverse of apply_config: every field as key = value text.
std::string to_config_text(const ScenarioConfig& cfg);

// "start:stop:step" inclusive range or "x,y,z" list.
std::vector<double> parse_snr_grid(std::string_view text);

} // namespace gsmimo
