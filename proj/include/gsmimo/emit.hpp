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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsmimo/analysis.hpp"
#include "gsmimo/harness.hpp"

namespace gsmimo {

using json = nlohmann::json;

enum class OutputFormat { csv, json, both };
OutputFormat parse_format(const std::string& s);

// scenario_id,snr_db,ber,ci_half,bits,errors
std::string ber_csv_header();
std::string to_csv(const std::vector<BerResult>& results, bool header = true);

json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const json& j);
json to_json(const BerResult& r);
BerResult ber_result_from_json(const json& j);
json to_json(const SweepResult& s);

// snr_db,bound,eta
std::string bound_csv(const BoundResult& b);
json bound_diagnostics(const BoundResult& b);

// Bound and simulation on one schema: the BER columns plus source = bound|sim.
std::string overlay_csv(const std::vector<BoundResult>& bounds, const std::vector<BerResult>& sims);

// One JSON object per line: bits, pattern, entries as [re, im].
std::string codebook_json_lines(const GsmCodebook& codebook);

// Creates parent directories; errors carry the path.
void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace gsmimo
