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
#include <map>
#include <span>
#include <vector>

#include "gsmimo/modulation.hpp"

namespace gsmimo {

// Unconditional pairwise error probability over i.i.d. Rayleigh fading with N
// receive antennas. `alpha` is already scaled by 1/(4 sigma^2).
double pep(double alpha, int N);

// f(alpha) = (1 - sqrt(alpha / (1 + alpha))) / 2, evaluated without cancellation.
double pep_single(double alpha);

struct ValueSets {
    std::vector<std::int64_t> j_values;     // distinct |c|^2
    std::vector<std::int64_t> j_multiplicity;
    std::vector<std::int64_t> l_values;     // distinct |c - c'|^2 over ordered pairs
    std::vector<std::int64_t> l_multiplicity;
};

ValueSets value_sets(const Alphabet& alphabet);

// Shape of the multiuser system the bound is evaluated for.
struct BoundScenario {
    int users = 1;
    GsmCodebook codebook;

    int eta() const { return users * codebook.bpcu(); }
};

// Ordered pattern-tuple pairs grouped by q = K n_rf - |common active antennas|.
struct QClassTable {
    int q_max = 0;
    std::vector<std::uint64_t> phi;       // indexed by q
    std::vector<std::uint64_t> idx_dist;  // summed index-bit Hamming distance per q
};

QClassTable phi_counts(const BoundScenario& scenario);

// For one user and one ordered pattern pair (s, s~): match[r] is the slot of
// s~ that uses the same antenna as slot r of s, or -1 when that antenna is
// inactive in s~.
struct SlotMatching {
    std::vector<int> match;

    bool identical() const;
    int mismatched() const;   // q contribution of this user
    friend auto operator<=>(const SlotMatching&, const SlotMatching&) = default;
};

SlotMatching slot_matching(const std::vector<int>& active, const std::vector<int>& active_other);

// One pattern-tuple-pair equivalence class: the per-user slot matchings.
struct ClassDescriptor {
    std::vector<SlotMatching> users;

    bool identical() const;
    int q() const;
};

struct SpectrumEntry {
    std::int64_t alpha = 0;           // sum of |x - x~|^2 before 1/(4 sigma^2)
    double pair_count = 0.0;
    double symbol_bit_distance = 0.0; // summed over the pairs with this alpha
};

struct AlphaSpectrum {
    std::vector<SpectrumEntry> entries;   // strictly increasing alpha

    double total_pairs() const;
};

// Exact joint distribution of (alpha, symbol-bit distance) over every symbol
// assignment of a class. The identical-pattern class omits x == x~.
AlphaSpectrum alpha_spectrum(const ClassDescriptor& descriptor, const Alphabet& alphabet);

struct BoundDiagnostics {
    std::size_t pattern_tuple_pairs = 0;
    std::size_t user_structures = 0;
    std::size_t classes = 0;
    std::size_t spectrum_terms = 0;
    double codeword_pairs = 0.0;
};

struct BoundResult {
    std::vector<double> sigma2;
    std::vector<double> snr_db;   // empty when the caller supplied sigma2 only
    std::vector<double> bound;
    int eta = 0;
    int receive_antennas = 0;
    QClassTable phi;
    BoundDiagnostics diagnostics;
};

// sigma2 for an SNR grid under the per-receive-antenna convention.
std::vector<double> sigma2_grid(const BoundScenario& scenario, std::span<const double> snr_db);

// Union bound by exhaustive enumeration of ordered codeword-tuple pairs.
// Requires (|S| |A|^n_rf)^K <= 2^16.
BoundResult union_bound_direct(const BoundScenario& scenario, std::span<const double> sigma2, int N);

// Same bound via slot-matching classes and their alpha spectra.
// Requires |S|^(2K) <= 2^20.
BoundResult union_bound_reduced(const BoundScenario& scenario, std::span<const double> sigma2, int N);

// Convenience: fill snr_db and evaluate the reduced bound on an SNR grid.
BoundResult union_bound(const BoundScenario& scenario, std::span<const double> snr_db, int N);

} // namespace gsmimo
