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
#include <string>
#include <string_view>
#include <vector>

#include "gsmimo/common.hpp"

namespace gsmimo {

enum class ModulationKind { bpsk, qam };

ModulationKind parse_modulation(std::string_view name);
std::string to_string(ModulationKind kind);

// Constellation on the odd-integer grid (unnormalized). Point i carries the
// label whose integer value is i, so label lookup is an index.
struct Alphabet {
    ModulationKind kind = ModulationKind::qam;
    std::vector<cplx> points;
    int bits_per_symbol = 0;
    double avg_energy = 0.0;

    int size() const { return static_cast<int>(points.size()); }
    BitVector label(int point) const;
    // Index of the point equal to c, or -1.
    int index_of(cplx c) const;
    std::string name() const;
};

// Gray-labelled BPSK {0 -> +1, 1 -> -1} or per-axis Gray QAM. Orders 8 and
// 32 use 4x2 and 8x4 rectangular grids. QAM of order 2 is BPSK.
Alphabet build_alphabet(ModulationKind kind, int order);

struct ActivationPatternSet {
    int n_t = 0;
    int n_rf = 0;
    int index_bits = 0;
    std::vector<BitVector> patterns;        // length n_t, antenna 1 first
    std::vector<std::vector<int>> active;   // sorted active antenna indices (0-based)

    int size() const { return static_cast<int>(patterns.size()); }
    // Position of a pattern in the set, or -1.
    int index_of(const BitVector& pattern) const;
};

// All C(n_t, n_rf) patterns in descending lexicographic order of the binary
// string, truncated to the first 2^floor(log2 C).
ActivationPatternSet build_pattern_set(int n_t, int n_rf);

// A single transmit vector. `index` is its position in the codebook, which
// equals its bit label read as an unsigned integer.
struct GsmVector {
    CVector entries;
    int user = 0;
    int index = -1;
};

// The GSM signal set of one user. Codeword c has pattern c / M^n_rf and the
// symbol of slot l (increasing antenna order) in base-M digit l, most
// significant first; this makes the codeword index its bit label.
class GsmCodebook {
  public:
    GsmCodebook(ActivationPatternSet patterns, Alphabet alphabet);

    const ActivationPatternSet& pattern_set() const { return patterns_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int n_t() const { return patterns_.n_t; }
    int n_rf() const { return patterns_.n_rf; }
    int size() const { return static_cast<int>(vectors_.size()); }
    int bpcu() const { return bpcu_; }
    int index_bits() const { return patterns_.index_bits; }

    const CVector& vector(int c) const { return vectors_[static_cast<std::size_t>(c)]; }
    const std::vector<CVector>& vectors() const { return vectors_; }
    BitVector bit_label(int c) const;

    int pattern_of(int c) const { return c / symbol_combos_; }
    // Alphabet index of the symbol in slot l of codeword c.
    int symbol_of(int c, int slot) const;
    const std::vector<int>& active_of(int c) const { return patterns_.active[static_cast<std::size_t>(pattern_of(c))]; }
    int compose(int pattern, const std::vector<int>& symbols) const;

  private:
    ActivationPatternSet patterns_;
    Alphabet alphabet_;
    std::vector<CVector> vectors_;
    int symbol_combos_ = 1;
    int bpcu_ = 0;
};

GsmCodebook make_codebook(int n_t, int n_rf, ModulationKind kind, int order);

GsmVector gsm_encode(const BitVector& bits, const GsmCodebook& codebook);
BitVector gsm_decode(const GsmVector& vector, const GsmCodebook& codebook);
BitVector gsm_decode(const CVector& entries, const GsmCodebook& codebook);

int bits_per_channel_use(int n_t, int n_rf, int alphabet_size);

int bit_distance(int a, int b);
int bit_distance(const GsmVector& x, const GsmVector& x_hat, const GsmCodebook& codebook);

BitVector activation_of(const CVector& v);

struct ConfigTriple {
    int n_t = 1;
    int n_rf = 1;
    int order = 2;
    friend bool operator==(const ConfigTriple&, const ConfigTriple&) = default;
};

// (n_t, n_rf, |A|) with n_t <= 8 and |A| <= 64 whose bpcu equals target.
std::vector<ConfigTriple> matched_configs(int bpcu_target);

BitVector to_bits(std::uint64_t value, int width);
std::uint64_t from_bits(const BitVector& bits);

int binomial(int n, int k);
int floor_log2(std::uint64_t v);

} // namespace gsmimo
