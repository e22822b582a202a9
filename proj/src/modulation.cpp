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

#include "gsmimo/modulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace gsmimo {

namespace {

int inverse_gray(int g)
{
    int v = 0;
    for (; g != 0; g >>= 1) v ^= g;
    return v;
}

double axis_level(int gray_code, int bits)
{
    const int levels = 1 << bits;
    return 2.0 * inverse_gray(gray_code) - (levels - 1);
}

} // namespace

ModulationKind parse_modulation(std::string_view name)
{
    if (name == "bpsk" || name == "BPSK") return ModulationKind::bpsk;
    if (name == "qam" || name == "QAM") return ModulationKind::qam;
    throw ConfigError("unknown modulation '" + std::string(name) + "'");
}

std::string to_string(ModulationKind kind) { return kind == ModulationKind::bpsk ? "bpsk" : "qam"; }

BitVector Alphabet::label(int point) const { return to_bits(static_cast<std::uint64_t>(point), bits_per_symbol); }

int Alphabet::index_of(cplx c) const
{
    for (int i = 0; i < size(); ++i)
        if (points[static_cast<std::size_t>(i)] == c) return i;
    return -1;
}

std::string Alphabet::name() const
{
    if (size() == 2) return "BPSK";
    return std::to_string(size()) + "-QAM";
}

Alphabet build_alphabet(ModulationKind kind, int order)
{
    if (order < 2 || order > 64 || !std::has_single_bit(static_cast<unsigned>(order)))
        throw ConfigError("unsupported alphabet order " + std::to_string(order));

    Alphabet a;
    a.bits_per_symbol = floor_log2(static_cast<std::uint64_t>(order));
    a.points.reserve(static_cast<std::size_t>(order));

    if (kind == ModulationKind::bpsk && order != 2) throw ConfigError("BPSK has order 2");

    if (order == 2) {
        a.kind = ModulationKind::bpsk;
        a.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    } else {
        a.kind = ModulationKind::qam;
        const int q_bits = a.bits_per_symbol / 2;
        const int i_bits = a.bits_per_symbol - q_bits;
        for (int v = 0; v < order; ++v) {
            const int i_code = v >> q_bits;
            const int q_code = v & ((1 << q_bits) - 1);
            a.points.emplace_back(axis_level(i_code, i_bits), axis_level(q_code, q_bits));
        }
    }

    double e = 0.0;
    for (const auto& c : a.points) e += std::norm(c);
    a.avg_energy = e / static_cast<double>(order);
    return a;
}

int ActivationPatternSet::index_of(const BitVector& pattern) const
{
    const auto it = std::find(patterns.begin(), patterns.end(), pattern);
    return it == patterns.end() ? -1 : static_cast<int>(it - patterns.begin());
}

ActivationPatternSet build_pattern_set(int n_t, int n_rf)
{
    if (n_t < 1 || n_rf < 1 || n_rf > n_t)
        throw ConfigError("need 1 <= n_rf <= n_t (got n_t=" + std::to_string(n_t) + ", n_rf=" + std::to_string(n_rf) + ")");
    if (n_t > 30) throw ConfigError("n_t too large");

    ActivationPatternSet set;
    set.n_t = n_t;
    set.n_rf = n_rf;
    set.index_bits = floor_log2(static_cast<std::uint64_t>(binomial(n_t, n_rf)));
    const std::size_t keep = std::size_t{1} << set.index_bits;

    // Lexicographic order of the active index tuple is descending order of
    // the binary string with antenna 1 as the most significant digit.
    std::vector<int> idx(static_cast<std::size_t>(n_rf));
    for (int i = 0; i < n_rf; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (set.patterns.size() < keep) {
        BitVector p(static_cast<std::size_t>(n_t), 0);
        for (int a : idx) p[static_cast<std::size_t>(a)] = 1;
        set.patterns.push_back(std::move(p));
        set.active.push_back(idx);

        int pos = n_rf - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n_t - n_rf + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < n_rf; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return set;
}

GsmCodebook::GsmCodebook(ActivationPatternSet patterns, Alphabet alphabet)
    : patterns_(std::move(patterns)), alphabet_(std::move(alphabet))
{
    const int m = alphabet_.size();
    symbol_combos_ = 1;
    for (int l = 0; l < patterns_.n_rf; ++l) symbol_combos_ *= m;
    bpcu_ = patterns_.index_bits + patterns_.n_rf * alphabet_.bits_per_symbol;

    const int total = patterns_.size() * symbol_combos_;
    vectors_.reserve(static_cast<std::size_t>(total));
    for (int c = 0; c < total; ++c) {
        CVector v = CVector::Zero(patterns_.n_t);
        const auto& act = patterns_.active[static_cast<std::size_t>(c / symbol_combos_)];
        for (int l = 0; l < patterns_.n_rf; ++l)
            v(act[static_cast<std::size_t>(l)]) = alphabet_.points[static_cast<std::size_t>(symbol_of(c, l))];
        vectors_.push_back(std::move(v));
    }
}

BitVector GsmCodebook::bit_label(int c) const { return to_bits(static_cast<std::uint64_t>(c), bpcu_); }

int GsmCodebook::symbol_of(int c, int slot) const
{
    const int m = alphabet_.size();
    int rem = c % symbol_combos_;
    for (int l = patterns_.n_rf - 1; l > slot; --l) rem /= m;
    return rem % m;
}

int GsmCodebook::compose(int pattern, const std::vector<int>& symbols) const
{
    int c = pattern;
    for (int s : symbols) c = c * alphabet_.size() + s;
    return c;
}

GsmCodebook make_codebook(int n_t, int n_rf, ModulationKind kind, int order)
{
    return GsmCodebook(build_pattern_set(n_t, n_rf), build_alphabet(kind, order));
}

GsmVector gsm_encode(const BitVector& bits, const GsmCodebook& codebook)
{
    if (static_cast<int>(bits.size()) != codebook.bpcu())
        throw std::invalid_argument("gsm_encode: expected " + std::to_string(codebook.bpcu()) + " bits, got " +
                                    std::to_string(bits.size()));
    for (auto b : bits)
        if (b > 1) throw std::invalid_argument("gsm_encode: bit values must be 0 or 1");
    const int c = static_cast<int>(from_bits(bits));
    return GsmVector{codebook.vector(c), 0, c};
}

BitVector gsm_decode(const CVector& entries, const GsmCodebook& codebook)
{
    if (entries.size() != codebook.n_t()) throw std::invalid_argument("gsm_decode: wrong vector length");
    const int pattern = codebook.pattern_set().index_of(activation_of(entries));
    if (pattern < 0) throw std::invalid_argument("gsm_decode: activation pattern not in the pattern set");
    std::vector<int> symbols;
    for (int a : codebook.pattern_set().active[static_cast<std::size_t>(pattern)]) {
        const int s = codebook.alphabet().index_of(entries(a));
        if (s < 0) throw std::invalid_argument("gsm_decode: entry is not an alphabet point");
        symbols.push_back(s);
    }
    return codebook.bit_label(codebook.compose(pattern, symbols));
}

BitVector gsm_decode(const GsmVector& vector, const GsmCodebook& codebook) { return gsm_decode(vector.entries, codebook); }

int bits_per_channel_use(int n_t, int n_rf, int alphabet_size)
{
    return floor_log2(static_cast<std::uint64_t>(binomial(n_t, n_rf))) +
           n_rf * floor_log2(static_cast<std::uint64_t>(alphabet_size));
}

int bit_distance(int a, int b) { return std::popcount(static_cast<unsigned>(a ^ b)); }

int bit_distance(const GsmVector& x, const GsmVector& x_hat, const GsmCodebook& codebook)
{
    const auto a = from_bits(gsm_decode(x, codebook));
    const auto b = from_bits(gsm_decode(x_hat, codebook));
    return std::popcount(a ^ b);
}

BitVector activation_of(const CVector& v)
{
    BitVector p(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) p[static_cast<std::size_t>(i)] = v(i) != cplx(0.0, 0.0) ? 1 : 0;
    return p;
}

std::vector<ConfigTriple> matched_configs(int bpcu_target)
{
    std::vector<ConfigTriple> out;
    if (bpcu_target < 1) return out;
    for (int n_t = 1; n_t <= 8; ++n_t)
        for (int n_rf = 1; n_rf <= n_t; ++n_rf)
            for (int order = 2; order <= 64; order *= 2)
                if (bits_per_channel_use(n_t, n_rf, order) == bpcu_target) out.push_back({n_t, n_rf, order});
    return out;
}

BitVector to_bits(std::uint64_t value, int width)
{
    BitVector b(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) b[static_cast<std::size_t>(width - 1 - i)] = static_cast<std::uint8_t>((value >> i) & 1U);
    return b;
}

std::uint64_t from_bits(const BitVector& bits)
{
    std::uint64_t v = 0;
    for (auto b : bits) v = (v << 1) | (b & 1U);
    return v;
}

int binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

int floor_log2(std::uint64_t v) { return v == 0 ? 0 : static_cast<int>(std::bit_width(v)) - 1; }

} // namespace gsmimo
