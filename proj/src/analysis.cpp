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

#include "gsmimo/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsmimo/channel.hpp"

namespace gsmimo {

double pep_single(double alpha)
{
    const double mu = std::sqrt(alpha / (1.0 + alpha));
    // 1 - mu = 1 / ((1 + alpha)(1 + mu))
    return 0.5 / ((1.0 + alpha) * (1.0 + mu));
}

double pep(double alpha, int N)
{
    if (!(alpha >= 0.0)) throw std::domain_error("pep: alpha must be non-negative");
    if (N < 1) throw std::domain_error("pep: N must be positive");

    const double f = pep_single(alpha);
    const double g = 0.5 * (1.0 + std::sqrt(alpha / (1.0 + alpha)));   // 1 - f

    if (N < 64) {
        double term = 1.0;
        double sum = 1.0;
        for (int i = 1; i < N; ++i) {
            term *= static_cast<double>(N - 1 + i) / i * g;
            sum += term;
        }
        return std::pow(f, N) * sum;
    }

    // log-domain for large N where f^N underflows
    const double log_g = std::log(g);
    const double lg_n = std::lgamma(static_cast<double>(N));
    std::vector<double> logs(static_cast<std::size_t>(N));
    double peak = -INFINITY;
    for (int i = 0; i < N; ++i) {
        const double l = std::lgamma(static_cast<double>(N + i)) - std::lgamma(i + 1.0) - lg_n + i * log_g;
        logs[static_cast<std::size_t>(i)] = l;
        peak = std::max(peak, l);
    }
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    return std::exp(N * std::log(f) + peak + std::log(acc));
}

ValueSets value_sets(const Alphabet& alphabet)
{
    std::map<std::int64_t, std::int64_t> j, l;
    for (const auto& c : alphabet.points) ++j[std::llround(std::norm(c))];
    for (const auto& c : alphabet.points)
        for (const auto& d : alphabet.points) ++l[std::llround(std::norm(c - d))];
    ValueSets v;
    for (auto [value, count] : j) {
        v.j_values.push_back(value);
        v.j_multiplicity.push_back(count);
    }
    for (auto [value, count] : l) {
        v.l_values.push_back(value);
        v.l_multiplicity.push_back(count);
    }
    return v;
}

std::vector<double> sigma2_grid(const BoundScenario& scenario, std::span<const double> snr_db)
{
    std::vector<double> out;
    out.reserve(snr_db.size());
    for (double s : snr_db)
        out.push_back(snr_to_sigma2(s, scenario.users, scenario.codebook.n_rf(), scenario.codebook.alphabet().avg_energy));
    return out;
}

// ----------------------------------------------------------------------------
// q-class table

namespace {

struct Dual {
    double count = 0.0;
    double bits = 0.0;
};

using Spectrum = std::map<std::int64_t, Dual>;

Spectrum convolve(const Spectrum& a, const Spectrum& b)
{
    Spectrum out;
    for (const auto& [ka, da] : a)
        for (const auto& [kb, db] : b) {
            Dual& d = out[ka + kb];
            d.count += da.count * db.count;
            d.bits += da.bits * db.count + da.count * db.bits;
        }
    return out;
}

void add_into(Spectrum& dst, const Spectrum& src, std::int64_t shift, std::int64_t bit_shift)
{
    for (const auto& [k, d] : src) {
        Dual& o = dst[k + shift];
        o.count += d.count;
        o.bits += d.bits + d.count * static_cast<double>(bit_shift);
    }
}

void check_tuple_guard(const BoundScenario& scenario)
{
    const double tuples = std::pow(static_cast<double>(scenario.codebook.pattern_set().size()), 2.0 * scenario.users);
    if (tuples > std::ldexp(1.0, 20))
        throw ConfigError("reduced bound: |S|^(2K) exceeds 2^20 pattern-tuple pairs");
}

} // namespace

QClassTable phi_counts(const BoundScenario& scenario)
{
    const auto& ps = scenario.codebook.pattern_set();
    const int K = scenario.users;
    QClassTable t;
    t.q_max = std::min(ps.n_rf, ps.n_t - ps.n_rf) * K;

    // per-user distribution of (q, index distance) over ordered pattern pairs
    std::vector<Dual> user(static_cast<std::size_t>(ps.n_rf + 1));
    for (int a = 0; a < ps.size(); ++a)
        for (int b = 0; b < ps.size(); ++b) {
            const int q = slot_matching(ps.active[static_cast<std::size_t>(a)], ps.active[static_cast<std::size_t>(b)]).mismatched();
            user[static_cast<std::size_t>(q)].count += 1.0;
            user[static_cast<std::size_t>(q)].bits += bit_distance(a, b);
        }

    std::vector<Dual> acc(1, Dual{1.0, 0.0});
    for (int k = 0; k < K; ++k) {
        std::vector<Dual> next(acc.size() + user.size() - 1);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < user.size(); ++j) {
                next[i + j].count += acc[i].count * user[j].count;
                next[i + j].bits += acc[i].bits * user[j].count + acc[i].count * user[j].bits;
            }
        acc = std::move(next);
    }
    t.phi.assign(static_cast<std::size_t>(t.q_max + 1), 0);
    t.idx_dist.assign(static_cast<std::size_t>(t.q_max + 1), 0);
    for (std::size_t q = 0; q < acc.size(); ++q) {
        if (acc[q].count == 0.0) continue;
        t.phi.at(q) = static_cast<std::uint64_t>(std::llround(acc[q].count));
        t.idx_dist.at(q) = static_cast<std::uint64_t>(std::llround(acc[q].bits));
    }
    return t;
}

// ----------------------------------------------------------------------------
// slot matchings and alpha spectra

bool SlotMatching::identical() const
{
    for (std::size_t r = 0; r < match.size(); ++r)
        if (match[r] != static_cast<int>(r)) return false;
    return true;
}

int SlotMatching::mismatched() const
{
    return static_cast<int>(std::count(match.begin(), match.end(), -1));
}

SlotMatching slot_matching(const std::vector<int>& active, const std::vector<int>& active_other)
{
    SlotMatching m;
    m.match.reserve(active.size());
    for (int a : active) {
        const auto it = std::find(active_other.begin(), active_other.end(), a);
        m.match.push_back(it == active_other.end() ? -1 : static_cast<int>(it - active_other.begin()));
    }
    return m;
}

bool ClassDescriptor::identical() const
{
    return std::all_of(users.begin(), users.end(), [](const SlotMatching& m) { return m.identical(); });
}

int ClassDescriptor::q() const
{
    int q = 0;
    for (const auto& m : users) q += m.mismatched();
    return q;
}

double AlphaSpectrum::total_pairs() const
{
    double t = 0.0;
    for (const auto& e : entries) t += e.pair_count;
    return t;
}

namespace {

// Symbol slots of one user form a graph: node r is slot r of x, node n + r is
// slot r of x~. Slots sharing an antenna are joined by a distance edge, and
// slot r of x is joined to slot r of x~ by a label edge (the bits compared
// positionally). Every node has one label edge and at most one distance
// edge, so components are paths or cycles and a transfer-matrix sweep over
// each component is exact.
class UserStructure {
  public:
    UserStructure(const SlotMatching& m, const Alphabet& alphabet) : alphabet_(alphabet), n_(static_cast<int>(m.match.size()))
    {
        dist_.assign(static_cast<std::size_t>(2 * n_), -1);
        for (int r = 0; r < n_; ++r) {
            const int other = m.match[static_cast<std::size_t>(r)];
            if (other < 0) continue;
            if (other >= n_) throw std::invalid_argument("alpha_spectrum: slot index out of range");
            if (dist_[static_cast<std::size_t>(n_ + other)] != -1)
                throw std::invalid_argument("alpha_spectrum: slot matched twice");
            dist_[static_cast<std::size_t>(r)] = n_ + other;
            dist_[static_cast<std::size_t>(n_ + other)] = r;
        }
        const int m_size = alphabet.size();
        unary_.resize(static_cast<std::size_t>(m_size));
        dist_w_.resize(static_cast<std::size_t>(m_size * m_size));
        bit_w_.resize(static_cast<std::size_t>(m_size * m_size));
        for (int a = 0; a < m_size; ++a) {
            unary_[static_cast<std::size_t>(a)] = std::llround(std::norm(alphabet.points[static_cast<std::size_t>(a)]));
            for (int b = 0; b < m_size; ++b) {
                dist_w_[static_cast<std::size_t>(a * m_size + b)] =
                    std::llround(std::norm(alphabet.points[static_cast<std::size_t>(a)] - alphabet.points[static_cast<std::size_t>(b)]));
                bit_w_[static_cast<std::size_t>(a * m_size + b)] = std::popcount(static_cast<unsigned>(a ^ b));
            }
        }
    }

    Spectrum spectrum() const
    {
        Spectrum total{{0, Dual{1.0, 0.0}}};
        std::vector<char> seen(static_cast<std::size_t>(2 * n_), 0);
        // paths start at a node without a distance edge
        for (int v = 0; v < 2 * n_; ++v) {
            if (seen[static_cast<std::size_t>(v)] || dist_[static_cast<std::size_t>(v)] != -1) continue;
            total = convolve(total, path_component(v, seen));
        }
        for (int v = 0; v < 2 * n_; ++v) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            total = convolve(total, cycle_component(v, seen));
        }
        return total;
    }

  private:
    enum class Edge { label, distance };

    int label_neighbour(int v) const { return v < n_ ? v + n_ : v - n_; }

    std::int64_t unary(int v, int value) const
    {
        return dist_[static_cast<std::size_t>(v)] == -1 ? unary_[static_cast<std::size_t>(value)] : 0;
    }

    // Walk alternating label/distance edges from `start`, first edge a label edge.
    std::vector<int> walk(int start, std::vector<char>& seen) const
    {
        std::vector<int> nodes{start};
        seen[static_cast<std::size_t>(start)] = 1;
        int cur = start;
        Edge next = Edge::label;
        for (;;) {
            const int nb = next == Edge::label ? label_neighbour(cur) : dist_[static_cast<std::size_t>(cur)];
            if (nb == -1 || nb == start) break;
            nodes.push_back(nb);
            seen[static_cast<std::size_t>(nb)] = 1;
            cur = nb;
            next = next == Edge::label ? Edge::distance : Edge::label;
        }
        return nodes;
    }

    void step(const std::vector<Spectrum>& from, std::vector<Spectrum>& to, Edge edge, int node) const
    {
        const int m = alphabet_.size();
        to.assign(static_cast<std::size_t>(m), Spectrum{});
        for (int a = 0; a < m; ++a) {
            if (from[static_cast<std::size_t>(a)].empty()) continue;
            for (int b = 0; b < m; ++b) {
                const std::size_t w = static_cast<std::size_t>(a * m + b);
                const std::int64_t da = (edge == Edge::distance ? dist_w_[w] : 0) + unary(node, b);
                const std::int64_t db = edge == Edge::label ? bit_w_[w] : 0;
                add_into(to[static_cast<std::size_t>(b)], from[static_cast<std::size_t>(a)], da, db);
            }
        }
    }

    static Edge alternate(Edge e) { return e == Edge::label ? Edge::distance : Edge::label; }

    Spectrum path_component(int start, std::vector<char>& seen) const
    {
        const auto nodes = walk(start, seen);
        const int m = alphabet_.size();
        std::vector<Spectrum> cur(static_cast<std::size_t>(m)), next;
        for (int a = 0; a < m; ++a) cur[static_cast<std::size_t>(a)][unary(start, a)] = Dual{1.0, 0.0};
        Edge e = Edge::label;
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            step(cur, next, e, nodes[i]);
            std::swap(cur, next);
            e = alternate(e);
        }
        Spectrum out;
        for (const auto& s : cur) add_into(out, s, 0, 0);
        return out;
    }

    Spectrum cycle_component(int start, std::vector<char>& seen) const
    {
        const auto nodes = walk(start, seen);
        const int m = alphabet_.size();
        // nodes alternate label/distance edges and close with a distance edge
        Spectrum out;
        std::vector<Spectrum> cur, next;
        for (int a0 = 0; a0 < m; ++a0) {
            cur.assign(static_cast<std::size_t>(m), Spectrum{});
            cur[static_cast<std::size_t>(a0)][unary(start, a0)] = Dual{1.0, 0.0};
            Edge e = Edge::label;
            for (std::size_t i = 1; i < nodes.size(); ++i) {
                step(cur, next, e, nodes[i]);
                std::swap(cur, next);
                e = alternate(e);
            }
            for (int b = 0; b < m; ++b) {
                const std::size_t w = static_cast<std::size_t>(b * m + a0);
                const std::int64_t da = e == Edge::distance ? dist_w_[w] : 0;
                const std::int64_t db = e == Edge::label ? bit_w_[w] : 0;
                add_into(out, cur[static_cast<std::size_t>(b)], da, db);
            }
        }
        return out;
    }

    const Alphabet& alphabet_;
    int n_;
    std::vector<int> dist_;
    std::vector<std::int64_t> unary_;
    std::vector<std::int64_t> dist_w_;
    std::vector<int> bit_w_;
};

AlphaSpectrum to_alpha_spectrum(const Spectrum& s, bool drop_zero)
{
    AlphaSpectrum out;
    for (const auto& [alpha, d] : s) {
        if (drop_zero && alpha == 0) continue;
        out.entries.push_back({alpha, d.count, d.bits});
    }
    return out;
}

} // namespace

AlphaSpectrum alpha_spectrum(const ClassDescriptor& descriptor, const Alphabet& alphabet)
{
    Spectrum total{{0, Dual{1.0, 0.0}}};
    for (const auto& m : descriptor.users) total = convolve(total, UserStructure(m, alphabet).spectrum());
    const bool identical = descriptor.identical();
    if (!identical && total.count(0) != 0) throw std::logic_error("alpha_spectrum: zero distance outside the identical class");
    return to_alpha_spectrum(total, identical);
}

// ----------------------------------------------------------------------------
// union bounds

BoundResult union_bound_direct(const BoundScenario& scenario, std::span<const double> sigma2, int N)
{
    const auto& cb = scenario.codebook;
    const int K = scenario.users;
    const double tuples_d = std::pow(static_cast<double>(cb.size()), K);
    if (tuples_d > 65536.0) throw ConfigError("direct bound: more than 2^16 codeword tuples");
    const int tuples = static_cast<int>(tuples_d);
    const int eta = scenario.eta();

    // stacked transmit vectors and labels of every tuple; user 1 is the most
    // significant digit of the tuple index
    std::vector<CVector> stacked(static_cast<std::size_t>(tuples));
    std::vector<std::uint64_t> labels(static_cast<std::size_t>(tuples));
    for (int t = 0; t < tuples; ++t) {
        CVector x(K * cb.n_t());
        std::uint64_t label = 0;
        int rem = t;
        for (int k = K - 1; k >= 0; --k) {
            const int c = rem % cb.size();
            rem /= cb.size();
            x.segment(k * cb.n_t(), cb.n_t()) = cb.vector(c);
        }
        for (int k = 0; k < K; ++k) {
            int digit = t;
            for (int j = K - 1; j > k; --j) digit /= cb.size();
            label = (label << cb.bpcu()) | static_cast<std::uint64_t>(digit % cb.size());
        }
        stacked[static_cast<std::size_t>(t)] = std::move(x);
        labels[static_cast<std::size_t>(t)] = label;
    }

    BoundResult r;
    r.sigma2.assign(sigma2.begin(), sigma2.end());
    r.bound.assign(sigma2.size(), 0.0);
    r.eta = eta;
    r.receive_antennas = N;
    r.phi = phi_counts(scenario);

    for (int a = 0; a < tuples; ++a)
        for (int b = 0; b < tuples; ++b) {
            if (a == b) continue;
            const double theta = (stacked[static_cast<std::size_t>(a)] - stacked[static_cast<std::size_t>(b)]).squaredNorm();
            const int d = std::popcount(labels[static_cast<std::size_t>(a)] ^ labels[static_cast<std::size_t>(b)]);
            for (std::size_t s = 0; s < sigma2.size(); ++s) r.bound[s] += pep(theta / (4.0 * sigma2[s]), N) * d;
        }
    const double scale = std::ldexp(1.0, -eta) / eta;
    for (double& v : r.bound) v *= scale;
    r.diagnostics.codeword_pairs = static_cast<double>(tuples) * (tuples - 1);
    return r;
}

BoundResult union_bound_reduced(const BoundScenario& scenario, std::span<const double> sigma2, int N)
{
    check_tuple_guard(scenario);
    const auto& cb = scenario.codebook;
    const auto& ps = cb.pattern_set();
    const int K = scenario.users;
    const int eta = scenario.eta();

    // per-user structures with pattern-pair multiplicity and index distance
    std::map<SlotMatching, int> structure_id;
    std::vector<SlotMatching> structures;
    std::vector<Dual> per_structure;
    for (int a = 0; a < ps.size(); ++a)
        for (int b = 0; b < ps.size(); ++b) {
            auto m = slot_matching(ps.active[static_cast<std::size_t>(a)], ps.active[static_cast<std::size_t>(b)]);
            auto [it, inserted] = structure_id.try_emplace(m, static_cast<int>(structures.size()));
            if (inserted) {
                structures.push_back(m);
                per_structure.push_back({});
            }
            per_structure[static_cast<std::size_t>(it->second)].count += 1.0;
            per_structure[static_cast<std::size_t>(it->second)].bits += bit_distance(a, b);
        }

    // classes: multisets of per-user structures. For each class keep the
    // number of pattern-tuple pairs and their summed index-bit distance.
    const int ns = static_cast<int>(structures.size());
    std::map<std::vector<int>, Dual> classes;
    std::vector<int> digits(static_cast<std::size_t>(K), 0);
    for (;;) {
        Dual d{1.0, 0.0};
        for (int k = 0; k < K; ++k) {
            const Dual& u = per_structure[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
            d = Dual{d.count * u.count, d.bits * u.count + d.count * u.bits};
        }
        auto key = digits;
        std::sort(key.begin(), key.end());
        Dual& c = classes[key];
        c.count += d.count;
        c.bits += d.bits;

        int pos = K - 1;
        while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == ns) digits[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }

    std::vector<Spectrum> structure_spectra;
    structure_spectra.reserve(structures.size());
    for (const auto& m : structures) structure_spectra.push_back(UserStructure(m, cb.alphabet()).spectrum());

    BoundResult r;
    r.sigma2.assign(sigma2.begin(), sigma2.end());
    r.bound.assign(sigma2.size(), 0.0);
    r.eta = eta;
    r.receive_antennas = N;
    r.phi = phi_counts(scenario);
    r.diagnostics.pattern_tuple_pairs = static_cast<std::size_t>(std::llround(std::pow(ps.size(), 2.0 * K)));
    r.diagnostics.user_structures = structures.size();
    r.diagnostics.classes = classes.size();

    for (const auto& [key, tuple_pairs] : classes) {
        Spectrum s{{0, Dual{1.0, 0.0}}};
        bool identical = true;
        for (int id : key) {
            s = convolve(s, structure_spectra[static_cast<std::size_t>(id)]);
            identical = identical && structures[static_cast<std::size_t>(id)].identical();
        }
        const AlphaSpectrum spec = to_alpha_spectrum(s, identical);
        r.diagnostics.spectrum_terms += spec.entries.size();
        for (const auto& e : spec.entries) {
            const double weight = e.pair_count * tuple_pairs.bits + tuple_pairs.count * e.symbol_bit_distance;
            r.diagnostics.codeword_pairs += e.pair_count * tuple_pairs.count;
            for (std::size_t i = 0; i < sigma2.size(); ++i)
                r.bound[i] += pep(static_cast<double>(e.alpha) / (4.0 * sigma2[i]), N) * weight;
        }
    }
    const double scale = std::ldexp(1.0, -eta) / eta;
    for (double& v : r.bound) v *= scale;
    return r;
}

BoundResult union_bound(const BoundScenario& scenario, std::span<const double> snr_db, int N)
{
    const auto s2 = sigma2_grid(scenario, snr_db);
    BoundResult r = union_bound_reduced(scenario, s2, N);
    r.snr_db.assign(snr_db.begin(), snr_db.end());
    return r;
}

} // namespace gsmimo
