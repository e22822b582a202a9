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

#include "gsmimo/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gsmimo/channel.hpp"
#include "gsmimo/cpsc.hpp"
#include "gsmimo/estimate.hpp"
#include "gsmimo/rng.hpp"

namespace gsmimo {

std::string library_version() { return "0.1.0"; }

double ci_half_width(std::uint64_t errors, std::uint64_t bits)
{
    if (bits == 0) return 0.0;
    const double p = static_cast<double>(errors) / static_cast<double>(bits);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

Decisions run_detector(const ScenarioConfig& cfg, const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook,
                       int users)
{
    switch (cfg.detector) {
    case DetectorKind::ml: return ml_detect(y, H, codebook, users);
    case DetectorKind::mmse: return mmse_detect(y, H, sigma2, codebook, users);
    case DetectorKind::mpgsm: return mpgsm_detect(y, H, sigma2, codebook, users, cfg.detector_params()).decisions;
    case DetectorKind::chemp: return chemp_detect(gram_model(y, H, sigma2), codebook, users, cfg.detector_params()).decisions;
    }
    throw std::logic_error("run_detector: unknown detector");
}

namespace {

int draw_codeword(Rng& rng, int bpcu) { return static_cast<int>(rng() >> (64 - bpcu)); }

TrialOutcome flat_trial(const ScenarioConfig& cfg, const GsmCodebook& cb, double sigma2, std::uint64_t trial)
{
    Rng ch_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::channel});
    Rng bit_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::bits});
    Rng noise_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::noise});
    const FlatChannel ch = sample_flat(cfg.N, cfg.K, cfg.n_t, cfg.column_vars, ch_rng);

    FlatPilotObservation pilots;
    CMatrix H_used = ch.gains;
    if (cfg.csi == CsiMode::estimated) {
        Rng pilot_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::pilot_noise});
        pilots = flat_pilot_phase(ch, sigma2, cb.alphabet().avg_energy, pilot_rng);
        H_used = mmse_channel_estimate_flat(pilots.Y_p, pilots.amplitude, sigma2);
    }

    const int bpcu = cb.bpcu();
    TrialOutcome out;
    std::vector<int> sent(static_cast<std::size_t>(cfg.K));
    CVector x(static_cast<Eigen::Index>(cfg.K) * cfg.n_t);
    for (int v = 0; v < cfg.vectors_per_trial; ++v) {
        for (int k = 0; k < cfg.K; ++k) {
            sent[static_cast<std::size_t>(k)] = draw_codeword(bit_rng, bpcu);
            x.segment(k * cfg.n_t, cfg.n_t) = cb.vector(sent[static_cast<std::size_t>(k)]);
        }
        const CVector y = transmit_flat(ch, x, NoiseModel{sigma2}, noise_rng);

        Decisions d;
        if (cfg.csi == CsiMode::estimated && cfg.detector == DetectorKind::chemp) {
            d = chemp_detect(estimated_gram_model(pilots.Y_p, y, pilots.amplitude, sigma2, cfg.gram_correction), cb, cfg.K,
                             cfg.detector_params())
                    .decisions;
        } else {
            d = run_detector(cfg, y, H_used, sigma2, cb, cfg.K);
        }
        for (int k = 0; k < cfg.K; ++k) out.errors += static_cast<std::uint64_t>(bit_distance(sent[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k)]));
        out.bits += static_cast<std::uint64_t>(cfg.K) * static_cast<std::uint64_t>(bpcu);
    }
    return out;
}

TrialOutcome selective_trial(const ScenarioConfig& cfg, const GsmCodebook& cb, double sigma2, std::uint64_t trial)
{
    Rng ch_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::channel});
    Rng bit_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::bits});
    Rng noise_rng = make_rng(StreamKey{cfg.seed, trial, StreamRole::noise});
    const SelectiveChannel ch = sample_selective(cfg.N, cfg.K, cfg.n_t, cfg.L, cfg.xi_db, ch_rng);
    const CpscFrameConfig frame{cfg.Q, cfg.I, cfg.L};
    const int bpcu = cb.bpcu();

    std::vector<BitVector> user_bits(static_cast<std::size_t>(cfg.K));
    for (auto& bits : user_bits) {
        for (int u = 0; u < cfg.I * cfg.Q; ++u) {
            const BitVector b = to_bits(static_cast<std::uint64_t>(draw_codeword(bit_rng, bpcu)), bpcu);
            bits.insert(bits.end(), b.begin(), b.end());
        }
    }
    const double P = cfg.effective_pilot_power();
    const CpscFrame f = cpsc_frame_roundtrip(user_bits, frame, ch, cb, sigma2, P, noise_rng);

    std::vector<CMatrix> taps = ch.taps;
    if (cfg.csi == CsiMode::estimated)
        taps = estimate_selective_taps(extract_selective_pilots(f.pilot_block, cfg.K, cfg.n_t, cfg.L, P), sigma2);

    TrialOutcome out;
    const int users = cfg.K * cfg.Q;
    for (int b = 0; b < cfg.I; ++b) {
        const EquivalentModel m = equivalent_model(f.data_blocks[static_cast<std::size_t>(b)], taps, cfg.Q, sigma2);
        const Decisions d = run_detector(cfg, m.z_prime, m.equivalent_channel(), sigma2, cb, users);
        const auto& sent = f.codewords[static_cast<std::size_t>(b)];
        for (int v = 0; v < users; ++v) out.errors += static_cast<std::uint64_t>(bit_distance(sent[static_cast<std::size_t>(v)], d[static_cast<std::size_t>(v)]));
        out.bits += static_cast<std::uint64_t>(users) * static_cast<std::uint64_t>(bpcu);
    }
    return out;
}

} // namespace

TrialOutcome run_trial(const ScenarioConfig& cfg, const GsmCodebook& codebook, double sigma2, std::uint64_t trial)
{
    return cfg.channel == ChannelMode::flat ? flat_trial(cfg, codebook, sigma2, trial) : selective_trial(cfg, codebook, sigma2, trial);
}

BerPoint run_point(const ScenarioConfig& cfg, const GsmCodebook& codebook, double snr_db, int workers)
{
    BerPoint pt;
    pt.snr_db = snr_db;
    pt.sigma2 = snr_to_sigma2(snr_db, cfg.K, cfg.n_rf, codebook.alphabet().avg_energy);
    workers = std::max(1, workers);

    const auto done = [&] {
        if (cfg.min_errors > 0 && pt.errors >= cfg.min_errors) return true;
        if (cfg.max_bits > 0 && pt.bits >= cfg.max_bits) return true;
        if (cfg.max_trials > 0 && pt.trials >= cfg.max_trials) return true;
        return false;
    };

    std::vector<TrialOutcome> batch(static_cast<std::size_t>(cfg.batch_trials));
    std::uint64_t next = 0;
    while (!done()) {
        const std::uint64_t first = next;
        if (workers == 1) {
            for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = run_trial(cfg, codebook, pt.sigma2, first + i);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> failure(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = static_cast<std::size_t>(w); i < batch.size(); i += static_cast<std::size_t>(workers))
                            batch[i] = run_trial(cfg, codebook, pt.sigma2, first + i);
                    } catch (...) {
                        failure[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            for (auto& t : pool) t.join();
            for (auto& e : failure)
                if (e) std::rethrow_exception(e);
        }
        next += batch.size();
        // fold in trial order so the stopping point is independent of workers
        for (const auto& t : batch) {
            pt.bits += t.bits;
            pt.errors += t.errors;
            ++pt.trials;
            if (done()) break;
        }
    }
    pt.ber = pt.bits ? static_cast<double>(pt.errors) / static_cast<double>(pt.bits) : 0.0;
    pt.ci_half = ci_half_width(pt.errors, pt.bits);
    return pt;
}

BerResult run_ber(const ScenarioConfig& cfg, int workers)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const GsmCodebook cb = cfg.codebook();
    BerResult r;
    r.scenario_id = cfg.id;
    r.config = cfg;
    r.version = library_version();
    for (double snr : cfg.snr_db) {
        r.points.push_back(run_point(cfg, cb, snr, workers));
        if (cfg.ber_floor > 0.0 && r.points.back().ber < cfg.ber_floor) break;
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

TargetCrossing snr_at_target(std::span<const double> snr_db, std::span<const double> ber, double target)
{
    if (snr_db.size() != ber.size()) throw std::invalid_argument("snr_at_target: length mismatch");
    if (!(target > 0.0)) throw std::invalid_argument("snr_at_target: target must be positive");
    for (std::size_t i = 1; i < ber.size(); ++i) {
        const double b0 = ber[i - 1];
        const double b1 = ber[i];
        if (!(b0 >= target && b1 <= target)) continue;
        if (b0 == target) return {false, snr_db[i - 1]};
        if (b1 <= 0.0) return {false, snr_db[i]};   // no log scale to interpolate on; report the bracketing point
        const double u = (std::log10(b0) - std::log10(target)) / (std::log10(b0) - std::log10(b1));
        return {false, snr_db[i - 1] + u * (snr_db[i] - snr_db[i - 1])};
    }
    return {};
}

TargetCrossing snr_at_target(const BerResult& result, double target)
{
    std::vector<double> s, b;
    for (const auto& p : result.points) {
        s.push_back(p.snr_db);
        b.push_back(p.ber);
    }
    return snr_at_target(s, b, target);
}

SweepResult run_sweep(const std::string& name, const std::vector<ScenarioConfig>& scenarios, double target_ber, int workers)
{
    for (const auto& s : scenarios) s.validate();
    SweepResult out;
    out.name = name;
    out.target_ber = target_ber;
    for (const auto& s : scenarios) {
        out.results.push_back(run_ber(s, workers));
        out.crossings.push_back(snr_at_target(out.results.back(), target_ber));
    }
    return out;
}

namespace {

ScenarioConfig scenario(std::string id, int K, int N, int n_t, int n_rf, ModulationKind mod, int order, DetectorKind det,
                        std::vector<double> snr)
{
    ScenarioConfig c;
    c.id = std::move(id);
    c.K = K;
    c.N = N;
    c.n_t = n_t;
    c.n_rf = n_rf;
    c.modulation = mod;
    c.order = order;
    c.detector = det;
    c.snr_db = std::move(snr);
    return c;
}

std::vector<double> grid(double from, double to, double step)
{
    std::vector<double> g;
    for (double s = from; s <= to + 1e-9; s += step) g.push_back(s);
    return g;
}

std::vector<Preset> build_presets()
{
    using MK = ModulationKind;
    using DK = DetectorKind;
    std::vector<Preset> p;

    {
        Preset x{"ml-bound-k4-bpsk", "ML vs analytical bound, K=4, N=16/32, (4,2,BPSK), 4 bpcu", "", {}, true};
        for (int N : {16, 32})
            x.scenarios.push_back(scenario("ml-k4-n" + std::to_string(N), 4, N, 4, 2, MK::bpsk, 2, DK::ml, grid(-6, 10, 2)));
        p.push_back(std::move(x));
    }
    {
        Preset x{"six-bpcu-k2-n8", "Four 6 bpcu systems under ML, K=2, N=8, with bounds", "", {}, true};
        x.scenarios.push_back(scenario("conv-1x1-64qam", 2, 8, 1, 1, MK::qam, 64, DK::ml, grid(0, 24, 3)));
        x.scenarios.push_back(scenario("conv-2x2-8qam", 2, 8, 2, 2, MK::qam, 8, DK::ml, grid(0, 24, 3)));
        x.scenarios.push_back(scenario("sm-4x1-16qam", 2, 8, 4, 1, MK::qam, 16, DK::ml, grid(0, 24, 3)));
        x.scenarios.push_back(scenario("gsm-4x2-4qam", 2, 8, 4, 2, MK::qam, 4, DK::ml, grid(0, 24, 3)));
        p.push_back(std::move(x));
    }
    {
        Preset x{"mpgsm-vs-mmse-k16", "MP-GSM and MMSE, K=16, N=64/128, (4,2,4-QAM), 6 bpcu", "", {}, false};
        for (int N : {64, 128})
            for (DK d : {DK::mpgsm, DK::mmse})
                x.scenarios.push_back(scenario(to_string(d) + "-n" + std::to_string(N), 16, N, 4, 2, MK::qam, 4, d,
                                               N == 64 ? grid(0, 30, 2) : grid(-4, 16, 1)));
        p.push_back(std::move(x));
    }
    {
        Preset x{"six-bpcu-k16-n128", "GSM vs SM vs conventional at 6 bpcu, K=16, N=128",
                 "conventional 64-QAM uses MMSE in place of sphere decoding, which overstates its loss", {}, false};
        x.scenarios.push_back(scenario("gsm-4x2-4qam-mpgsm", 16, 128, 4, 2, MK::qam, 4, DK::mpgsm, grid(-4, 16, 1)));
        x.scenarios.push_back(scenario("sm-4x1-16qam-mpgsm", 16, 128, 4, 1, MK::qam, 16, DK::mpgsm, grid(-4, 20, 1)));
        x.scenarios.push_back(scenario("conv-1x1-64qam-mmse", 16, 128, 1, 1, MK::qam, 64, DK::mmse, grid(0, 30, 1)));
        p.push_back(std::move(x));
    }
    {
        Preset x{"four-bpcu-k16-n128", "GSM vs spatial multiplexing at 4 bpcu, K=16, N=128",
                 "M-MIMO baselines use MMSE in place of likelihood ascent search", {}, false};
        x.scenarios.push_back(scenario("gsm-4x2-bpsk-mpgsm", 16, 128, 4, 2, MK::bpsk, 2, DK::mpgsm, grid(-6, 14, 1)));
        x.scenarios.push_back(scenario("conv-1x1-16qam-mmse", 16, 128, 1, 1, MK::qam, 16, DK::mmse, grid(-6, 24, 1)));
        x.scenarios.push_back(scenario("conv-2x2-4qam-mmse", 16, 128, 2, 2, MK::qam, 4, DK::mmse, grid(-6, 24, 1)));
        x.scenarios.push_back(scenario("conv-4x4-bpsk-mmse", 16, 128, 4, 4, MK::bpsk, 2, DK::mmse, grid(-6, 24, 1)));
        p.push_back(std::move(x));
    }
    {
        Preset x{"antenna-sweep-k16-6bpcu", "SNR at BER 1e-3 versus N, K=16, 6 bpcu",
                 "conventional 64-QAM uses MMSE in place of sphere decoding", {}, false};
        for (int N : {32, 64, 96, 128}) {
            const auto n = std::to_string(N);
            x.scenarios.push_back(scenario("gsm-4x2-4qam-n" + n, 16, N, 4, 2, MK::qam, 4, DK::mpgsm, grid(-4, 30, 2)));
            x.scenarios.push_back(scenario("sm-4x1-16qam-n" + n, 16, N, 4, 1, MK::qam, 16, DK::mpgsm, grid(-4, 30, 2)));
            x.scenarios.push_back(scenario("sm-2x1-32qam-n" + n, 16, N, 2, 1, MK::qam, 32, DK::mpgsm, grid(-4, 30, 2)));
            x.scenarios.push_back(scenario("conv-1x1-64qam-n" + n, 16, N, 1, 1, MK::qam, 64, DK::mmse, grid(0, 36, 2)));
        }
        for (auto& s : x.scenarios) s.ber_floor = 1e-3;
        p.push_back(std::move(x));
    }
    {
        Preset x{"loading-sweep-n128", "SNR at BER 1e-3 versus loading K/N, N=128, (4,2,4-QAM)", "", {}, false};
        for (int K : {8, 12, 16, 24, 32})
            for (DK d : {DK::mpgsm, DK::chemp, DK::mmse}) {
                auto s = scenario(to_string(d) + "-k" + std::to_string(K), K, 128, 4, 2, MK::qam, 4, d, grid(-4, 40, 1));
                s.ber_floor = 1e-3;
                x.scenarios.push_back(std::move(s));
            }
        p.push_back(std::move(x));
    }
    {
        Preset x{"chemp-estimated-csi-k16", "CHEMP with pilot-estimated J versus perfect CSI, and MMSE/MP-GSM receivers, K=16",
                 "", {}, false};
        for (int N : {64, 128})
            for (DK d : {DK::mmse, DK::mpgsm, DK::chemp})
                for (CsiMode csi : {CsiMode::perfect, CsiMode::estimated}) {
                    auto s = scenario(to_string(d) + "-" + to_string(csi) + "-n" + std::to_string(N), 16, N, 4, 2, MK::qam, 4, d,
                                      grid(-4, 30, 2));
                    s.csi = csi;
                    s.vectors_per_trial = 8;
                    x.scenarios.push_back(std::move(s));
                }
        p.push_back(std::move(x));
    }
    for (CsiMode csi : {CsiMode::perfect, CsiMode::estimated}) {
        Preset x{"cpsc-k16-n128-" + to_string(csi), "CPSC over L=3, xi=3 dB, Q=6, K=16, N=128, " + to_string(csi) + " CSI",
                 "conventional 64-QAM uses MMSE in place of likelihood ascent search", {}, false};
        for (DK d : {DK::mpgsm, DK::chemp, DK::mmse}) {
            auto s = scenario("gsm-4x2-4qam-" + to_string(d), 16, 128, 4, 2, MK::qam, 4, d, grid(-4, 24, 2));
            s.channel = ChannelMode::selective;
            s.csi = csi;
            x.scenarios.push_back(std::move(s));
        }
        auto s = scenario("conv-1x1-64qam-mmse", 16, 128, 1, 1, MK::qam, 64, DK::mmse, grid(0, 36, 2));
        s.channel = ChannelMode::selective;
        s.csi = csi;
        x.scenarios.push_back(std::move(s));
        p.push_back(std::move(x));
    }
    return p;
}

} // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset& find_preset(const std::string& name)
{
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw ConfigError("unknown preset '" + name + "'");
}

} // namespace gsmimo
