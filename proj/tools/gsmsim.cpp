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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gsmimo/analysis.hpp"
#include "gsmimo/config.hpp"
#include "gsmimo/emit.hpp"
#include "gsmimo/harness.hpp"

namespace fs = std::filesystem;
using namespace gsmimo;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "both";
    int workers = 1;
    std::string preset;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_preset = true)
{
    cmd->add_option("--config", o.config_path, "scenario file (key = value)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--set", o.settings, "override a config key, key=value (repeatable)");
    if (with_preset) cmd->add_option("preset", o.preset, "preset name (see `presets`)");
}

void apply_overrides(ScenarioConfig& cfg, const CommonOptions& o)
{
    for (const auto& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (o.seed) cfg.seed = *o.seed;
}

// Scenarios from a preset, a config file or the defaults, with CLI overrides on top.
std::vector<ScenarioConfig> resolve(const CommonOptions& o, bool* with_bound = nullptr, std::string* name = nullptr)
{
    std::vector<ScenarioConfig> out;
    if (!o.preset.empty()) {
        const Preset& p = find_preset(o.preset);
        out = p.scenarios;
        if (with_bound) *with_bound = p.with_bound;
        if (name) *name = p.name;
        if (!o.config_path.empty()) {
            const auto entries = load_config_file(o.config_path);
            for (auto& s : out) s = apply_config(entries, s);
        }
    } else {
        out.push_back(o.config_path.empty() ? ScenarioConfig{} : apply_config(load_config_file(o.config_path)));
        if (name) *name = out.back().id;
    }
    for (auto& s : out) {
        apply_overrides(s, o);
        s.validate();
    }
    return out;
}

bool want_csv(const std::string& f) { return f == "csv" || f == "both"; }
bool want_json(const std::string& f) { return f == "json" || f == "both"; }

BoundResult bound_for(const ScenarioConfig& s)
{
    if (s.channel != ChannelMode::flat) throw ConfigError("the bound covers flat fading only");
    return union_bound(BoundScenario{s.K, s.codebook()}, s.snr_db, s.N);
}

int run_ber_cmd(const CommonOptions& o)
{
    const auto scenarios = resolve(o);
    const fs::path out(o.out_dir);
    for (const auto& s : scenarios) {
        const BerResult r = run_ber(s, o.workers);
        if (want_csv(o.format)) write_text(out / (s.id + ".csv"), to_csv({r}));
        if (want_json(o.format)) write_text(out / (s.id + ".json"), to_json(r).dump(2) + "\n");
        std::cout << to_csv({r}, &s == &scenarios.front());
    }
    return 0;
}

int run_sweep_cmd(const CommonOptions& o, double target)
{
    bool with_bound = false;
    std::string name;
    const auto scenarios = resolve(o, &with_bound, &name);
    const SweepResult sw = run_sweep(name, scenarios, target, o.workers);
    const fs::path out(o.out_dir);
    if (want_csv(o.format)) write_text(out / (name + ".csv"), to_csv(sw.results));
    if (want_json(o.format)) write_text(out / (name + ".json"), to_json(sw).dump(2) + "\n");
    if (with_bound) {
        std::vector<BoundResult> bounds;
        for (const auto& s : scenarios) bounds.push_back(bound_for(s));
        write_text(out / (name + "_overlay.csv"), overlay_csv(bounds, sw.results));
    }
    for (std::size_t i = 0; i < sw.results.size(); ++i) {
        const auto& c = sw.crossings[i];
        std::cout << sw.results[i].scenario_id << ": snr at ber " << target << " = ";
        if (c.censored)
            std::cout << "censored\n";
        else
            std::cout << c.snr_db << " dB\n";
    }
    return 0;
}

int run_bound_cmd(const CommonOptions& o)
{
    const auto scenarios = resolve(o);
    const fs::path out(o.out_dir);
    for (const auto& s : scenarios) {
        const BoundResult b = bound_for(s);
        const std::string stem = s.id + "_bound";
        if (want_csv(o.format)) write_text(out / (stem + ".csv"), bound_csv(b));
        write_text(out / (stem + ".json"), bound_diagnostics(b).dump(2) + "\n");
        std::cout << bound_csv(b);
    }
    return 0;
}

int run_codebook_cmd(const CommonOptions& o, int n_t, int n_rf, const std::string& modulation, int order)
{
    ScenarioConfig cfg;
    if (!o.config_path.empty()) {
        cfg = apply_config(load_config_file(o.config_path));
    } else {
        cfg.n_t = n_t;
        cfg.n_rf = n_rf;
        cfg.modulation = parse_modulation(modulation);
        cfg.order = order;
    }
    apply_overrides(cfg, o);
    const std::string lines = codebook_json_lines(cfg.codebook());
    if (o.out_dir != ".") write_text(fs::path(o.out_dir) / "codebook.jsonl", lines);
    std::cout << lines;
    return 0;
}

int run_presets_cmd()
{
    for (const auto& p : presets()) {
        std::cout << p.name << "  " << p.description << " (" << p.scenarios.size() << " scenarios)\n";
        if (!p.notes.empty()) std::cout << "    note: " << p.notes << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gsmsim: multiuser GSM-MIMO link simulation"};
    app.require_subcommand(1);

    CommonOptions ber_o, sweep_o, bound_o, cb_o;
    double target = 1e-3;
    int cb_nt = 4, cb_nrf = 2, cb_order = 2;
    std::string cb_mod = "bpsk";

    auto* ber = app.add_subcommand("ber", "simulate BER for one scenario (or each scenario of a preset)");
    add_common(ber, ber_o);
    auto* sweep = app.add_subcommand("sweep", "run a preset or config and extract SNR at a target BER");
    add_common(sweep, sweep_o);
    sweep->add_option("--target", target, "target BER")->check(CLI::PositiveNumber);
    auto* bound = app.add_subcommand("bound", "evaluate the analytical union bound");
    add_common(bound, bound_o);
    auto* cb = app.add_subcommand("codebook", "dump a GSM codebook as JSON lines");
    add_common(cb, cb_o, false);
    cb->add_option("--n_t", cb_nt, "transmit antennas");
    cb->add_option("--n_rf", cb_nrf, "active antennas");
    cb->add_option("--modulation", cb_mod, "bpsk or qam");
    cb->add_option("--order", cb_order, "alphabet size");
    auto* pre = app.add_subcommand("presets", "list scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*ber) return run_ber_cmd(ber_o);
        if (*sweep) return run_sweep_cmd(sweep_o, target);
        if (*bound) return run_bound_cmd(bound_o);
        if (*cb) return run_codebook_cmd(cb_o, cb_nt, cb_nrf, cb_mod, cb_order);
        if (*pre) return run_presets_cmd();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
