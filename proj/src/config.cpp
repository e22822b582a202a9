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

#include "gsmimo/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gsmimo {

DetectorKind parse_detector(std::string_view s)
{
    if (s == "ml") return DetectorKind::ml;
    if (s == "mmse") return DetectorKind::mmse;
    if (s == "mpgsm" || s == "mp-gsm") return DetectorKind::mpgsm;
    if (s == "chemp" || s == "chemp-gsm") return DetectorKind::chemp;
    throw ConfigError("unknown detector '" + std::string(s) + "'");
}

CsiMode parse_csi(std::string_view s)
{
    if (s == "perfect") return CsiMode::perfect;
    if (s == "estimated") return CsiMode::estimated;
    throw ConfigError("unknown csi mode '" + std::string(s) + "'");
}

ChannelMode parse_channel(std::string_view s)
{
    if (s == "flat") return ChannelMode::flat;
    if (s == "selective") return ChannelMode::selective;
    throw ConfigError("unknown channel mode '" + std::string(s) + "'");
}

std::string to_string(DetectorKind d)
{
    switch (d) {
    case DetectorKind::ml: return "ml";
    case DetectorKind::mmse: return "mmse";
    case DetectorKind::mpgsm: return "mpgsm";
    case DetectorKind::chemp: return "chemp";
    }
    return "?";
}

std::string to_string(CsiMode c) { return c == CsiMode::perfect ? "perfect" : "estimated"; }
std::string to_string(ChannelMode c) { return c == ChannelMode::flat ? "flat" : "selective"; }

GsmCodebook ScenarioConfig::codebook() const
{
    try {
        return make_codebook(n_t, n_rf, modulation, order);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

int ScenarioConfig::bpcu() const { return bits_per_channel_use(n_t, n_rf, order); }

DetectorParams ScenarioConfig::detector_params() const
{
    DetectorParams p = detector == DetectorKind::chemp ? default_chemp_params() : default_mpgsm_params();
    if (damping > 0.0) p.damping = damping;
    if (max_iters > 0) p.max_iters = max_iters;
    if (epsilon >= 0.0) p.epsilon = epsilon;
    return p;
}

double ScenarioConfig::effective_pilot_power() const
{
    if (pilot_power > 0.0) return pilot_power;
    return K * build_alphabet(modulation, order).avg_energy;
}

void ScenarioConfig::validate() const
{
    if (K < 1 || N < 1 || n_t < 1 || n_rf < 1) throw ConfigError("K, N, n_t and n_rf must be positive");
    if (n_rf > n_t) throw ConfigError("n_rf exceeds n_t");
    if (n_t > 16) throw ConfigError("n_t above 16 is not supported");
    (void)codebook();
    if (snr_db.empty()) throw ConfigError("empty SNR grid");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (!(snr_db[i] > snr_db[i - 1])) throw ConfigError("SNR grid must be strictly increasing");
    if (damping < 0.0 || damping > 1.0) throw ConfigError("damping outside [0, 1]");
    if (max_iters < 0) throw ConfigError("max_iters must be non-negative");
    if (min_errors == 0 && max_bits == 0 && max_trials == 0) throw ConfigError("stopping rule never triggers");
    if (vectors_per_trial < 1) throw ConfigError("vectors_per_trial must be positive");
    if (batch_trials < 1) throw ConfigError("batch_trials must be positive");
    if (pilot_power < 0.0) throw ConfigError("pilot_power must be non-negative");
    if (!column_vars.empty()) {
        if (static_cast<int>(column_vars.size()) != K * n_t) throw ConfigError("column_vars needs K n_t entries");
        double sum = 0.0;
        for (double v : column_vars) {
            if (!(v >= 0.0)) throw ConfigError("column_vars entries must be non-negative");
            sum += v;
        }
        if (std::abs(sum - K * n_t) > 1e-9 * K * n_t) throw ConfigError("column_vars must sum to K n_t");
    }
    if (channel == ChannelMode::selective) {
        if (L < 1 || I < 1) throw ConfigError("L and I must be positive");
        if (Q < L) throw ConfigError("Q must be at least L");
        if (xi_db < 0.0) throw ConfigError("xi_db must be non-negative");
        if (!column_vars.empty()) throw ConfigError("column_vars applies to the flat channel only");
    }
    if (detector == DetectorKind::ml) {
        const int users = channel == ChannelMode::selective ? K * Q : K;
        if (std::pow(static_cast<double>(codebook().size()), users) > 65536.0)
            throw ConfigError("ML search space exceeds 2^16 hypotheses");
    }
}

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
    return s;
}

// Drop a trailing comment outside quotes.
std::string strip_comment(std::string_view line)
{
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return std::string(line.substr(0, i));
        }
    }
    return std::string(line);
}

double to_double(const std::string& key, const std::string& v)
{
    const std::string s = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out))
        throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    return out;
}

std::int64_t to_int(const std::string& key, const std::string& v)
{
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
    return static_cast<std::int64_t>(d);
}

int to_small_int(const std::string& key, const std::string& v)
{
    const auto i = to_int(key, v);
    if (i < -1'000'000'000 || i > 1'000'000'000) throw ConfigError("'" + key + "': value out of range");
    return static_cast<int>(i);
}

std::uint64_t to_count(const std::string& key, const std::string& v)
{
    const std::string s = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
    // also accept forms such as 2e7
    const auto i = to_int(key, v);
    if (i < 0) throw ConfigError("'" + key + "': must be non-negative");
    return static_cast<std::uint64_t>(i);
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::string s = trim(v);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_list(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_double(v[i]);
    }
    return s + "]";
}

} // namespace

std::vector<double> parse_snr_grid(std::string_view text)
{
    const std::string s = trim(text);
    if (s.find(':') != std::string::npos && s.find('[') == std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(to_double("snr_db", item));
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
            throw ConfigError("snr_db range must be start:stop:step with step > 0");
        std::vector<double> out;
        const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
        return out;
    }
    return to_list("snr_db", s);
}

ConfigMap parse_config_text(std::string_view text)
{
    ConfigMap out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

ConfigMap load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& value)
{
    const std::string& v = value;
    if (key == "id") c.id = v;
    else if (key == "K") c.K = to_small_int(key, v);
    else if (key == "N") c.N = to_small_int(key, v);
    else if (key == "n_t") c.n_t = to_small_int(key, v);
    else if (key == "n_rf") c.n_rf = to_small_int(key, v);
    else if (key == "modulation") {
        try {
            c.modulation = parse_modulation(v);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    else if (key == "order") c.order = to_small_int(key, v);
    else if (key == "snr_db") c.snr_db = parse_snr_grid(v);
    else if (key == "detector") c.detector = parse_detector(v);
    else if (key == "damping") c.damping = to_double(key, v);
    else if (key == "max_iters") c.max_iters = to_small_int(key, v);
    else if (key == "epsilon") c.epsilon = to_double(key, v);
    else if (key == "csi") c.csi = parse_csi(v);
    else if (key == "gram_correction") {
        if (v == "partial") c.gram_correction = GramCorrection::partial;
        else if (v == "full") c.gram_correction = GramCorrection::full;
        else throw ConfigError("gram_correction must be partial or full");
    }
    else if (key == "pilot_power") c.pilot_power = to_double(key, v);
    else if (key == "channel") c.channel = parse_channel(v);
    else if (key == "L") c.L = to_small_int(key, v);
    else if (key == "xi_db") c.xi_db = to_double(key, v);
    else if (key == "Q") c.Q = to_small_int(key, v);
    else if (key == "I") c.I = to_small_int(key, v);
    else if (key == "column_vars") c.column_vars = to_list(key, v);
    else if (key == "min_errors") c.min_errors = to_count(key, v);
    else if (key == "max_bits") c.max_bits = to_count(key, v);
    else if (key == "max_trials") c.max_trials = to_count(key, v);
    else if (key == "vectors_per_trial") c.vectors_per_trial = to_small_int(key, v);
    else if (key == "batch_trials") c.batch_trials = to_small_int(key, v);
    else if (key == "ber_floor") c.ber_floor = to_double(key, v);
    else if (key == "seed") c.seed = to_count(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

ScenarioConfig apply_config(const ConfigMap& entries, ScenarioConfig base)
{
    for (const auto& [k, v] : entries) apply_setting(base, k, v);
    return base;
}

std::string to_config_text(const ScenarioConfig& c)
{
    std::ostringstream os;
    os << "id = \"" << c.id << "\"\n"
       << "K = " << c.K << "\nN = " << c.N << "\nn_t = " << c.n_t << "\nn_rf = " << c.n_rf << "\n"
       << "modulation = \"" << to_string(c.modulation) << "\"\norder = " << c.order << "\n"
       << "snr_db = " << format_list(c.snr_db) << "\n"
       << "detector = \"" << to_string(c.detector) << "\"\n"
       << "damping = " << format_double(c.damping) << "\nmax_iters = " << c.max_iters << "\nepsilon = " << format_double(c.epsilon) << "\n"
       << "csi = \"" << to_string(c.csi) << "\"\n"
       << "gram_correction = \"" << (c.gram_correction == GramCorrection::full ? "full" : "partial") << "\"\n"
       << "pilot_power = " << format_double(c.pilot_power) << "\n"
       << "channel = \"" << to_string(c.channel) << "\"\n"
       << "L = " << c.L << "\nxi_db = " << format_double(c.xi_db) << "\nQ = " << c.Q << "\nI = " << c.I << "\n"
       << "column_vars = " << format_list(c.column_vars) << "\n"
       << "min_errors = " << c.min_errors << "\nmax_bits = " << c.max_bits << "\nmax_trials = " << c.max_trials << "\n"
       << "vectors_per_trial = " << c.vectors_per_trial << "\nbatch_trials = " << c.batch_trials << "\n"
       << "ber_floor = " << format_double(c.ber_floor) << "\nseed = " << c.seed << "\n";
    return os.str();
}

} // namespace gsmimo
