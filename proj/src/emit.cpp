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

#include "gsmimo/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gsmimo {

OutputFormat parse_format(const std::string& s)
{
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "both") return OutputFormat::both;
    throw ConfigError("unknown output format '" + s + "'");
}

namespace {

// Shortest text that parses back to the same double.
std::string num(double v)
{
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string bits_string(const BitVector& b)
{
    std::string s;
    for (auto v : b) s += v ? '1' : '0';
    return s;
}

} // namespace

std::string ber_csv_header() { return "scenario_id,snr_db,ber,ci_half,bits,errors\n"; }

std::string to_csv(const std::vector<BerResult>& results, bool header)
{
    std::ostringstream os;
    if (header) os << ber_csv_header();
    for (const auto& r : results)
        for (const auto& p : r.points)
            os << r.scenario_id << ',' << num(p.snr_db) << ',' << num(p.ber) << ',' << num(p.ci_half) << ',' << p.bits << ','
               << p.errors << '\n';
    return os.str();
}

json to_json(const ScenarioConfig& c)
{
    return json{{"id", c.id},
                {"K", c.K},
                {"N", c.N},
                {"n_t", c.n_t},
                {"n_rf", c.n_rf},
                {"modulation", to_string(c.modulation)},
                {"order", c.order},
                {"snr_db", c.snr_db},
                {"detector", to_string(c.detector)},
                {"damping", c.damping},
                {"max_iters", c.max_iters},
                {"epsilon", c.epsilon},
                {"csi", to_string(c.csi)},
                {"gram_correction", c.gram_correction == GramCorrection::full ? "full" : "partial"},
                {"pilot_power", c.pilot_power},
                {"channel", to_string(c.channel)},
                {"L", c.L},
                {"xi_db", c.xi_db},
                {"Q", c.Q},
                {"I", c.I},
                {"column_vars", c.column_vars},
                {"min_errors", c.min_errors},
                {"max_bits", c.max_bits},
                {"max_trials", c.max_trials},
                {"vectors_per_trial", c.vectors_per_trial},
                {"batch_trials", c.batch_trials},
                {"ber_floor", c.ber_floor},
                {"seed", c.seed}};
}

ScenarioConfig scenario_from_json(const json& j)
{
    try {
        ScenarioConfig c;
        c.id = j.at("id").get<std::string>();
        c.K = j.at("K").get<int>();
        c.N = j.at("N").get<int>();
        c.n_t = j.at("n_t").get<int>();
        c.n_rf = j.at("n_rf").get<int>();
        c.modulation = parse_modulation(j.at("modulation").get<std::string>());
        c.order = j.at("order").get<int>();
        c.snr_db = j.at("snr_db").get<std::vector<double>>();
        c.detector = parse_detector(j.at("detector").get<std::string>());
        c.damping = j.at("damping").get<double>();
        c.max_iters = j.at("max_iters").get<int>();
        c.epsilon = j.at("epsilon").get<double>();
        c.csi = parse_csi(j.at("csi").get<std::string>());
        c.gram_correction = j.at("gram_correction").get<std::string>() == "full" ? GramCorrection::full : GramCorrection::partial;
        c.pilot_power = j.at("pilot_power").get<double>();
        c.channel = parse_channel(j.at("channel").get<std::string>());
        c.L = j.at("L").get<int>();
        c.xi_db = j.at("xi_db").get<double>();
        c.Q = j.at("Q").get<int>();
        c.I = j.at("I").get<int>();
        c.column_vars = j.at("column_vars").get<std::vector<double>>();
        c.min_errors = j.at("min_errors").get<std::uint64_t>();
        c.max_bits = j.at("max_bits").get<std::uint64_t>();
        c.max_trials = j.at("max_trials").get<std::uint64_t>();
        c.vectors_per_trial = j.at("vectors_per_trial").get<int>();
        c.batch_trials = j.at("batch_trials").get<int>();
        c.ber_floor = j.at("ber_floor").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario json: ") + e.what());
    }
}

json to_json(const BerResult& r)
{
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"snr_db", p.snr_db},
                       {"sigma2", p.sigma2},
                       {"trials", p.trials},
                       {"bits", p.bits},
                       {"errors", p.errors},
                       {"ber", p.ber},
                       {"ci_half", p.ci_half}});
    const DetectorParams dp = r.config.detector_params();
    return json{{"scenario_id", r.scenario_id},
                {"config", to_json(r.config)},
                {"effective", {{"damping", dp.damping},
                               {"max_iters", dp.max_iters},
                               {"epsilon", dp.epsilon},
                               {"eta", r.config.eta()},
                               {"snr_definition", "average received signal power per receive antenna over sigma2"}}},
                {"points", pts},
                {"wall_time_s", r.wall_time_s},
                {"version", r.version}};
}

BerResult ber_result_from_json(const json& j)
{
    try {
        BerResult r;
        r.scenario_id = j.at("scenario_id").get<std::string>();
        r.config = scenario_from_json(j.at("config"));
        for (const auto& p : j.at("points")) {
            BerPoint b;
            b.snr_db = p.at("snr_db").get<double>();
            b.sigma2 = p.at("sigma2").get<double>();
            b.trials = p.at("trials").get<std::uint64_t>();
            b.bits = p.at("bits").get<std::uint64_t>();
            b.errors = p.at("errors").get<std::uint64_t>();
            b.ber = p.at("ber").get<double>();
            b.ci_half = p.at("ci_half").get<double>();
            r.points.push_back(b);
        }
        r.wall_time_s = j.at("wall_time_s").get<double>();
        r.version = j.at("version").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("result json: ") + e.what());
    }
}

json to_json(const SweepResult& s)
{
    json res = json::array();
    for (std::size_t i = 0; i < s.results.size(); ++i) {
        json r = to_json(s.results[i]);
        const auto& c = s.crossings[i];
        r["snr_at_target"] = c.censored ? json(nullptr) : json(c.snr_db);
        r["censored"] = c.censored;
        res.push_back(std::move(r));
    }
    return json{{"name", s.name}, {"target_ber", s.target_ber}, {"results", res}};
}

std::string bound_csv(const BoundResult& b)
{
    std::ostringstream os;
    os << "snr_db,bound,eta\n";
    for (std::size_t i = 0; i < b.bound.size(); ++i)
        os << num(b.snr_db.empty() ? std::nan("") : b.snr_db[i]) << ',' << num(b.bound[i]) << ',' << b.eta << '\n';
    return os.str();
}

json bound_diagnostics(const BoundResult& b)
{
    json phi = json::array();
    for (std::size_t q = 0; q < b.phi.phi.size(); ++q)
        phi.push_back({{"q", q}, {"count", b.phi.phi[q]}, {"index_bit_distance", b.phi.idx_dist[q]}});
    return json{{"eta", b.eta},
                {"receive_antennas", b.receive_antennas},
                {"snr_db", b.snr_db},
                {"sigma2", b.sigma2},
                {"bound", b.bound},
                {"phi", phi},
                {"pattern_tuple_pairs", b.diagnostics.pattern_tuple_pairs},
                {"user_structures", b.diagnostics.user_structures},
                {"classes", b.diagnostics.classes},
                {"spectrum_terms", b.diagnostics.spectrum_terms},
                {"codeword_pairs", b.diagnostics.codeword_pairs}};
}

std::string overlay_csv(const std::vector<BoundResult>& bounds, const std::vector<BerResult>& sims)
{
    if (bounds.size() != sims.size()) throw std::invalid_argument("overlay_csv: one bound per simulation");
    std::ostringstream os;
    os << "scenario_id,source,snr_db,ber,ci_half,bits,errors\n";
    for (std::size_t s = 0; s < sims.size(); ++s) {
        const auto& b = bounds[s];
        for (std::size_t i = 0; i < b.bound.size(); ++i)
            os << sims[s].scenario_id << ",bound," << num(b.snr_db[i]) << ',' << num(b.bound[i]) << ",0,0,0\n";
        for (const auto& p : sims[s].points)
            os << sims[s].scenario_id << ",sim," << num(p.snr_db) << ',' << num(p.ber) << ',' << num(p.ci_half) << ',' << p.bits << ','
               << p.errors << '\n';
    }
    return os.str();
}

std::string codebook_json_lines(const GsmCodebook& codebook)
{
    std::ostringstream os;
    for (int c = 0; c < codebook.size(); ++c) {
        json entries = json::array();
        for (Eigen::Index a = 0; a < codebook.vector(c).size(); ++a)
            entries.push_back({codebook.vector(c)[a].real(), codebook.vector(c)[a].imag()});
        const json line{{"index", c},
                        {"bits", bits_string(codebook.bit_label(c))},
                        {"pattern", bits_string(codebook.pattern_set().patterns[static_cast<std::size_t>(codebook.pattern_of(c))])},
                        {"entries", entries}};
        os << line.dump() << '\n';
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

} // namespace gsmimo
