// SPDX-License-Identifier: Apache-2.0
//
// tilebf: link-level simulator for wideband tiled hybrid beamforming
// Copyright (C) 2026 The tilebf authors
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

#ifndef TILEBF_IO_HPP
#define TILEBF_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tilebf/beams.hpp"

namespace tilebf {

/// One sweep point of one strategy for one user.  user is 1-based in all
/// serialized output.
struct ResultRow {
    std::string scenario;
    std::string strategy;
    double snr_db = 0.0;
    std::size_t user = 1;
    double rate_bps_hz = 0.0;
    double sum_rate_bps_hz = 0.0;
    double bound_bps_hz = 0.0;
    double power_w = 0.0;
};

inline constexpr const char* kResultsCsvHeader =
    "scenario,strategy,snr_db,user,rate_bps_hz,sum_rate_bps_hz,bound_bps_hz,power_w";

namespace detail {

/// 15 significant digits: stable for golden files, round-trips doubles well
/// below 1e-10 relative error.
inline std::string fmt_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::ofstream open_output(const std::string& path, const char* who)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error(std::string(who) + ": cannot open '" + path +
                                 "' for writing");
    return out;
}

} // namespace detail

inline void emit_results_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
    if (rows.empty())
        throw std::invalid_argument("emit_results_csv: no rows to write");
    std::ofstream out = detail::open_output(path, "emit_results_csv");
    out << kResultsCsvHeader << '\n';
    for (const ResultRow& r : rows)
        out << r.scenario << ',' << r.strategy << ',' << detail::fmt_num(r.snr_db) << ','
            << r.user << ',' << detail::fmt_num(r.rate_bps_hz) << ','
            << detail::fmt_num(r.sum_rate_bps_hz) << ',' << detail::fmt_num(r.bound_bps_hz)
            << ',' << detail::fmt_num(r.power_w) << '\n';
    if (!out)
        throw std::runtime_error("emit_results_csv: write to '" + path + "' failed");
}

inline void emit_results_json(const std::vector<ResultRow>& rows, const std::string& path)
{
    if (rows.empty())
        throw std::invalid_argument("emit_results_json: no rows to write");
    std::ofstream out = detail::open_output(path, "emit_results_json");
    out << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        out << "  {\"scenario\":\"" << r.scenario << "\",\"strategy\":\"" << r.strategy
            << "\",\"snr_db\":" << detail::fmt_num(r.snr_db) << ",\"user\":" << r.user
            << ",\"rate_bps_hz\":" << detail::fmt_num(r.rate_bps_hz)
            << ",\"sum_rate_bps_hz\":" << detail::fmt_num(r.sum_rate_bps_hz)
            << ",\"bound_bps_hz\":" << detail::fmt_num(r.bound_bps_hz)
            << ",\"power_w\":" << detail::fmt_num(r.power_w) << '}'
            << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    if (!out)
        throw std::runtime_error("emit_results_json: write to '" + path + "' failed");
}

inline std::vector<ResultRow> parse_results_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("parse_results_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kResultsCsvHeader)
        throw std::runtime_error("parse_results_csv: bad header in '" + path + "'");

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 8)
            throw std::runtime_error("parse_results_csv: malformed row '" + line + "'");
        ResultRow r;
        r.scenario = fields[0];
        r.strategy = fields[1];
        r.snr_db = std::stod(fields[2]);
        r.user = static_cast<std::size_t>(std::stoul(fields[3]));
        r.rate_bps_hz = std::stod(fields[4]);
        r.sum_rate_bps_hz = std::stod(fields[5]);
        r.bound_bps_hz = std::stod(fields[6]);
        r.power_w = std::stod(fields[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ResultRow> parse_results_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("parse_results_json: cannot open '" + path + "'");
    const nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<ResultRow> rows;
    for (const nlohmann::json& obj : doc) {
        ResultRow r;
        r.scenario = obj.at("scenario").get<std::string>();
        r.strategy = obj.at("strategy").get<std::string>();
        r.snr_db = obj.at("snr_db").get<double>();
        r.user = obj.at("user").get<std::size_t>();
        r.rate_bps_hz = obj.at("rate_bps_hz").get<double>();
        r.sum_rate_bps_hz = obj.at("sum_rate_bps_hz").get<double>();
        r.bound_bps_hz = obj.at("bound_bps_hz").get<double>();
        r.power_w = obj.at("power_w").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Evaluation grid for beam patterns.  A single-point grid samples the
/// middle of the range.
struct PatternGrid {
    double omega_min = -kPi;
    double omega_max = kPi;
    std::size_t n_points = 2048;

    std::vector<double> points() const
    {
        if (n_points == 0)
            throw std::invalid_argument("PatternGrid: n_points must be >= 1");
        if (!(omega_max >= omega_min))
            throw std::invalid_argument("PatternGrid: omega_max must be >= omega_min");
        if (n_points == 1)
            return {(omega_min + omega_max) / 2.0};
        std::vector<double> omegas(n_points);
        const double step = (omega_max - omega_min) / static_cast<double>(n_points - 1);
        for (std::size_t i = 0; i < n_points; ++i)
            omegas[i] = omega_min + static_cast<double>(i) * step;
        return omegas;
    }
};

/// CSV with one row per (tile, omega): `tile,omega,gain`.  tile is 1-based.
inline void emit_beam_pattern(const RfWeightPlan& plan, const PatternGrid& grid,
                              const std::string& path)
{
    if (plan.tile_weights.empty())
        throw std::invalid_argument("emit_beam_pattern: plan has no tiles");
    const std::vector<double> omegas = grid.points();

    std::ofstream out = detail::open_output(path, "emit_beam_pattern");
    out << "tile,omega,gain\n";
    for (std::size_t m = 0; m < plan.tile_weights.size(); ++m) {
        const std::vector<double> gains = beam_gain_pattern(plan.tile_weights[m], omegas);
        for (std::size_t s = 0; s < omegas.size(); ++s)
            out << (m + 1) << ',' << detail::fmt_num(omegas[s]) << ','
                << detail::fmt_num(gains[s]) << '\n';
    }
    if (!out)
        throw std::runtime_error("emit_beam_pattern: write to '" + path + "' failed");
}

} // namespace tilebf

#endif // TILEBF_IO_HPP
