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

#ifndef TILEBF_SCENARIO_HPP
#define TILEBF_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "tilebf/allocation.hpp"
#include "tilebf/beams.hpp"
#include "tilebf/hardware.hpp"
#include "tilebf/io.hpp"
#include "tilebf/model.hpp"
#include "tilebf/receiver.hpp"

namespace tilebf {

enum class Strategy {
    narrowband,
    single_broad,
    partitioned_broad,
    partitioned_narrow,
    dominant_mode,
    disjoint,
    full_sharing,
    clustered,
    rf_only,
    ideal_limit,
};

struct StrategySpec {
    Strategy kind = Strategy::narrowband;
    std::size_t cluster_size = 0; // clustered only

    std::string label() const
    {
        switch (kind) {
            case Strategy::narrowband: return "narrowband";
            case Strategy::single_broad: return "single_broad";
            case Strategy::partitioned_broad: return "partitioned_broad";
            case Strategy::partitioned_narrow: return "partitioned_narrow";
            case Strategy::dominant_mode: return "dominant_mode";
            case Strategy::disjoint: return "disjoint";
            case Strategy::full_sharing: return "full_sharing";
            case Strategy::clustered: return "clustered_" + std::to_string(cluster_size);
            case Strategy::rf_only: return "rf_only";
            case Strategy::ideal_limit: return "ideal_limit";
        }
        return "unknown";
    }
};

inline Strategy strategy_from_name(const std::string& name)
{
    if (name == "narrowband") return Strategy::narrowband;
    if (name == "single_broad") return Strategy::single_broad;
    if (name == "partitioned_broad") return Strategy::partitioned_broad;
    if (name == "partitioned_narrow") return Strategy::partitioned_narrow;
    if (name == "dominant_mode") return Strategy::dominant_mode;
    if (name == "disjoint") return Strategy::disjoint;
    if (name == "full_sharing") return Strategy::full_sharing;
    if (name == "clustered") return Strategy::clustered;
    if (name == "rf_only") return Strategy::rf_only;
    if (name == "ideal_limit") return Strategy::ideal_limit;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

/// Linear SNR sweep in dB.  Per-element SNR at a point is 10^(snr_db/10)
/// for a unit-gain link; the runner sets the per-dimension noise variance to
/// sigma^2 = 10^(-snr_db/10) / 2 with link gains left untouched.
struct SnrSweep {
    double start_db = -10.0;
    double stop_db = 30.0;
    double step_db = 2.0;

    void validate() const
    {
        if (!std::isfinite(start_db) || !std::isfinite(stop_db) || !std::isfinite(step_db))
            throw std::invalid_argument("snr_db: values must be finite");
        if (!(step_db > 0.0))
            throw std::invalid_argument("snr_db.step: must be positive");
        if (stop_db < start_db)
            throw std::invalid_argument("snr_db.stop: must be >= snr_db.start");
    }

    std::vector<double> points() const
    {
        validate();
        const std::size_t count =
            static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
        std::vector<double> snrs(count);
        for (std::size_t i = 0; i < count; ++i)
            snrs[i] = start_db + static_cast<double>(i) * step_db;
        return snrs;
    }
};

struct OutputSpec {
    std::string results_csv;
    std::string results_json;
    std::string pattern_stem;
    std::size_t pattern_points = 2048;
    double pattern_omega_min = -kPi;
    double pattern_omega_max = kPi;

    PatternGrid pattern_grid() const
    {
        return PatternGrid{pattern_omega_min, pattern_omega_max, pattern_points};
    }
};

struct ScenarioConfig {
    std::string scenario_id = "scenario";
    std::string description;
    ArrayLayout layout{32, 8};
    double carrier_hz = 140e9;
    double bandwidth_hz = 28e9;
    std::size_t n_subcarriers = 256;
    SnrSweep snr;
    std::vector<UserSpec> users;
    std::vector<StrategySpec> strategies;
    PowerModel power;
    std::uint64_t seed = 1;
    OutputSpec output;

    double beta() const { return bandwidth_hz / carrier_hz; }
};

namespace detail {

inline bool uses_quadratic_beams(Strategy s)
{
    switch (s) {
        case Strategy::single_broad:
        case Strategy::partitioned_broad:
        case Strategy::disjoint:
        case Strategy::full_sharing:
        case Strategy::clustered:
        case Strategy::rf_only:
            return true;
        default:
            return false;
    }
}

inline bool requires_sorted_users(Strategy s)
{
    return s == Strategy::clustered || s == Strategy::rf_only;
}

} // namespace detail

/// Check every module precondition the run would hit, before any compute.
/// Throws std::invalid_argument naming the offending config field.
inline void validate_scenario(const ScenarioConfig& cfg)
{
    if (cfg.scenario_id.empty())
        throw std::invalid_argument("scenario: must not be empty");
    if (cfg.scenario_id.find(',') != std::string::npos)
        throw std::invalid_argument("scenario: must not contain commas");

    // throws with its own message if the grid parameters are inconsistent
    const FrequencyGrid grid(cfg.carrier_hz, cfg.bandwidth_hz, cfg.n_subcarriers);
    (void)grid;
    cfg.snr.validate();
    cfg.power.validate();

    if (cfg.users.empty())
        throw std::invalid_argument("users: must not be empty");
    for (std::size_t k = 0; k < cfg.users.size(); ++k)
        if (cfg.users[k].tile_gains.size() != cfg.layout.n_tiles())
            throw std::invalid_argument("users[" + std::to_string(k) + "].gains: expected " +
                                        std::to_string(cfg.layout.n_tiles()) + " entries, got " +
                                        std::to_string(cfg.users[k].tile_gains.size()));

    if (cfg.strategies.empty())
        throw std::invalid_argument("strategies: must not be empty");

    const std::size_t n_users = cfg.users.size();
    const std::size_t nd = cfg.layout.n_tiles();
    const bool sorted = std::is_sorted(cfg.users.begin(), cfg.users.end(),
                                       [](const UserSpec& a, const UserSpec& b) {
                                           return a.theta_deg < b.theta_deg;
                                       });

    for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
        const StrategySpec& strat = cfg.strategies[s];
        const std::string where = "strategies[" + std::to_string(s) + "] (" + strat.label() + ")";
        switch (strat.kind) {
            case Strategy::narrowband:
            case Strategy::single_broad:
            case Strategy::partitioned_broad:
            case Strategy::partitioned_narrow:
            case Strategy::dominant_mode:
                if (n_users != 1)
                    throw std::invalid_argument(where + ": single-user strategy, got " +
                                                std::to_string(n_users) + " users");
                break;
            case Strategy::disjoint:
                if (nd % n_users != 0)
                    throw std::invalid_argument(where + ": user count must divide tile count");
                break;
            case Strategy::full_sharing:
                if (n_users < 2)
                    throw std::invalid_argument(where + ": needs at least two users");
                break;
            case Strategy::clustered:
                if (strat.cluster_size == 0 || n_users % strat.cluster_size != 0)
                    throw std::invalid_argument(where +
                                                ": cluster_size must divide the user count");
                if (n_users != nd)
                    throw std::invalid_argument(where + ": needs one tile per user");
                break;
            case Strategy::rf_only:
                if (n_users != nd)
                    throw std::invalid_argument(where + ": needs one tile per user");
                break;
            case Strategy::ideal_limit:
                break;
        }
        if (detail::requires_sorted_users(strat.kind) && !sorted)
            throw std::invalid_argument(where + ": users must be listed sorted by angle");
        if (detail::uses_quadratic_beams(strat.kind) && cfg.layout.n_per_tile() % 2 != 0)
            throw std::invalid_argument(where + ": broad beams need an even n_per_tile");
    }

    if (cfg.output.pattern_points == 0)
        throw std::invalid_argument("output.pattern_points: must be >= 1");
    if (!(cfg.output.pattern_omega_max >= cfg.output.pattern_omega_min))
        throw std::invalid_argument("output.pattern_omega_max: must be >= pattern_omega_min");
}

/// RF weight plan backing one strategy.  ideal_limit has no plan and is
/// rejected here.
inline RfWeightPlan build_strategy_plan(const ScenarioConfig& cfg, const StrategySpec& strat,
                                        const ChannelTensor& tensor)
{
    const double beta = cfg.beta();
    switch (strat.kind) {
        case Strategy::narrowband: {
            const double omega_c =
                spatial_frequency(cfg.users[0].theta_deg, cfg.carrier_hz, cfg.carrier_hz);
            return detail::uniform_plan(
                cfg.layout, narrowband_weights(cfg.layout.n_per_tile(), omega_c), true);
        }
        case Strategy::single_broad:
            return single_broadbeam_plan(cfg.layout,
                                         squint_interval(cfg.users[0].theta_deg, beta));
        case Strategy::partitioned_broad:
            return partitioned_broadbeam_plan(cfg.layout,
                                              squint_interval(cfg.users[0].theta_deg, beta));
        case Strategy::partitioned_narrow:
            return partitioned_narrowbeam_plan(cfg.layout,
                                               squint_interval(cfg.users[0].theta_deg, beta));
        case Strategy::dominant_mode:
            return dominant_mode_plan(tensor, 0);
        case Strategy::disjoint:
            return disjoint_allocation(cfg.layout, cfg.users, beta).plan;
        case Strategy::full_sharing:
            return full_sharing_plan(cfg.layout, cfg.users, beta).plan;
        case Strategy::clustered:
            return cluster_allocation(cfg.layout, cfg.users, strat.cluster_size, beta).plan;
        case Strategy::rf_only:
            return cluster_allocation(cfg.layout, cfg.users, 1, beta).plan;
        case Strategy::ideal_limit:
            throw std::invalid_argument("ideal_limit has no RF weight plan");
    }
    throw std::logic_error("build_strategy_plan: unhandled strategy");
}

/// Execute every (strategy, SNR) point of the scenario.  Rows come back
/// sorted by (scenario, strategy, snr, user), one row per user.
inline std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg)
{
    validate_scenario(cfg);

    const FrequencyGrid grid(cfg.carrier_hz, cfg.bandwidth_hz, cfg.n_subcarriers);
    const ChannelTensor tensor = build_channel_tensor(cfg.layout, cfg.users, grid);
    const double power_w = total_power_w(cfg.power, cfg.layout);
    const std::vector<double> snrs = cfg.snr.points();
    const std::size_t n_users = cfg.users.size();

    std::vector<ResultRow> rows;
    rows.reserve(cfg.strategies.size() * snrs.size() * n_users);

    auto push_rows = [&](const std::string& label, double snr_db,
                         const std::vector<double>& rates, double bound) {
        const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
        for (std::size_t k = 0; k < rates.size(); ++k)
            rows.push_back(ResultRow{cfg.scenario_id, label, snr_db, k + 1, rates[k], sum,
                                     bound, power_w});
    };

    for (const StrategySpec& strat : cfg.strategies) {
        const std::string label = strat.label();

        if (strat.kind == Strategy::ideal_limit) {
            // full coherent array gain, no squint: log2(1 + N * SNR) per user
            for (double snr_db : snrs) {
                const double snr_lin = std::pow(10.0, snr_db / 10.0);
                const double rate =
                    std::log2(1.0 + static_cast<double>(cfg.layout.n_total()) * snr_lin);
                const std::vector<double> rates(n_users, rate);
                push_rows(label, snr_db, rates, rate * static_cast<double>(n_users));
            }
            continue;
        }

        const RfWeightPlan plan = build_strategy_plan(cfg, strat, tensor);
        const EffectiveChannel eff = effective_channel(plan, tensor);

        for (double snr_db : snrs) {
            const double sigma2 = std::pow(10.0, -snr_db / 10.0) / 2.0;
            if (strat.kind == Strategy::rf_only) {
                std::vector<std::size_t> tile_of_user(n_users);
                std::iota(tile_of_user.begin(), tile_of_user.end(), std::size_t{0});
                std::vector<double> rates(n_users);
                for (std::size_t k = 0; k < n_users; ++k)
                    rates[k] = rf_only_rate(eff, tile_of_user, k, sigma2);
                push_rows(label, snr_db, rates, logdet_sum_rate_bound(eff, sigma2));
            } else {
                const RateReport report = rate_report(eff, sigma2);
                push_rows(label, snr_db, report.per_user_rates, report.logdet_bound);
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.scenario, a.strategy, a.snr_db, a.user) <
               std::tie(b.scenario, b.strategy, b.snr_db, b.user);
    });
    return rows;
}

// ---------------------------------------------------------------------------
// JSON config ingestion
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where)
{
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
}

inline double get_number(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.at(key).is_number())
        throw std::invalid_argument(where + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

inline std::size_t get_count(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.at(key).is_number_unsigned())
        throw std::invalid_argument(where + "." + key + ": expected a nonnegative integer");
    return obj.at(key).get<std::size_t>();
}

inline std::vector<cxd> parse_user_gains(const json& user, std::size_t n_tiles,
                                         const std::string& where)
{
    if (user.contains("gain") && user.contains("gains"))
        throw std::invalid_argument(where + ": give either 'gain' or 'gains', not both");
    if (user.contains("gain")) {
        const double g = get_number(user, "gain", where);
        return std::vector<cxd>(n_tiles, cxd(g, 0.0));
    }
    if (user.contains("gains")) {
        const json& arr = user.at("gains");
        if (!arr.is_array() || arr.size() != n_tiles)
            throw std::invalid_argument(where + ".gains: expected an array of " +
                                        std::to_string(n_tiles) + " entries");
        std::vector<cxd> gains(n_tiles);
        for (std::size_t i = 0; i < n_tiles; ++i) {
            const json& g = arr[i];
            if (g.is_number())
                gains[i] = cxd(g.get<double>(), 0.0);
            else if (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number())
                gains[i] = cxd(g[0].get<double>(), g[1].get<double>());
            else
                throw std::invalid_argument(where + ".gains[" + std::to_string(i) +
                                            "]: expected a number or [re, im]");
        }
        return gains;
    }
    return std::vector<cxd>(n_tiles, cxd(1.0, 0.0));
}

} // namespace detail

inline ScenarioConfig parse_scenario_config(const nlohmann::json& doc)
{
    using detail::get_count;
    using detail::get_number;
    using nlohmann::json;

    if (!doc.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    detail::reject_unknown_keys(doc,
                                {"scenario", "description", "layout", "carrier_hz",
                                 "bandwidth_hz", "n_subcarriers", "snr_db", "users",
                                 "strategies", "power_model", "seed", "output"},
                                "config");

    ScenarioConfig cfg;
    if (doc.contains("scenario"))
        cfg.scenario_id = doc.at("scenario").get<std::string>();
    if (doc.contains("description"))
        cfg.description = doc.at("description").get<std::string>();

    if (doc.contains("layout")) {
        const json& lay = doc.at("layout");
        detail::reject_unknown_keys(lay, {"n_per_tile", "n_tiles"}, "layout");
        const std::size_t na =
            lay.contains("n_per_tile") ? get_count(lay, "n_per_tile", "layout") : 32;
        const std::size_t nd = lay.contains("n_tiles") ? get_count(lay, "n_tiles", "layout") : 8;
        if (na == 0 || nd == 0)
            throw std::invalid_argument("layout: n_per_tile and n_tiles must be >= 1");
        cfg.layout = ArrayLayout(na, nd);
    }

    if (doc.contains("carrier_hz"))
        cfg.carrier_hz = get_number(doc, "carrier_hz", "config");
    if (doc.contains("bandwidth_hz"))
        cfg.bandwidth_hz = get_number(doc, "bandwidth_hz", "config");
    if (doc.contains("n_subcarriers"))
        cfg.n_subcarriers = get_count(doc, "n_subcarriers", "config");

    if (doc.contains("snr_db")) {
        const json& snr = doc.at("snr_db");
        detail::reject_unknown_keys(snr, {"start", "stop", "step"}, "snr_db");
        if (snr.contains("start"))
            cfg.snr.start_db = get_number(snr, "start", "snr_db");
        if (snr.contains("stop"))
            cfg.snr.stop_db = get_number(snr, "stop", "snr_db");
        if (snr.contains("step"))
            cfg.snr.step_db = get_number(snr, "step", "snr_db");
    }

    if (!doc.contains("users") || !doc.at("users").is_array() || doc.at("users").empty())
        throw std::invalid_argument("users: required nonempty array");
    for (std::size_t k = 0; k < doc.at("users").size(); ++k) {
        const json& user = doc.at("users")[k];
        const std::string where = "users[" + std::to_string(k) + "]";
        if (!user.is_object() || !user.contains("theta_deg"))
            throw std::invalid_argument(where + ": expected an object with theta_deg");
        detail::reject_unknown_keys(user, {"theta_deg", "gain", "gains"}, where);
        const double theta = get_number(user, "theta_deg", where);
        if (!(std::abs(theta) < 90.0))
            throw std::invalid_argument(where + ".theta_deg: |theta| must be < 90");
        cfg.users.emplace_back(theta,
                               detail::parse_user_gains(user, cfg.layout.n_tiles(), where));
    }

    if (!doc.contains("strategies") || !doc.at("strategies").is_array() ||
        doc.at("strategies").empty())
        throw std::invalid_argument("strategies: required nonempty array");
    for (std::size_t s = 0; s < doc.at("strategies").size(); ++s) {
        const json& strat = doc.at("strategies")[s];
        const std::string where = "strategies[" + std::to_string(s) + "]";
        StrategySpec spec;
        if (strat.is_string()) {
            spec.kind = strategy_from_name(strat.get<std::string>());
        } else if (strat.is_object() && strat.contains("name")) {
            detail::reject_unknown_keys(strat, {"name", "cluster_size"}, where);
            spec.kind = strategy_from_name(strat.at("name").get<std::string>());
            if (strat.contains("cluster_size"))
                spec.cluster_size = get_count(strat, "cluster_size", where);
        } else {
            throw std::invalid_argument(where + ": expected a strategy name or object");
        }
        if (spec.kind == Strategy::clustered && spec.cluster_size == 0)
            throw std::invalid_argument(where + ": clustered strategy needs cluster_size");
        if (spec.kind != Strategy::clustered && spec.cluster_size != 0)
            throw std::invalid_argument(where + ": cluster_size only applies to clustered");
        cfg.strategies.push_back(spec);
    }

    if (doc.contains("power_model")) {
        const json& pm = doc.at("power_model");
        detail::reject_unknown_keys(pm, {"per_element_mw", "per_tile_mw"}, "power_model");
        if (pm.contains("per_element_mw"))
            cfg.power.per_element_mw = get_number(pm, "per_element_mw", "power_model");
        if (pm.contains("per_tile_mw"))
            cfg.power.per_tile_mw = get_number(pm, "per_tile_mw", "power_model");
    }

    if (doc.contains("seed"))
        cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        detail::reject_unknown_keys(out,
                                    {"results_csv", "results_json", "pattern_stem",
                                     "pattern_points", "pattern_omega_min",
                                     "pattern_omega_max"},
                                    "output");
        if (out.contains("results_csv"))
            cfg.output.results_csv = out.at("results_csv").get<std::string>();
        if (out.contains("results_json"))
            cfg.output.results_json = out.at("results_json").get<std::string>();
        if (out.contains("pattern_stem"))
            cfg.output.pattern_stem = out.at("pattern_stem").get<std::string>();
        if (out.contains("pattern_points"))
            cfg.output.pattern_points = get_count(out, "pattern_points", "output");
        if (out.contains("pattern_omega_min"))
            cfg.output.pattern_omega_min = get_number(out, "pattern_omega_min", "output");
        if (out.contains("pattern_omega_max"))
            cfg.output.pattern_omega_max = get_number(out, "pattern_omega_max", "output");
    }

    validate_scenario(cfg);
    return cfg;
}

inline ScenarioConfig load_scenario_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, true); // allow comments
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error("config '" + path + "': " + err.what());
    }
    try {
        return parse_scenario_config(doc);
    } catch (const std::exception& err) {
        throw std::runtime_error("config '" + path + "': " + err.what());
    }
}

// ---------------------------------------------------------------------------
// Preset discovery
// ---------------------------------------------------------------------------

struct PresetInfo {
    std::string name;
    std::string description;
};

/// All *.json files in dir, sorted by name.
inline std::vector<PresetInfo> list_presets(const std::string& dir)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::runtime_error("preset directory '" + dir + "' not found");
    std::vector<PresetInfo> presets;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json")
            continue;
        PresetInfo info;
        info.name = entry.path().stem().string();
        std::ifstream in(entry.path());
        if (in) {
            try {
                const nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, true);
                if (doc.contains("description"))
                    info.description = doc.at("description").get<std::string>();
            } catch (const nlohmann::json::parse_error&) {
                info.description = "(unparseable)";
            }
        }
        presets.push_back(std::move(info));
    }
    std::sort(presets.begin(), presets.end(),
              [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
    return presets;
}

/// Treat arg as a path if it exists, otherwise look for <preset_dir>/<arg>.json.
inline std::string resolve_config_path(const std::string& arg, const std::string& preset_dir)
{
    namespace fs = std::filesystem;
    if (fs::is_regular_file(arg))
        return arg;
    const fs::path candidate = fs::path(preset_dir) / (arg + ".json");
    if (fs::is_regular_file(candidate))
        return candidate.string();
    throw std::runtime_error("'" + arg + "' is neither a config file nor a preset in '" +
                             preset_dir + "'");
}

} // namespace tilebf

#endif // TILEBF_SCENARIO_HPP
