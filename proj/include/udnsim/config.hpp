/*
 *   Copyright 2026 the udnsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/detector_types.hpp"
#include "udnsim/geometry.hpp"

namespace udnsim {

// Flat `key = value` text, one pair per line, `#` comments. Keys mirror the
// scenario, detector, and experiment field names, e.g.
//
//   mode = fixed-count
//   n_aps = 40
//   n_users = 32
//   area = 10
//   tx_snr_db = 95
//   detectors = mp-random_async, cg
//   trials = 50
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str(), path);
    }

    static KeyValueConfig parse_text(const std::string& text, const std::string& origin = "<text>") {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return to_double(key, it->second);
    }

    long long get_int(const std::string& key, long long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return to_int(key, it->second);
    }

    std::vector<std::string> get_list(const std::string& key) const {
        std::vector<std::string> out;
        const auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::istringstream in(it->second);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::string t = trim(item);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw config_error("");
            return d;
        } catch (...) {
            throw config_error("config: key '" + key + "' has non-numeric value '" + v + "'");
        }
    }

    static long long to_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const long long i = std::stoll(v, &pos);
            if (pos != v.size()) throw config_error("");
            return i;
        } catch (...) {
            throw config_error("config: key '" + key + "' has non-integer value '" + v + "'");
        }
    }

private:
    std::map<std::string, std::string> values_;
};

inline ScenarioConfig scenario_from_config(const KeyValueConfig& cfg) {
    ScenarioConfig sc;
    const std::string mode = cfg.get_string("mode", "fixed-count");
    if (mode == "fixed-count")
        sc.mode = PlacementMode::fixed_count;
    else if (mode == "poisson")
        sc.mode = PlacementMode::poisson;
    else
        throw config_error("config: mode must be 'fixed-count' or 'poisson', got '" + mode + "'");
    sc.n_aps = static_cast<int>(cfg.get_int("n_aps", sc.n_aps));
    sc.n_users = static_cast<int>(cfg.get_int("n_users", sc.n_users));
    sc.ap_density = cfg.get_double("ap_density", sc.ap_density);
    sc.user_density = cfg.get_double("user_density", sc.user_density);
    sc.area_km2 = cfg.get_double("area", sc.area_km2);
    sc.tx_snr_db = cfg.get_double("tx_snr_db", sc.tx_snr_db);
    sc.pathloss_exp = cfg.get_double("pathloss_exp", sc.pathloss_exp);
    sc.min_dist_m = cfg.get_double("min_dist", sc.min_dist_m);
    sc.cov_snr_threshold_db = cfg.get_double("cov_snr_threshold_db", sc.cov_snr_threshold_db);
    sc.conflict_radius_m = cfg.get_double("conflict_radius", sc.conflict_radius_m);
    sc.validate();
    return sc;
}

// "cg" or "mp-sync" / "mp-damped" / "mp-random_async"; bare "mp" uses the
// default schedule.
inline DetectorParams detector_from_name(const std::string& name, const KeyValueConfig& cfg) {
    DetectorParams p;
    std::string algo = name;
    const auto dash = name.find('-');
    if (dash != std::string::npos) {
        algo = name.substr(0, dash);
        if (algo != "mp")
            throw config_error("config: schedule suffix only applies to mp, got '" + name + "'");
        p.schedule = parse_schedule(name.substr(dash + 1));
    }
    p.algo = parse_algo(algo);
    p.damping_beta = cfg.get_double("damping_beta", p.damping_beta);
    p.max_iter = static_cast<int>(cfg.get_int("max_iter", p.max_iter));
    p.tol = cfg.get_double("tol", p.tol);
    p.rho = cfg.get_double("rho", p.rho);
    p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    p.validate();
    return p;
}

inline std::vector<DetectorParams> detectors_from_config(const KeyValueConfig& cfg) {
    std::vector<DetectorParams> out;
    for (const std::string& name : cfg.get_list("detectors"))
        out.push_back(detector_from_name(name, cfg));
    return out;
}

}  // namespace udnsim
