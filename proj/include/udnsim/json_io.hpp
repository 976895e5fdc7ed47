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

#include <fstream>
#include <string>

#include <json.hpp>

#include "udnsim/common.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/label_propagation.hpp"

namespace udnsim {

// {"area_km2": ..., "aps": [[x,y],...], "users": [[x,y],...]}, meters.
inline nlohmann::json topology_to_json(const NetworkTopology& topo) {
    nlohmann::json j;
    j["area_km2"] = topo.area_km2;
    auto points = [](const std::vector<Point>& ps) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Point& p : ps) arr.push_back({p.x, p.y});
        return arr;
    };
    j["aps"] = points(topo.ap_positions);
    j["users"] = points(topo.user_positions);
    return j;
}

inline NetworkTopology topology_from_json(const nlohmann::json& j) {
    NetworkTopology topo;
    try {
        topo.area_km2 = j.at("area_km2").get<double>();
        for (const auto& p : j.at("aps"))
            topo.ap_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        for (const auto& p : j.at("users"))
            topo.user_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    } catch (const nlohmann::json::exception& ex) {
        throw io_error(std::string("topology json: ") + ex.what());
    }
    return topo;
}

// {"n": K, "edges": [[i,j,w],...]}
inline nlohmann::json conflict_graph_to_json(const ConflictGraph& g) {
    nlohmann::json j;
    j["n"] = g.n_vertices;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : g.edges) arr.push_back({e.i, e.j, e.weight});
    j["edges"] = arr;
    return j;
}

inline ConflictGraph conflict_graph_from_json(const nlohmann::json& j) {
    ConflictGraph g;
    try {
        g.n_vertices = j.at("n").get<int>();
        for (const auto& e : j.at("edges"))
            g.edges.push_back(
                {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    } catch (const nlohmann::json::exception& ex) {
        throw io_error(std::string("conflict graph json: ") + ex.what());
    }
    g.validate();
    return g;
}

// {"n_labels": L, "seeds": {"<vertex>": label, ...}}
inline SeedLabels seeds_from_json(const nlohmann::json& j) {
    SeedLabels seeds;
    try {
        seeds.n_labels = j.at("n_labels").get<int>();
        for (const auto& [key, val] : j.at("seeds").items())
            seeds.assignments[std::stoi(key)] = val.get<int>();
    } catch (const nlohmann::json::exception& ex) {
        throw io_error(std::string("seeds json: ") + ex.what());
    } catch (const std::invalid_argument&) {
        throw io_error("seeds json: vertex keys must be integers");
    }
    return seeds;
}

inline nlohmann::json seeds_to_json(const SeedLabels& seeds) {
    nlohmann::json j;
    j["n_labels"] = seeds.n_labels;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [v, l] : seeds.assignments) m[std::to_string(v)] = l;
    j["seeds"] = m;
    return j;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw io_error(path + ": " + ex.what());
    }
}

inline void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace udnsim
