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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/rng.hpp"
#include "udnsim/sparse.hpp"

namespace udnsim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

enum class PlacementMode { fixed_count, poisson };

// Scenario parameters for a square deployment region. Positions are in
// meters, the area in km^2, densities per km^2. The transmit SNR is
// P0 / sigma^2 in dB with the noise power fixed at 1.
struct ScenarioConfig {
    PlacementMode mode = PlacementMode::fixed_count;
    int n_aps = 40;
    int n_users = 32;
    double ap_density = 10.0;            // per km^2, poisson mode
    double user_density = 8.0;           // per km^2, poisson mode
    double area_km2 = 10.0;
    double tx_snr_db = 95.0;
    double pathloss_exp = 3.7;
    double min_dist_m = 1.0;             // distance floor for the path-loss law
    double cov_snr_threshold_db = 10.0;  // coverage threshold on average received SNR
    double conflict_radius_m = 200.0;

    double side_m() const { return std::sqrt(area_km2) * 1000.0; }

    void validate() const {
        if (!(area_km2 > 0.0)) throw config_error("scenario: area must be > 0");
        if (!(pathloss_exp > 2.0)) throw config_error("scenario: pathloss_exp must be > 2");
        if (!(min_dist_m > 0.0)) throw config_error("scenario: min_dist must be > 0");
        if (mode == PlacementMode::fixed_count) {
            if (n_aps < 1 || n_users < 1)
                throw config_error("scenario: fixed-count mode needs n_aps >= 1 and n_users >= 1");
        } else {
            if (!(ap_density > 0.0) || !(user_density > 0.0))
                throw config_error("scenario: poisson mode needs positive densities");
        }
        if (!(conflict_radius_m > 0.0)) throw config_error("scenario: conflict_radius must be > 0");
    }
};

struct NetworkTopology {
    std::vector<Point> ap_positions;
    std::vector<Point> user_positions;
    double area_km2 = 0.0;

    int n_aps() const { return static_cast<int>(ap_positions.size()); }
    int n_users() const { return static_cast<int>(user_positions.size()); }
};

// Sparse uplink channel: one row per AP, one column per user. Kept entries
// form the coverage graph.
struct ChannelMatrix {
    SparseComplexMatrix h;
    double noise_var = 1.0;
    double prior_var = 1.0;
};

struct ConflictEdge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

// Undirected weighted graph on users; i < j on every edge, no duplicates.
struct ConflictGraph {
    int n_vertices = 0;
    std::vector<ConflictEdge> edges;

    void validate() const {
        if (n_vertices < 0) throw config_error("conflict graph: negative vertex count");
        std::vector<std::uint64_t> keys;
        keys.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.i < 0 || e.j >= n_vertices || e.i >= e.j)
                throw config_error("conflict graph: edge endpoints must satisfy 0 <= i < j < n");
            if (!(e.weight > 0.0) || !is_finite(e.weight))
                throw config_error("conflict graph: weights must be positive and finite");
            keys.push_back(static_cast<std::uint64_t>(e.i) << 32 |
                           static_cast<std::uint64_t>(e.j));
        }
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            throw config_error("conflict graph: duplicate edge");
    }
};

// Scatters APs and users uniformly in the square. Poisson mode draws the
// counts first and retries (up to 100 times) if either count is zero.
// Identical (config, seed) pairs give identical topologies.
inline NetworkTopology sample_topology(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    int n_ap = config.n_aps;
    int n_user = config.n_users;
    if (config.mode == PlacementMode::poisson) {
        const double lambda_ap = config.ap_density * config.area_km2;
        const double lambda_user = config.user_density * config.area_km2;
        bool ok = false;
        for (int attempt = 0; attempt < 100; ++attempt) {
            n_ap = static_cast<int>(rng.poisson(lambda_ap));
            n_user = static_cast<int>(rng.poisson(lambda_user));
            if (n_ap >= 1 && n_user >= 1) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw degenerate_topology_error(
                "sample_topology: poisson draw produced an empty AP or user set in "
                "100 attempts (means " +
                format_double(lambda_ap) + ", " + format_double(lambda_user) + ")");
    }
    const double side = config.side_m();
    NetworkTopology topo;
    topo.area_km2 = config.area_km2;
    topo.ap_positions.reserve(static_cast<std::size_t>(n_ap));
    for (int i = 0; i < n_ap; ++i)
        topo.ap_positions.push_back({rng.uniform(0.0, side), rng.uniform(0.0, side)});
    topo.user_positions.reserve(static_cast<std::size_t>(n_user));
    for (int i = 0; i < n_user; ++i)
        topo.user_positions.push_back({rng.uniform(0.0, side), rng.uniform(0.0, side)});
    return topo;
}

namespace detail {
// Average received SNR of the (ap, user) link under the power-law model,
// with the distance floored at min_dist.
inline double link_snr(const Point& ap, const Point& user, double p0, double alpha,
                       double min_dist) {
    const double d = std::max(distance(ap, user), min_dist);
    return p0 * std::pow(d, -alpha);
}
}  // namespace detail

// Builds the sparse channel matrix. An entry is kept when its average SNR
// clears the coverage threshold; each user's strongest AP is kept
// unconditionally so no column ends up empty. Rayleigh fading draws are
// consumed in row-major support order.
inline ChannelMatrix synth_channels(const NetworkTopology& topo, const ScenarioConfig& config,
                                    std::uint64_t seed) {
    config.validate();
    const int n = topo.n_aps();
    const int k = topo.n_users();
    if (n < 1 || k < 1)
        throw degenerate_topology_error("synth_channels: topology has no APs or no users");

    const double noise_var = 1.0;
    const double p0 = std::pow(10.0, config.tx_snr_db / 10.0) * noise_var;
    const double alpha = config.pathloss_exp;
    const double thr = std::pow(10.0, config.cov_snr_threshold_db / 10.0);

    // Strongest AP per user, ties to the lowest AP index.
    std::vector<int> strongest(static_cast<std::size_t>(k), 0);
    std::vector<double> best_snr(static_cast<std::size_t>(k), -1.0);
    for (int a = 0; a < n; ++a) {
        for (int u = 0; u < k; ++u) {
            const double s = detail::link_snr(topo.ap_positions[static_cast<std::size_t>(a)],
                                              topo.user_positions[static_cast<std::size_t>(u)],
                                              p0, alpha, config.min_dist_m);
            if (s > best_snr[static_cast<std::size_t>(u)]) {
                best_snr[static_cast<std::size_t>(u)] = s;
                strongest[static_cast<std::size_t>(u)] = a;
            }
        }
    }

    ChannelMatrix ch;
    ch.noise_var = noise_var;
    ch.prior_var = 1.0;
    ch.h.n_rows = n;
    ch.h.n_cols = k;
    ch.h.row_offsets.assign(1, 0);
    std::vector<double> kept_dist;
    for (int a = 0; a < n; ++a) {
        for (int u = 0; u < k; ++u) {
            const double d = std::max(
                distance(topo.ap_positions[static_cast<std::size_t>(a)],
                         topo.user_positions[static_cast<std::size_t>(u)]),
                config.min_dist_m);
            const double s = p0 * std::pow(d, -alpha);
            if (s >= thr * noise_var || strongest[static_cast<std::size_t>(u)] == a) {
                ch.h.col_indices.push_back(u);
                kept_dist.push_back(d);
            }
        }
        ch.h.row_offsets.push_back(ch.h.nnz());
    }

    Rng rng(seed);
    const double amp = std::sqrt(p0);
    ch.h.values.reserve(kept_dist.size());
    for (double d : kept_dist)
        ch.h.values.push_back(amp * std::pow(d, -alpha / 2.0) * rng.cnormal());
    ch.h.validate();
    return ch;
}

// Joins users within the conflict radius; the similarity weight decays as
// the inverse distance, floored at min_dist.
inline ConflictGraph build_conflict_graph(const NetworkTopology& topo,
                                          const ScenarioConfig& config) {
    config.validate();
    const int k = topo.n_users();
    if (k < 1) throw precondition_error("build_conflict_graph: no users");
    ConflictGraph g;
    g.n_vertices = k;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const double d = distance(topo.user_positions[static_cast<std::size_t>(i)],
                                      topo.user_positions[static_cast<std::size_t>(j)]);
            if (d <= config.conflict_radius_m)
                g.edges.push_back({i, j, 1.0 / std::max(d, config.min_dist_m)});
        }
    }
    return g;
}

}  // namespace udnsim
