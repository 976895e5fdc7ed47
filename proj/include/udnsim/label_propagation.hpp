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
#include <map>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/dense.hpp"
#include "udnsim/geometry.hpp"

namespace udnsim {

// Pre-labeled boundary devices: vertex -> channel index, all < n_labels.
struct SeedLabels {
    int n_labels = 0;
    std::map<int, int> assignments;

    void validate(int n_vertices) const {
        if (n_labels < 1) throw config_error("seeds: n_labels must be >= 1");
        if (assignments.empty()) throw config_error("seeds: empty seed set");
        for (const auto& [v, l] : assignments) {
            if (v < 0 || v >= n_vertices)
                throw config_error("seeds: vertex " + std::to_string(v) + " out of range");
            if (l < 0 || l >= n_labels)
                throw config_error("seeds: label " + std::to_string(l) + " out of range");
        }
    }
};

// Per-vertex score rows (length n_labels, summing to 1) and argmax labels.
struct LabelAssignment {
    int n_vertices = 0;
    int n_labels = 0;
    std::vector<double> scores;  // row-major, n_vertices x n_labels
    std::vector<int> labels;
    int iterations = 0;

    double score(int v, int l) const {
        return scores[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_labels) +
                      static_cast<std::size_t>(l)];
    }
};

namespace detail {

struct WeightedAdjacency {
    std::vector<int> offsets;
    std::vector<int> neigh;
    std::vector<double> weight;
    std::vector<double> wsum;

    explicit WeightedAdjacency(const ConflictGraph& g) {
        g.validate();
        const std::size_t n = static_cast<std::size_t>(g.n_vertices);
        std::vector<int> deg(n, 0);
        for (const auto& e : g.edges) {
            ++deg[static_cast<std::size_t>(e.i)];
            ++deg[static_cast<std::size_t>(e.j)];
        }
        offsets.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + deg[v];
        neigh.resize(static_cast<std::size_t>(offsets.back()));
        weight.resize(neigh.size());
        std::vector<int> cur(offsets.begin(), offsets.end() - 1);
        for (const auto& e : g.edges) {
            neigh[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.i)])] = e.j;
            weight[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.i)]++)] = e.weight;
            neigh[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.j)])] = e.i;
            weight[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.j)]++)] = e.weight;
        }
        wsum.assign(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (int p = offsets[v]; p < offsets[v + 1]; ++p)
                wsum[v] += weight[static_cast<std::size_t>(p)];
    }
};

// Vertices with no path to any seed. BFS from the whole seed set.
inline std::vector<int> unreachable_from_seeds(const WeightedAdjacency& adj,
                                               const SeedLabels& seeds, int n_vertices) {
    std::vector<char> seen(static_cast<std::size_t>(n_vertices), 0);
    std::vector<int> queue;
    for (const auto& [v, l] : seeds.assignments) {
        (void)l;
        if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            queue.push_back(v);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int p = adj.offsets[static_cast<std::size_t>(v)];
             p < adj.offsets[static_cast<std::size_t>(v) + 1]; ++p) {
            const int w = adj.neigh[static_cast<std::size_t>(p)];
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }
    std::vector<int> missing;
    for (int v = 0; v < n_vertices; ++v)
        if (!seen[static_cast<std::size_t>(v)]) missing.push_back(v);
    return missing;
}

inline int argmax_lowest(const double* row, int n_labels) {
    int best = 0;
    for (int l = 1; l < n_labels; ++l)
        if (row[l] > row[best]) best = l;
    return best;
}

}  // namespace detail

// Clamped harmonic label propagation. Each unseeded vertex's score row is
// repeatedly replaced by the weight-normalized average of its neighbors'
// rows (Gauss-Seidel, ascending vertex order); seeded vertices stay at
// their one-hot rows. Stops when the largest score change in a sweep is
// at most tol.
inline LabelAssignment propagate_labels(const ConflictGraph& g, const SeedLabels& seeds,
                                        double tol = 1e-6, int max_iter = 10000) {
    seeds.validate(g.n_vertices);
    if (!(tol > 0.0)) throw config_error("propagate_labels: tol must be > 0");
    if (max_iter < 1) throw config_error("propagate_labels: max_iter must be >= 1");
    const detail::WeightedAdjacency adj(g);
    const std::vector<int> missing = detail::unreachable_from_seeds(adj, seeds, g.n_vertices);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i)
            list += (i ? "," : "") + std::to_string(missing[i]);
        throw unreachable_vertex_error(
            "propagate_labels: vertices unreachable from every seed: " + list, missing);
    }

    const int n = g.n_vertices;
    const int nl = seeds.n_labels;
    LabelAssignment out;
    out.n_vertices = n;
    out.n_labels = nl;
    out.scores.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(nl),
                      1.0 / static_cast<double>(nl));
    std::vector<char> seeded(static_cast<std::size_t>(n), 0);
    for (const auto& [v, l] : seeds.assignments) {
        seeded[static_cast<std::size_t>(v)] = 1;
        double* row = out.scores.data() + static_cast<std::size_t>(v) * nl;
        for (int c = 0; c < nl; ++c) row[c] = (c == l) ? 1.0 : 0.0;
    }

    bool all_seeded = true;
    for (char s : seeded) all_seeded = all_seeded && s;

    if (!all_seeded) {
        std::vector<double> fresh(static_cast<std::size_t>(nl));
        for (int sweep = 1; sweep <= max_iter; ++sweep) {
            double max_change = 0.0;
            for (int v = 0; v < n; ++v) {
                if (seeded[static_cast<std::size_t>(v)]) continue;
                double* row = out.scores.data() + static_cast<std::size_t>(v) * nl;
                std::fill(fresh.begin(), fresh.end(), 0.0);
                for (int p = adj.offsets[static_cast<std::size_t>(v)];
                     p < adj.offsets[static_cast<std::size_t>(v) + 1]; ++p) {
                    const double w = adj.weight[static_cast<std::size_t>(p)];
                    const double* nrow =
                        out.scores.data() +
                        static_cast<std::size_t>(adj.neigh[static_cast<std::size_t>(p)]) * nl;
                    for (int c = 0; c < nl; ++c) fresh[static_cast<std::size_t>(c)] += w * nrow[c];
                }
                const double inv = 1.0 / adj.wsum[static_cast<std::size_t>(v)];
                for (int c = 0; c < nl; ++c) {
                    const double next = fresh[static_cast<std::size_t>(c)] * inv;
                    max_change = std::max(max_change, std::abs(next - row[c]));
                    row[c] = next;
                }
            }
            out.iterations = sweep;
            if (max_change <= tol) break;
        }
    }

    out.labels.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        out.labels[static_cast<std::size_t>(v)] =
            detail::argmax_lowest(out.scores.data() + static_cast<std::size_t>(v) * nl, nl);
    return out;
}

// Direct reference solver for the same clamped harmonic system: dense
// elimination over the unseeded block, one right-hand side per label.
// Kept deliberately separate from the sweep-based path so the two can
// check each other.
inline LabelAssignment harmonic_oracle(const ConflictGraph& g, const SeedLabels& seeds) {
    seeds.validate(g.n_vertices);
    const detail::WeightedAdjacency adj(g);
    const std::vector<int> missing = detail::unreachable_from_seeds(adj, seeds, g.n_vertices);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i)
            list += (i ? "," : "") + std::to_string(missing[i]);
        throw unreachable_vertex_error(
            "harmonic_oracle: system singular, vertices unreachable from every seed: " + list,
            missing);
    }

    const int n = g.n_vertices;
    const int nl = seeds.n_labels;
    std::vector<int> unseeded;
    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    std::vector<int> seed_label(static_cast<std::size_t>(n), -1);
    for (const auto& [v, l] : seeds.assignments) seed_label[static_cast<std::size_t>(v)] = l;
    for (int v = 0; v < n; ++v) {
        if (seed_label[static_cast<std::size_t>(v)] < 0) {
            slot[static_cast<std::size_t>(v)] = static_cast<int>(unseeded.size());
            unseeded.push_back(v);
        }
    }

    LabelAssignment out;
    out.n_vertices = n;
    out.n_labels = nl;
    out.scores.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(nl), 0.0);
    for (int v = 0; v < n; ++v)
        if (seed_label[static_cast<std::size_t>(v)] >= 0)
            out.scores[static_cast<std::size_t>(v) * nl +
                       static_cast<std::size_t>(seed_label[static_cast<std::size_t>(v)])] = 1.0;

    const int m = static_cast<int>(unseeded.size());
    if (m > 0) {
        // Grounded Laplacian over the unseeded block: D - W restricted.
        DenseRealMatrix lap(m, m);
        std::vector<std::vector<double>> rhs(
            static_cast<std::size_t>(nl), std::vector<double>(static_cast<std::size_t>(m), 0.0));
        for (int a = 0; a < m; ++a) {
            const int v = unseeded[static_cast<std::size_t>(a)];
            lap(a, a) = adj.wsum[static_cast<std::size_t>(v)];
            for (int p = adj.offsets[static_cast<std::size_t>(v)];
                 p < adj.offsets[static_cast<std::size_t>(v) + 1]; ++p) {
                const int w = adj.neigh[static_cast<std::size_t>(p)];
                const double wt = adj.weight[static_cast<std::size_t>(p)];
                if (seed_label[static_cast<std::size_t>(w)] >= 0)
                    rhs[static_cast<std::size_t>(seed_label[static_cast<std::size_t>(w)])]
                       [static_cast<std::size_t>(a)] += wt;
                else
                    lap(a, slot[static_cast<std::size_t>(w)]) -= wt;
            }
        }
        const CholeskyFactor<double> fac(lap);
        for (int l = 0; l < nl; ++l) {
            const std::vector<double> sol = fac.solve(rhs[static_cast<std::size_t>(l)]);
            for (int a = 0; a < m; ++a)
                out.scores[static_cast<std::size_t>(unseeded[static_cast<std::size_t>(a)]) * nl +
                           static_cast<std::size_t>(l)] = sol[static_cast<std::size_t>(a)];
        }
    }

    out.labels.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        out.labels[static_cast<std::size_t>(v)] =
            detail::argmax_lowest(out.scores.data() + static_cast<std::size_t>(v) * nl, nl);
    return out;
}

}  // namespace udnsim
