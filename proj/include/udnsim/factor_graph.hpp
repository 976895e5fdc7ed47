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

#include <span>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/geometry.hpp"

namespace udnsim {

// Bipartite factor graph for y = Hx + n: one factor per AP (observation),
// one variable per user. Edges are stored factor-major, in the same order
// as the channel matrix support.
struct FactorGraph {
    int n_factors = 0;
    int n_variables = 0;
    std::vector<int> factor_offsets;  // length n_factors + 1, indexes edges
    std::vector<int> edge_variable;   // variable of each edge
    std::vector<int> edge_factor;     // factor of each edge
    std::vector<cplx> edge_coeff;     // h_{n,k} of each edge
    std::vector<int> var_offsets;     // length n_variables + 1, indexes var_edges
    std::vector<int> var_edges;       // edge ids per variable, ascending factor

    int n_edges() const { return static_cast<int>(edge_variable.size()); }
    int factor_degree(int n) const { return factor_offsets[n + 1] - factor_offsets[n]; }
    int variable_degree(int k) const { return var_offsets[k + 1] - var_offsets[k]; }
};

// One factor per row, one variable per column, one edge per stored
// coefficient. Throws if some user has no serving AP.
inline FactorGraph build_factor_graph(const ChannelMatrix& ch) {
    ch.h.validate();
    FactorGraph g;
    g.n_factors = ch.h.n_rows;
    g.n_variables = ch.h.n_cols;
    g.factor_offsets = ch.h.row_offsets;
    g.edge_coeff = ch.h.values;
    g.edge_variable = ch.h.col_indices;
    g.edge_factor.resize(static_cast<std::size_t>(ch.h.nnz()));
    for (int n = 0; n < g.n_factors; ++n)
        for (int p = g.factor_offsets[n]; p < g.factor_offsets[n + 1]; ++p)
            g.edge_factor[static_cast<std::size_t>(p)] = n;

    // Bucket edges by variable; scanning edges in factor-major order keeps
    // each variable's list sorted by factor index.
    std::vector<int> deg(static_cast<std::size_t>(g.n_variables), 0);
    for (int v : g.edge_variable) ++deg[static_cast<std::size_t>(v)];
    for (int k = 0; k < g.n_variables; ++k) {
        if (deg[static_cast<std::size_t>(k)] == 0)
            throw precondition_error("build_factor_graph: variable " + std::to_string(k) +
                                     " has no incident factor");
    }
    g.var_offsets.assign(static_cast<std::size_t>(g.n_variables) + 1, 0);
    for (int k = 0; k < g.n_variables; ++k)
        g.var_offsets[static_cast<std::size_t>(k) + 1] =
            g.var_offsets[static_cast<std::size_t>(k)] + deg[static_cast<std::size_t>(k)];
    g.var_edges.resize(static_cast<std::size_t>(g.n_edges()));
    std::vector<int> cursor(g.var_offsets.begin(), g.var_offsets.end() - 1);
    for (int e = 0; e < g.n_edges(); ++e) {
        const int k = g.edge_variable[static_cast<std::size_t>(e)];
        g.var_edges[static_cast<std::size_t>(cursor[static_cast<std::size_t>(k)]++)] = e;
    }
    return g;
}

}  // namespace udnsim
