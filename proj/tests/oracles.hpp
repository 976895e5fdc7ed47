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

// Reference implementations the tests check the library against. These are
// deliberately plain (dense storage, Gaussian elimination with partial
// pivoting, O(n^2) loops) and share no code with the library solvers.

#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/rng.hpp"

namespace oracles {

using udnsim::cplx;
using udnsim::ComplexVector;
using Dense = std::vector<std::vector<cplx>>;
using DenseReal = std::vector<std::vector<double>>;

inline Dense zeros(int r, int c) { return Dense(r, std::vector<cplx>(c, cplx(0, 0))); }

inline Dense to_dense(const udnsim::SparseComplexMatrix& a) {
    Dense d = zeros(a.n_rows, a.n_cols);
    for (int r = 0; r < a.n_rows; ++r)
        for (int p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
            d[r][a.col_indices[p]] = a.values[p];
    return d;
}

inline ComplexVector matvec(const Dense& a, const ComplexVector& v) {
    ComplexVector out(a.size(), cplx(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline ComplexVector matvec_adjoint(const Dense& a, const ComplexVector& v) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    ComplexVector out(cols, cplx(0, 0));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < a.size(); ++i) out[j] += std::conj(a[i][j]) * v[i];
    return out;
}

// Gaussian elimination with partial pivoting; throws on a zero pivot.
template <typename Scalar>
std::vector<Scalar> gauss_solve(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) == 0.0) throw std::runtime_error("gauss_solve: singular");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const Scalar f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Scalar> x(n);
    for (int r = n - 1; r >= 0; --r) {
        Scalar s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

// Direct normal-equations LMMSE, all-dense: (H^H H + g I) x = H^H y.
inline ComplexVector lmmse_reference(const Dense& h, const ComplexVector& y, double noise_var,
                                     double prior_var) {
    const int n = static_cast<int>(h.size());
    const int k = static_cast<int>(h[0].size());
    Dense m = zeros(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            for (int r = 0; r < n; ++r) m[a][b] += std::conj(h[r][a]) * h[r][b];
            if (a == b) m[a][b] += noise_var / prior_var;
        }
    return gauss_solve(m, matvec_adjoint(h, y));
}

// Diagonal of (H^H H / noise_var + I / prior_var)^(-1) via unit right-hand
// sides through the elimination solver.
inline std::vector<double> posterior_var_reference(const Dense& h, double noise_var,
                                                   double prior_var) {
    const int n = static_cast<int>(h.size());
    const int k = static_cast<int>(h[0].size());
    Dense m = zeros(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            for (int r = 0; r < n; ++r) m[a][b] += std::conj(h[r][a]) * h[r][b] / noise_var;
            if (a == b) m[a][b] += 1.0 / prior_var;
        }
    std::vector<double> diag(k);
    for (int j = 0; j < k; ++j) {
        ComplexVector e(k, cplx(0, 0));
        e[j] = cplx(1, 0);
        diag[j] = gauss_solve(m, e)[j].real();
    }
    return diag;
}

// -------- instance builders --------

inline ComplexVector random_cvec(int n, udnsim::Rng& rng, double scale = 1.0) {
    ComplexVector v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) v.push_back(scale * rng.cnormal());
    return v;
}

inline udnsim::ChannelMatrix channel_from_dense(const Dense& h, double noise_var = 1.0,
                                                double prior_var = 1.0) {
    udnsim::ChannelMatrix ch;
    ch.noise_var = noise_var;
    ch.prior_var = prior_var;
    ch.h.n_rows = static_cast<int>(h.size());
    ch.h.n_cols = h.empty() ? 0 : static_cast<int>(h[0].size());
    ch.h.row_offsets.assign(1, 0);
    for (const auto& row : h) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] != cplx(0, 0)) {
                ch.h.col_indices.push_back(static_cast<int>(c));
                ch.h.values.push_back(row[c]);
            }
        }
        ch.h.row_offsets.push_back(ch.h.nnz());
    }
    ch.h.validate();
    return ch;
}

// Dense square instance with a unit-modulus diagonal plus weak coupling;
// well conditioned and fully dense with probability one.
inline Dense dense_wellcond(int k, double eps, udnsim::Rng& rng) {
    Dense h = zeros(k, k);
    for (int i = 0; i < k; ++i) {
        const double phi = rng.uniform(0.0, 6.283185307179586);
        h[i][i] = cplx(std::cos(phi), std::sin(phi));
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) h[i][j] += eps * rng.cnormal();
    return h;
}

// -------- bipartite trees for message-passing exactness tests --------

struct BipartiteTree {
    int n_factors = 0;
    int n_variables = 0;
    std::vector<std::pair<int, int>> edges;  // (factor, variable)
};

// Uniform-ish spanning tree of the complete bipartite graph, by randomized
// Kruskal over a shuffled pair list.
inline BipartiteTree random_bipartite_tree(int n_factors, int n_variables, udnsim::Rng& rng) {
    std::vector<int> pair_ids(static_cast<std::size_t>(n_factors) * n_variables);
    std::iota(pair_ids.begin(), pair_ids.end(), 0);
    rng.shuffle(pair_ids);
    std::vector<int> parent(n_factors + n_variables);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    BipartiteTree tree;
    tree.n_factors = n_factors;
    tree.n_variables = n_variables;
    for (int id : pair_ids) {
        const int f = id / n_variables;
        const int v = n_factors + id % n_variables;
        const int rf = find(f), rv = find(v);
        if (rf == rv) continue;
        parent[rf] = rv;
        tree.edges.emplace_back(f, v - n_factors);
        if (static_cast<int>(tree.edges.size()) == n_factors + n_variables - 1) break;
    }
    return tree;
}

// Longest shortest path (in edges) of the bipartite graph, by BFS from
// every node.
inline int bipartite_diameter(const BipartiteTree& tree) {
    const int total = tree.n_factors + tree.n_variables;
    std::vector<std::vector<int>> adj(total);
    for (const auto& [f, v] : tree.edges) {
        adj[f].push_back(tree.n_factors + v);
        adj[tree.n_factors + v].push_back(f);
    }
    int diam = 0;
    for (int s = 0; s < total; ++s) {
        std::vector<int> dist(total, -1);
        std::vector<int> queue{s};
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int u = queue[head];
            for (int w : adj[u])
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
        }
        for (int d : dist) diam = std::max(diam, d);
    }
    return diam;
}

// Tree-supported channel with coefficients kept away from zero so the
// per-edge divisions stay well scaled.
inline Dense tree_channel(const BipartiteTree& tree, udnsim::Rng& rng) {
    Dense h = zeros(tree.n_factors, tree.n_variables);
    for (const auto& [f, v] : tree.edges) {
        cplx c = rng.cnormal();
        while (std::abs(c) < 0.3) c = rng.cnormal();
        h[f][v] = c;
    }
    return h;
}

}  // namespace oracles
