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

namespace udnsim {

// Compressed sparse row storage for a complex matrix. Column indices are
// strictly increasing within each row.
struct SparseComplexMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_offsets;   // length n_rows + 1
    std::vector<int> col_indices;
    std::vector<cplx> values;

    int nnz() const { return static_cast<int>(col_indices.size()); }

    std::span<const int> row_cols(int r) const {
        return {col_indices.data() + row_offsets[r],
                static_cast<std::size_t>(row_offsets[r + 1] - row_offsets[r])};
    }
    std::span<const cplx> row_vals(int r) const {
        return {values.data() + row_offsets[r],
                static_cast<std::size_t>(row_offsets[r + 1] - row_offsets[r])};
    }

    void validate() const {
        if (n_rows < 0 || n_cols < 0)
            throw dimension_error("sparse matrix: negative dimension");
        if (row_offsets.size() != static_cast<std::size_t>(n_rows) + 1)
            throw dimension_error("sparse matrix: row_offsets length mismatch");
        if (row_offsets.front() != 0 ||
            row_offsets.back() != static_cast<int>(col_indices.size()) ||
            col_indices.size() != values.size())
            throw dimension_error("sparse matrix: offset/array inconsistency");
        for (int r = 0; r < n_rows; ++r) {
            if (row_offsets[r] > row_offsets[r + 1])
                throw dimension_error("sparse matrix: decreasing row offsets");
            for (int p = row_offsets[r]; p < row_offsets[r + 1]; ++p) {
                if (col_indices[p] < 0 || col_indices[p] >= n_cols)
                    throw dimension_error("sparse matrix: column index out of range");
                if (p > row_offsets[r] && col_indices[p] <= col_indices[p - 1])
                    throw dimension_error("sparse matrix: columns not strictly increasing");
                if (!is_finite(values[p]))
                    throw precondition_error("sparse matrix: non-finite value");
            }
        }
    }
};

// A * v. Accumulates each row in stored (ascending column) order.
inline ComplexVector spmv(const SparseComplexMatrix& a, std::span<const cplx> v) {
    if (static_cast<int>(v.size()) != a.n_cols)
        throw dimension_error("spmv: vector length " + std::to_string(v.size()) +
                              " != n_cols " + std::to_string(a.n_cols));
    ComplexVector out(static_cast<std::size_t>(a.n_rows), cplx(0.0, 0.0));
    for (int r = 0; r < a.n_rows; ++r) {
        cplx acc(0.0, 0.0);
        for (int p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
            acc += a.values[p] * v[static_cast<std::size_t>(a.col_indices[p])];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

// A^H * v. Each output entry accumulates its column's contributions in
// ascending row order, so repeated calls are bit-identical.
inline ComplexVector spmv_adjoint(const SparseComplexMatrix& a, std::span<const cplx> v) {
    if (static_cast<int>(v.size()) != a.n_rows)
        throw dimension_error("spmv_adjoint: vector length " + std::to_string(v.size()) +
                              " != n_rows " + std::to_string(a.n_rows));
    ComplexVector out(static_cast<std::size_t>(a.n_cols), cplx(0.0, 0.0));
    for (int r = 0; r < a.n_rows; ++r) {
        const cplx vr = v[static_cast<std::size_t>(r)];
        for (int p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
            out[static_cast<std::size_t>(a.col_indices[p])] += std::conj(a.values[p]) * vr;
    }
    return out;
}

}  // namespace udnsim
