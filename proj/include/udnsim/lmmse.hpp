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

#include "udnsim/common.hpp"
#include "udnsim/dense.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/sparse.hpp"

namespace udnsim {

// Forms the regularized normal equations of y = Hx + n under the Gaussian
// prior and solves them directly:
//
//   (H^H H + (noise_var / prior_var) I) x* = H^H y
//
// This cubic-cost solve is the reference every iterative detector's
// relative error is measured against.
inline ComplexVector lmmse_direct(const ChannelMatrix& ch, std::span<const cplx> y) {
    if (static_cast<int>(y.size()) != ch.h.n_rows)
        throw dimension_error("lmmse_direct: observation length mismatch");
    if (!(ch.noise_var > 0.0) || !(ch.prior_var > 0.0))
        throw precondition_error("lmmse_direct: variances must be positive");
    const int k = ch.h.n_cols;
    DenseComplexMatrix m(k, k);
    // H^H H accumulated row by row over the support; upper triangle then
    // mirrored, so the matrix is Hermitian by construction.
    for (int r = 0; r < ch.h.n_rows; ++r) {
        const auto cols = ch.h.row_cols(r);
        const auto vals = ch.h.row_vals(r);
        for (std::size_t a = 0; a < cols.size(); ++a)
            for (std::size_t b = a; b < cols.size(); ++b)
                m(cols[a], cols[b]) += std::conj(vals[a]) * vals[b];
    }
    for (int i = 0; i < k; ++i) {
        m(i, i) += ch.noise_var / ch.prior_var;
        for (int j = i + 1; j < k; ++j) m(j, i) = std::conj(m(i, j));
    }
    const ComplexVector rhs = spmv_adjoint(ch.h, y);
    return hermitian_solve(m, std::span<const cplx>(rhs));
}

}  // namespace udnsim
