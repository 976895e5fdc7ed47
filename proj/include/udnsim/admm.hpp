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

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/dense.hpp"
#include "udnsim/detector_types.hpp"
#include "udnsim/geometry.hpp"

namespace udnsim {

// Consensus ADMM over AP-local subproblems. Each AP n keeps local copies
// z_n of the symbols it covers and solves, per iteration, the ridge system
//
//   argmin_z |y_n - h_n z|^2 / noise_var + rho ||z - (xbar_n - u_n)||^2
//
// whose matrix (conj(h_n) h_n^T / noise_var + rho I) is fixed across
// iterations and factored once. The global iterate averages copies and
// duals per user with the prior folded in,
//
//   xbar_k = rho sum_n (z_{n,k} + u_{n,k}) / (1/prior_var + rho deg_k),
//
// so the fixed point is exactly the direct-LMMSE solution. Scaled duals
// are updated by the consensus residual z_n - xbar_n.
inline DetectionResult run_admm(const ChannelMatrix& ch, std::span<const cplx> y,
                                const DetectorParams& params, std::span<const cplx> x_ref) {
    params.validate();
    if (static_cast<int>(y.size()) != ch.h.n_rows)
        throw dimension_error("run_admm: observation length mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const int n_f = ch.h.n_rows;
    const std::size_t k = static_cast<std::size_t>(ch.h.n_cols);
    const double rho = params.rho;

    std::vector<double> degree(k, 0.0);
    for (int c : ch.h.col_indices) ++degree[static_cast<std::size_t>(c)];

    // Per-factor cached factorizations of the local ridge matrices.
    std::vector<std::unique_ptr<CholeskyFactor<cplx>>> factors(
        static_cast<std::size_t>(n_f));
    for (int n = 0; n < n_f; ++n) {
        const auto vals = ch.h.row_vals(n);
        const int d = static_cast<int>(vals.size());
        if (d == 0) continue;
        DenseComplexMatrix m(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                m(a, b) = std::conj(vals[static_cast<std::size_t>(a)]) *
                              vals[static_cast<std::size_t>(b)] / ch.noise_var +
                          (a == b ? cplx(rho, 0.0) : cplx(0.0, 0.0));
        try {
            factors[static_cast<std::size_t>(n)] = std::make_unique<CholeskyFactor<cplx>>(m);
        } catch (const factorization_error& ex) {
            throw error("run_admm: local solve failed at factor " + std::to_string(n) + ": " +
                        ex.what());
        }
    }

    std::vector<ComplexVector> z(static_cast<std::size_t>(n_f));
    std::vector<ComplexVector> u(static_cast<std::size_t>(n_f));
    for (int n = 0; n < n_f; ++n) {
        const std::size_t d = static_cast<std::size_t>(ch.h.row_vals(n).size());
        z[static_cast<std::size_t>(n)].assign(d, cplx(0.0, 0.0));
        u[static_cast<std::size_t>(n)].assign(d, cplx(0.0, 0.0));
    }

    DetectionResult res;
    res.estimate.assign(k, cplx(0.0, 0.0));  // xbar

    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    res.trajectory.push_back(relative_error(res.estimate, x_ref));
    if (res.trajectory[0] <= params.tol) {
        res.converged = true;
        res.wall_time_s = elapsed();
        return res;
    }

    ComplexVector rhs, acc(k);
    for (int t = 1; t <= params.max_iter; ++t) {
        for (int n = 0; n < n_f; ++n) {
            if (!factors[static_cast<std::size_t>(n)]) continue;
            const auto cols = ch.h.row_cols(n);
            const auto vals = ch.h.row_vals(n);
            rhs.assign(cols.size(), cplx(0.0, 0.0));
            for (std::size_t a = 0; a < cols.size(); ++a)
                rhs[a] = std::conj(vals[a]) * y[static_cast<std::size_t>(n)] / ch.noise_var +
                         rho * (res.estimate[static_cast<std::size_t>(cols[a])] -
                                u[static_cast<std::size_t>(n)][a]);
            z[static_cast<std::size_t>(n)] =
                factors[static_cast<std::size_t>(n)]->solve(rhs);
        }
        acc.assign(k, cplx(0.0, 0.0));
        for (int n = 0; n < n_f; ++n) {
            const auto cols = ch.h.row_cols(n);
            for (std::size_t a = 0; a < cols.size(); ++a)
                acc[static_cast<std::size_t>(cols[a])] +=
                    z[static_cast<std::size_t>(n)][a] + u[static_cast<std::size_t>(n)][a];
        }
        for (std::size_t i = 0; i < k; ++i)
            res.estimate[i] = rho * acc[i] / (1.0 / ch.prior_var + rho * degree[i]);
        for (int n = 0; n < n_f; ++n) {
            const auto cols = ch.h.row_cols(n);
            for (std::size_t a = 0; a < cols.size(); ++a)
                u[static_cast<std::size_t>(n)][a] +=
                    z[static_cast<std::size_t>(n)][a] -
                    res.estimate[static_cast<std::size_t>(cols[a])];
        }

        const double e = relative_error(res.estimate, x_ref);
        if (!std::isfinite(e)) {
            res.iterations = t - 1;
            res.wall_time_s = elapsed();
            throw divergence_error("run_admm: non-finite iterate at iteration " +
                                       std::to_string(t),
                                   res);
        }
        res.trajectory.push_back(e);
        res.iterations = t;
        if (e <= params.tol) {
            res.converged = true;
            break;
        }
    }
    res.wall_time_s = elapsed();
    return res;
}

}  // namespace udnsim
