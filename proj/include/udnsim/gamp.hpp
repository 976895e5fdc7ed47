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
#include <cmath>
#include <span>

#include "udnsim/common.hpp"
#include "udnsim/detector_types.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/sparse.hpp"

namespace udnsim {

// Scalar-variance GAMP specialized to a Gaussian prior and Gaussian
// likelihood. Per iteration, with F = ||H||_F^2:
//
//   output:   tau_p = (F/N) tau_x,      p = H xhat - tau_p s
//   residual: s = (y - p) / (noise_var + tau_p)
//   input:    tau_r = (noise_var + tau_p) K / F,  r = xhat + tau_r H^H s
//   denoise:  xhat = prior_var/(prior_var + tau_r) r
//             tau_x = prior_var tau_r / (prior_var + tau_r)
//
// The scalar variances assume i.i.d.-like entries; on heavy-tailed channel
// matrices the iteration can and does diverge, which surfaces as a
// divergence_error carrying the finite part of the trajectory.
inline DetectionResult run_gamp(const ChannelMatrix& ch, std::span<const cplx> y,
                                const DetectorParams& params, std::span<const cplx> x_ref) {
    params.validate();
    if (static_cast<int>(y.size()) != ch.h.n_rows)
        throw dimension_error("run_gamp: observation length mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = static_cast<std::size_t>(ch.h.n_rows);
    const std::size_t k = static_cast<std::size_t>(ch.h.n_cols);
    double frob2 = 0.0;
    for (const cplx& v : ch.h.values)
        frob2 += v.real() * v.real() + v.imag() * v.imag();
    if (!(frob2 > 0.0)) throw precondition_error("run_gamp: zero channel matrix");

    DetectionResult res;
    res.estimate.assign(k, cplx(0.0, 0.0));
    double tau_x = ch.prior_var;
    ComplexVector s(n, cplx(0.0, 0.0));

    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    res.trajectory.push_back(relative_error(res.estimate, x_ref));
    if (res.trajectory[0] <= params.tol) {
        res.converged = true;
        res.wall_time_s = elapsed();
        return res;
    }

    for (int t = 1; t <= params.max_iter; ++t) {
        const double tau_p = frob2 / static_cast<double>(n) * tau_x;
        ComplexVector p = spmv(ch.h, res.estimate);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] -= tau_p * s[i];
            s[i] = (y[i] - p[i]) / (ch.noise_var + tau_p);
        }
        const double tau_r = (ch.noise_var + tau_p) * static_cast<double>(k) / frob2;
        const ComplexVector corr = spmv_adjoint(ch.h, s);
        const double shrink = ch.prior_var / (ch.prior_var + tau_r);
        for (std::size_t i = 0; i < k; ++i)
            res.estimate[i] = shrink * (res.estimate[i] + tau_r * corr[i]);
        tau_x = ch.prior_var * tau_r / (ch.prior_var + tau_r);

        const double e = relative_error(res.estimate, x_ref);
        const bool bad_var = !std::isfinite(tau_p) || !std::isfinite(tau_r) ||
                             !std::isfinite(tau_x) || tau_x < 0.0;
        if (!std::isfinite(e) || bad_var) {
            res.iterations = t - 1;
            res.wall_time_s = elapsed();
            throw divergence_error(
                "run_gamp: non-finite or negative variance at iteration " + std::to_string(t),
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
