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

// Conjugate gradient on the regularized normal equations
// (H^H H + (noise_var/prior_var) I) x = H^H y, starting from zero (or from
// x0 when given, a hook for tests). The system matrix is applied as
// H^H (H p) + gamma p, never formed.
inline DetectionResult run_cg(const ChannelMatrix& ch, std::span<const cplx> y,
                              const DetectorParams& params, std::span<const cplx> x_ref,
                              const ComplexVector* x0 = nullptr) {
    params.validate();
    if (static_cast<int>(y.size()) != ch.h.n_rows)
        throw dimension_error("run_cg: observation length mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const double gamma = ch.noise_var / ch.prior_var;
    const std::size_t k = static_cast<std::size_t>(ch.h.n_cols);

    const auto apply = [&](const ComplexVector& v) {
        ComplexVector hv = spmv(ch.h, v);
        ComplexVector out = spmv_adjoint(ch.h, hv);
        for (std::size_t i = 0; i < k; ++i) out[i] += gamma * v[i];
        return out;
    };

    DetectionResult res;
    res.estimate = x0 ? *x0 : ComplexVector(k, cplx(0.0, 0.0));
    if (res.estimate.size() != k) throw dimension_error("run_cg: x0 length mismatch");

    ComplexVector b = spmv_adjoint(ch.h, y);
    ComplexVector r = b;
    {
        const ComplexVector mx = apply(res.estimate);
        for (std::size_t i = 0; i < k; ++i) r[i] -= mx[i];
    }
    ComplexVector p = r;
    double rs = 0.0;
    for (const cplx& v : r) rs += v.real() * v.real() + v.imag() * v.imag();

    const auto stop = [&](double e) {
        res.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return e <= params.tol;
    };

    res.trajectory.push_back(relative_error(res.estimate, x_ref));
    if (stop(res.trajectory[0])) {
        res.converged = true;
        return res;
    }

    for (int t = 1; t <= params.max_iter; ++t) {
        if (rs == 0.0) break;  // residual exactly zero: already at the solution
        const ComplexVector mp = apply(p);
        double curv = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            curv += p[i].real() * mp[i].real() + p[i].imag() * mp[i].imag();
        if (!(curv > 0.0) || !std::isfinite(curv))
            throw breakdown_error("run_cg: direction curvature " + format_double(curv) +
                                  " at iteration " + std::to_string(t));
        const double alpha = rs / curv;
        for (std::size_t i = 0; i < k; ++i) {
            res.estimate[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        double rs_next = 0.0;
        for (const cplx& v : r) rs_next += v.real() * v.real() + v.imag() * v.imag();
        res.trajectory.push_back(relative_error(res.estimate, x_ref));
        res.iterations = t;
        if (stop(res.trajectory.back())) {
            res.converged = true;
            return res;
        }
        const double ratio = rs_next / rs;
        for (std::size_t i = 0; i < k; ++i) p[i] = r[i] + ratio * p[i];
        rs = rs_next;
    }
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace udnsim
