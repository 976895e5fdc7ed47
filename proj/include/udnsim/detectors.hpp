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
#include <span>

#include "udnsim/admm.hpp"
#include "udnsim/conjugate_gradient.hpp"
#include "udnsim/detector_types.hpp"
#include "udnsim/factor_graph.hpp"
#include "udnsim/gamp.hpp"
#include "udnsim/gaussian_bp.hpp"
#include "udnsim/lmmse.hpp"

namespace udnsim {

// Runs one detector on one instance. x_ref is the direct-LMMSE solution of
// the same instance; every trajectory entry is measured against it.
inline DetectionResult run_detector(const ChannelMatrix& ch, std::span<const cplx> y,
                                    const DetectorParams& params,
                                    std::span<const cplx> x_ref) {
    params.validate();
    switch (params.algo) {
        case Algo::lmmse: {
            const auto t0 = std::chrono::steady_clock::now();
            DetectionResult res;
            res.estimate = lmmse_direct(ch, y);
            res.trajectory.push_back(relative_error(res.estimate, x_ref));
            res.converged = res.trajectory[0] <= params.tol;
            res.iterations = 0;
            res.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return res;
        }
        case Algo::mp: {
            const FactorGraph g = build_factor_graph(ch);
            return run_gaussian_bp(g, y, ch.noise_var, ch.prior_var, params, x_ref);
        }
        case Algo::cg:
            return run_cg(ch, y, params, x_ref);
        case Algo::gamp:
            return run_gamp(ch, y, params, x_ref);
        case Algo::admm:
            return run_admm(ch, y, params, x_ref);
    }
    throw config_error("run_detector: unknown algorithm");
}

}  // namespace udnsim
