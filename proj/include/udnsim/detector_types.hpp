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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udnsim/common.hpp"

namespace udnsim {

enum class Algo { lmmse, mp, cg, gamp, admm };
enum class Schedule { sync, damped, random_async };

inline std::string algo_name(Algo a) {
    switch (a) {
        case Algo::lmmse: return "lmmse";
        case Algo::mp: return "mp";
        case Algo::cg: return "cg";
        case Algo::gamp: return "gamp";
        case Algo::admm: return "admm";
    }
    return "?";
}

inline std::string schedule_name(Schedule s) {
    switch (s) {
        case Schedule::sync: return "sync";
        case Schedule::damped: return "damped";
        case Schedule::random_async: return "random_async";
    }
    return "?";
}

inline Algo parse_algo(const std::string& s) {
    if (s == "lmmse") return Algo::lmmse;
    if (s == "mp") return Algo::mp;
    if (s == "cg") return Algo::cg;
    if (s == "gamp") return Algo::gamp;
    if (s == "admm") return Algo::admm;
    throw config_error("unknown algorithm '" + s + "'");
}

inline Schedule parse_schedule(const std::string& s) {
    if (s == "sync") return Schedule::sync;
    if (s == "damped") return Schedule::damped;
    if (s == "random_async") return Schedule::random_async;
    throw config_error("unknown schedule '" + s + "'");
}

struct DetectorParams {
    Algo algo = Algo::mp;
    Schedule schedule = Schedule::random_async;  // mp only
    double damping_beta = 0.5;                   // in (0, 1]
    int max_iter = 500;
    double tol = 1e-4;      // relative-error stop threshold
    double rho = 1.0;       // admm penalty
    std::uint64_t seed = 0; // schedule randomness

    void validate() const {
        if (!(damping_beta > 0.0) || damping_beta > 1.0)
            throw config_error("detector: damping_beta must be in (0, 1]");
        if (!(tol > 0.0)) throw config_error("detector: tol must be > 0");
        if (max_iter < 1) throw config_error("detector: max_iter must be >= 1");
        if (!(rho > 0.0)) throw config_error("detector: rho must be > 0");
    }

    // e.g. "mp-random_async", "cg"
    std::string name() const {
        if (algo == Algo::mp) return "mp-" + schedule_name(schedule);
        return algo_name(algo);
    }
};

struct DetectionResult {
    ComplexVector estimate;
    std::vector<double> trajectory;  // relative error e(t), t = 0..iterations
    bool converged = false;
    int iterations = 0;
    double wall_time_s = 0.0;
    std::vector<double> belief_var;  // posterior variances; message passing only
};

// Iterate went non-finite. Carries everything computed up to the last
// finite sweep so callers can keep partial trajectories.
class divergence_error : public error {
public:
    divergence_error(const std::string& msg, DetectionResult part)
        : error(msg), partial(std::move(part)) {}
    DetectionResult partial;
};

// ||xhat - xref|| / ||xref||; falls back to the absolute norm ||xhat||
// when the reference is numerically zero.
inline double relative_error(std::span<const cplx> xhat, std::span<const cplx> xref) {
    if (xhat.size() != xref.size())
        throw dimension_error("relative_error: length mismatch");
    const double ref = norm2(xref);
    if (ref < 1e-12) return norm2(xhat);
    double s = 0.0;
    for (std::size_t i = 0; i < xhat.size(); ++i) {
        const cplx d = xhat[i] - xref[i];
        s += d.real() * d.real() + d.imag() * d.imag();
    }
    return std::sqrt(s) / ref;
}

// First sweep index at which the trajectory clears tol.
inline std::optional<int> iterations_to_tol(std::span<const double> traj, double tol) {
    if (!(tol > 0.0)) throw precondition_error("iterations_to_tol: tol must be > 0");
    if (traj.empty()) throw precondition_error("iterations_to_tol: empty trajectory");
    for (std::size_t t = 0; t < traj.size(); ++t)
        if (traj[t] <= tol) return static_cast<int>(t);
    return std::nullopt;
}

}  // namespace udnsim
