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
#include <numeric>
#include <span>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/detector_types.hpp"
#include "udnsim/factor_graph.hpp"
#include "udnsim/rng.hpp"

namespace udnsim {

// Gaussian message passing on the AP/user factor graph.
//
// All messages are scalar complex Gaussians stored in natural parameters
// (precision, precision * mean). With the observation at factor n being
// y_n = sum_j h_{nj} x_j + n_n:
//
//   factor n -> variable k:  treat the other variables as Gaussians with
//     the parameters they last sent, giving
//       mean      (y_n - sum_{j != k} h_{nj} mu_{j->n}) / h_{nk}
//       variance  (noise_var + sum_{j != k} |h_{nj}|^2 v_{j->n}) / |h_{nk}|^2
//
//   variable k -> factor n:  product of the prior with all other incoming
//     factor messages; precisions and precision-means add.
//
// Beliefs combine the prior with every incoming factor message. On a tree
// the belief means and variances are the exact posterior; on loopy graphs
// damping (a convex combination of natural parameters with the previous
// message) and a per-sweep random factor order with immediate downstream
// refresh keep the iteration stable.
//
// Schedules:
//   sync          flooding, no damping
//   damped        flooding, factor-to-variable messages damped by beta
//   random_async  fresh random factor permutation each sweep, damped; the
//                 outgoing messages of touched variables refresh before
//                 the next factor is processed
//
// One sweep over all factors counts as one iteration; e(t) is the relative
// error of the belief means against x_ref after sweep t.
class GaussianBpRun {
public:
    GaussianBpRun(const FactorGraph& g, std::span<const cplx> y, double noise_var,
                  double prior_var, const DetectorParams& params)
        : g_(g), y_(y.begin(), y.end()), noise_var_(noise_var), prior_var_(prior_var),
          params_(params), rng_(params.seed) {
        params_.validate();
        if (static_cast<int>(y.size()) != g.n_factors)
            throw dimension_error("gaussian_bp: observation length mismatch");
        if (!(noise_var > 0.0) || !(prior_var > 0.0))
            throw precondition_error("gaussian_bp: variances must be positive");
        const std::size_t ne = static_cast<std::size_t>(g.n_edges());
        v2f_prec_.assign(ne, 1.0 / prior_var_);
        v2f_pmean_.assign(ne, cplx(0.0, 0.0));
        f2v_prec_.assign(ne, 0.0);
        f2v_pmean_.assign(ne, cplx(0.0, 0.0));
        f2v_written_.assign(ne, 0);
    }

    // params.algo must be mp; x_ref is the direct-LMMSE solution for the
    // same instance.
    DetectionResult run(std::span<const cplx> x_ref) {
        const auto t0 = std::chrono::steady_clock::now();
        const double beta =
            params_.schedule == Schedule::sync ? 1.0 : params_.damping_beta;
        DetectionResult res;
        res.estimate.assign(static_cast<std::size_t>(g_.n_variables), cplx(0.0, 0.0));
        res.trajectory.push_back(relative_error(res.estimate, x_ref));
        if (res.trajectory[0] <= params_.tol) {
            res.converged = true;
            finish(res, t0);
            return res;
        }

        std::vector<int> order(static_cast<std::size_t>(g_.n_factors));
        std::iota(order.begin(), order.end(), 0);

        for (int t = 1; t <= params_.max_iter; ++t) {
            if (params_.schedule == Schedule::random_async) {
                rng_.shuffle(order);
                for (int n : order) {
                    update_factor(n, beta);
                    for (int p = g_.factor_offsets[n]; p < g_.factor_offsets[n + 1]; ++p)
                        update_variable(g_.edge_variable[static_cast<std::size_t>(p)]);
                }
            } else {
                for (int n = 0; n < g_.n_factors; ++n) update_factor(n, beta);
                for (int k = 0; k < g_.n_variables; ++k) update_variable(k);
            }
            compute_beliefs(res.estimate, res.belief_var);
            const double e = relative_error(res.estimate, x_ref);
            if (!std::isfinite(e)) {
                res.iterations = t - 1;
                finish(res, t0);
                throw divergence_error(
                    "gaussian_bp: non-finite messages at sweep " + std::to_string(t), res);
            }
            res.trajectory.push_back(e);
            res.iterations = t;
            if (e <= params_.tol) {
                res.converged = true;
                break;
            }
        }
        finish(res, t0);
        return res;
    }

private:
    void finish(DetectionResult& res, std::chrono::steady_clock::time_point t0) {
        if (res.belief_var.empty())
            compute_beliefs(res.estimate, res.belief_var);
        res.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void update_factor(int n, double beta) {
        const int lo = g_.factor_offsets[n];
        const int hi = g_.factor_offsets[n + 1];
        for (int p = lo; p < hi; ++p) {
            // Direct sums over the other edges; degrees are small and the
            // subtraction-free form keeps precision on dominant links.
            double s = noise_var_;
            cplx w = y_[static_cast<std::size_t>(n)];
            for (int q = lo; q < hi; ++q) {
                if (q == p) continue;
                const double prec = v2f_prec_[static_cast<std::size_t>(q)];
                const cplx mu = v2f_pmean_[static_cast<std::size_t>(q)] / prec;
                const cplx h = g_.edge_coeff[static_cast<std::size_t>(q)];
                s += (h.real() * h.real() + h.imag() * h.imag()) / prec;
                w -= h * mu;
            }
            const cplx h = g_.edge_coeff[static_cast<std::size_t>(p)];
            const double h2 = h.real() * h.real() + h.imag() * h.imag();
            double prec = h2 / s;
            cplx pmean = std::conj(h) * w / s;
            if (f2v_written_[static_cast<std::size_t>(p)] && beta < 1.0) {
                prec = beta * prec + (1.0 - beta) * f2v_prec_[static_cast<std::size_t>(p)];
                pmean = beta * pmean + (1.0 - beta) * f2v_pmean_[static_cast<std::size_t>(p)];
            }
            f2v_prec_[static_cast<std::size_t>(p)] = prec;
            f2v_pmean_[static_cast<std::size_t>(p)] = pmean;
            f2v_written_[static_cast<std::size_t>(p)] = 1;
        }
    }

    void update_variable(int k) {
        const int lo = g_.var_offsets[k];
        const int hi = g_.var_offsets[k + 1];
        for (int a = lo; a < hi; ++a) {
            const int e = g_.var_edges[static_cast<std::size_t>(a)];
            double prec = 1.0 / prior_var_;
            cplx pmean(0.0, 0.0);
            for (int b = lo; b < hi; ++b) {
                if (b == a) continue;
                const int e2 = g_.var_edges[static_cast<std::size_t>(b)];
                prec += f2v_prec_[static_cast<std::size_t>(e2)];
                pmean += f2v_pmean_[static_cast<std::size_t>(e2)];
            }
            v2f_prec_[static_cast<std::size_t>(e)] = prec;
            v2f_pmean_[static_cast<std::size_t>(e)] = pmean;
        }
    }

    void compute_beliefs(ComplexVector& mean, std::vector<double>& var) const {
        mean.assign(static_cast<std::size_t>(g_.n_variables), cplx(0.0, 0.0));
        var.assign(static_cast<std::size_t>(g_.n_variables), 0.0);
        for (int k = 0; k < g_.n_variables; ++k) {
            double prec = 1.0 / prior_var_;
            cplx pmean(0.0, 0.0);
            for (int a = g_.var_offsets[k]; a < g_.var_offsets[k + 1]; ++a) {
                const int e = g_.var_edges[static_cast<std::size_t>(a)];
                prec += f2v_prec_[static_cast<std::size_t>(e)];
                pmean += f2v_pmean_[static_cast<std::size_t>(e)];
            }
            mean[static_cast<std::size_t>(k)] = pmean / prec;
            var[static_cast<std::size_t>(k)] = 1.0 / prec;
        }
    }

    const FactorGraph& g_;
    ComplexVector y_;
    double noise_var_;
    double prior_var_;
    DetectorParams params_;
    Rng rng_;
    std::vector<double> v2f_prec_, f2v_prec_;
    ComplexVector v2f_pmean_, f2v_pmean_;
    std::vector<char> f2v_written_;
};

inline DetectionResult run_gaussian_bp(const FactorGraph& g, std::span<const cplx> y,
                                       double noise_var, double prior_var,
                                       const DetectorParams& params,
                                       std::span<const cplx> x_ref) {
    return GaussianBpRun(g, y, noise_var, prior_var, params).run(x_ref);
}

}  // namespace udnsim
