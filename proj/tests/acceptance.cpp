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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any criterion fails. Run a subset by passing
// criterion numbers as arguments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "udnsim/detectors.hpp"
#include "udnsim/harness.hpp"
#include "udnsim/label_propagation.hpp"

using namespace udnsim;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> run;
};

double median_inf(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double iters_or_inf(const std::optional<int>& it) {
    return it ? static_cast<double>(*it) : std::numeric_limits<double>::infinity();
}

DetectorParams mp_async(double tol, int max_iter = 500) {
    DetectorParams p;
    p.algo = Algo::mp;
    p.schedule = Schedule::random_async;
    p.damping_beta = 0.5;
    p.tol = tol;
    p.max_iter = max_iter;
    return p;
}

DetectorParams plain(Algo a, double tol, int max_iter = 500) {
    DetectorParams p;
    p.algo = a;
    p.tol = tol;
    p.max_iter = max_iter;
    return p;
}

ScenarioConfig reference_scenario() {
    ScenarioConfig sc;
    sc.mode = PlacementMode::fixed_count;
    sc.n_aps = 40;
    sc.n_users = 32;
    sc.area_km2 = 10.0;
    sc.tx_snr_db = 95.0;
    return sc;
}

// ---- criterion 1: oracle equivalence on dense 8x8 instances ----
bool criterion1(std::string& detail) {
    const double tol = 1e-6;
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(1000 + seed);
        const oracles::Dense h = oracles::dense_wellcond(8, 0.25, rng);
        const ChannelMatrix ch = oracles::channel_from_dense(h);
        ComplexVector y = oracles::matvec(h, oracles::random_cvec(8, rng));
        for (int i = 0; i < 8; ++i) y[i] += rng.cnormal();
        const ComplexVector x_ref = lmmse_direct(ch, y);

        std::vector<DetectorParams> dets;
        for (Schedule s : {Schedule::sync, Schedule::damped, Schedule::random_async}) {
            DetectorParams p = mp_async(tol);
            p.schedule = s;
            p.seed = seed;
            dets.push_back(p);
        }
        dets.push_back(plain(Algo::cg, tol));
        dets.push_back(plain(Algo::gamp, tol));
        dets.push_back(plain(Algo::admm, tol));
        for (const auto& d : dets) {
            try {
                const DetectionResult res = run_detector(ch, y, d, x_ref);
                if (!res.converged || relative_error(res.estimate, x_ref) > tol) ++failures;
            } catch (const divergence_error&) {
                ++failures;
            }
        }
    }
    detail = std::to_string(failures) + " of 120 runs missed 1e-6";
    return failures == 0;
}

// ---- criterion 2: reference-scenario ordering ----
bool criterion2(std::string& detail) {
    const ScenarioConfig sc = reference_scenario();
    const double tol = 1e-4;
    int mp_wins = 0;
    std::vector<double> mp_iters, cg_iters, gamp_iters, admm_iters;
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t seed = 20000 + static_cast<std::uint64_t>(trial);
        const TrialInstance ti = make_trial_instance(sc, seed);
        const auto run = [&](const DetectorParams& d) {
            const DetectionResult res = run_trial_detector(ti, d, seed, tol);
            return iterations_to_tol(res.trajectory, tol);
        };
        const auto mp = run(mp_async(tol));
        const auto cg = run(plain(Algo::cg, tol));
        const auto gamp = run(plain(Algo::gamp, tol));
        const auto admm = run(plain(Algo::admm, tol));
        mp_iters.push_back(iters_or_inf(mp));
        cg_iters.push_back(iters_or_inf(cg));
        gamp_iters.push_back(iters_or_inf(gamp));
        admm_iters.push_back(iters_or_inf(admm));
        if (mp && (!cg || *mp < *cg)) ++mp_wins;
    }
    const double mp_med = median_inf(mp_iters);
    const double cg_med = median_inf(cg_iters);
    const double gamp_med = median_inf(gamp_iters);
    const double admm_med = median_inf(admm_iters);
    std::ostringstream os;
    os << "mp beats cg on " << mp_wins << "/50 trials; medians mp=" << mp_med
       << " cg=" << cg_med << " gamp=" << gamp_med << " admm=" << admm_med;
    detail = os.str();
    return mp_wins >= 40 && mp_med < gamp_med && mp_med < admm_med;
}

// ---- criterion 3: scaling trend across areas ----
bool criterion3(std::string& detail) {
    ExperimentConfig ec;
    ec.scenario = reference_scenario();
    ec.scenario.mode = PlacementMode::poisson;  // density fields drive the sweep
    ec.scenario.ap_density = 10.0;
    ec.scenario.user_density = 8.0;
    ec.detectors = {mp_async(1e-4), plain(Algo::cg, 1e-4)};
    ec.trials = 30;
    ec.base_seed = 30000;
    ec.tol = 1e-4;
    ec.areas = {1.0, 2.0, 4.0, 8.0};
    const SweepReport report = sweep_network_size(ec);

    std::vector<double> mp_med, cg_med;
    for (double area : ec.areas) {
        std::vector<double> mp, cg;
        for (const auto& r : report.rows) {
            if (r.area_km2 != area) continue;
            (r.algo == "mp" ? mp : cg).push_back(iters_or_inf(r.iters_to_tol));
        }
        mp_med.push_back(median_inf(mp));
        cg_med.push_back(median_inf(cg));
    }
    const double mp_lo = *std::min_element(mp_med.begin(), mp_med.end());
    const double mp_hi = *std::max_element(mp_med.begin(), mp_med.end());
    bool cg_increasing = true;
    for (std::size_t i = 0; i + 1 < cg_med.size(); ++i)
        cg_increasing = cg_increasing && cg_med[i] < cg_med[i + 1];
    std::ostringstream os;
    os << "mp medians";
    for (double m : mp_med) os << " " << m;
    os << " (ratio " << mp_hi / mp_lo << "); cg medians";
    for (double m : cg_med) os << " " << m;
    detail = os.str();
    return std::isfinite(mp_hi) && mp_hi <= 2.0 * mp_lo && cg_increasing &&
           std::isfinite(cg_med.back());
}

// ---- criterion 4: tree exactness of means and variances ----
bool criterion4(std::string& detail) {
    double worst_mean = 0.0, worst_var = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(40000 + seed);
        const int n_factors = 2 + static_cast<int>(rng.bounded(9));
        const int max_vars = 20 - n_factors;
        const int n_vars = 1 + static_cast<int>(rng.bounded(
                                   static_cast<std::uint64_t>(std::min(9, max_vars - 1)) + 1));
        const auto tree = oracles::random_bipartite_tree(n_factors, n_vars, rng);
        const oracles::Dense h = oracles::tree_channel(tree, rng);
        const ChannelMatrix ch = oracles::channel_from_dense(h);
        ComplexVector y = oracles::matvec(h, oracles::random_cvec(n_vars, rng));
        for (int i = 0; i < n_factors; ++i) y[i] += rng.cnormal();
        const ComplexVector x_ref = lmmse_direct(ch, y);
        const int diam = oracles::bipartite_diameter(tree);

        DetectorParams p = mp_async(1e-30, std::max(diam, 1));
        p.schedule = Schedule::sync;
        const FactorGraph g = build_factor_graph(ch);
        const DetectionResult res = run_gaussian_bp(g, y, 1.0, 1.0, p, x_ref);
        worst_mean = std::max(worst_mean, relative_error(res.estimate, x_ref));
        const std::vector<double> want = oracles::posterior_var_reference(h, 1.0, 1.0);
        for (int k = 0; k < n_vars; ++k)
            worst_var = std::max(worst_var, std::abs(res.belief_var[k] - want[k]));
    }
    std::ostringstream os;
    os << "worst mean err " << worst_mean << ", worst variance err " << worst_var;
    detail = os.str();
    return worst_mean <= 1e-10 && worst_var <= 1e-10;
}

// ---- criterion 5: cg error monotonicity ----
bool criterion5(std::string& detail) {
    int violations = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(50000 + seed);
        oracles::Dense h = oracles::zeros(12, 8);
        for (auto& row : h)
            for (auto& v : row) v = rng.cnormal();
        const ChannelMatrix ch = oracles::channel_from_dense(h);
        ComplexVector y = oracles::matvec(h, oracles::random_cvec(8, rng));
        for (int i = 0; i < 12; ++i) y[i] += rng.cnormal();
        const ComplexVector x_ref = lmmse_direct(ch, y);
        const DetectionResult res = run_cg(ch, y, plain(Algo::cg, 1e-30, 40), x_ref);
        for (std::size_t t = 1; t < res.trajectory.size(); ++t)
            if (res.trajectory[t] > res.trajectory[t - 1] + 1e-12) ++violations;
    }
    detail = std::to_string(violations) + " norm increases";
    return violations == 0;
}

// ---- criterion 6: label propagation equals the closed form ----
bool criterion6(std::string& detail) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(60000 + seed);
        const int n = 5 + static_cast<int>(rng.bounded(46));
        ConflictGraph g;
        g.n_vertices = n;
        for (int v = 1; v < n; ++v)
            g.edges.push_back({static_cast<int>(rng.bounded(static_cast<std::uint64_t>(v))), v,
                               rng.uniform(0.5, 2.0)});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                bool present = false;
                for (const auto& e : g.edges) present = present || (e.i == i && e.j == j);
                if (!present && rng.uniform01() < 0.08)
                    g.edges.push_back({i, j, rng.uniform(0.5, 2.0)});
            }
        SeedLabels seeds;
        seeds.n_labels = 2 + static_cast<int>(rng.bounded(3));
        const int n_seeds = 1 + static_cast<int>(rng.bounded(4));
        for (int s = 0; s < n_seeds; ++s)
            seeds.assignments[static_cast<int>(rng.bounded(n))] =
                static_cast<int>(rng.bounded(seeds.n_labels));
        const LabelAssignment it = propagate_labels(g, seeds, 1e-12, 500000);
        const LabelAssignment cf = harmonic_oracle(g, seeds);
        for (int v = 0; v < n; ++v)
            for (int l = 0; l < seeds.n_labels; ++l)
                worst = std::max(worst, std::abs(it.score(v, l) - cf.score(v, l)));
    }

    ConflictGraph path;
    path.n_vertices = 3;
    path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    SeedLabels seeds;
    seeds.n_labels = 2;
    seeds.assignments = {{0, 0}, {2, 1}};
    const LabelAssignment la = propagate_labels(path, seeds);
    const double tie_err =
        std::max(std::abs(la.score(1, 0) - 0.5), std::abs(la.score(1, 1) - 0.5));
    std::ostringstream os;
    os << "worst score gap " << worst << ", path tie error " << tie_err;
    detail = os.str();
    return worst <= 1e-8 && tie_err <= 1e-9 && la.labels[1] == 0;
}

// ---- criterion 7: byte-identical sweep reruns ----
bool criterion7(std::string& detail) {
    ExperimentConfig ec;
    ec.scenario = reference_scenario();
    ec.scenario.ap_density = 10.0;
    ec.scenario.user_density = 8.0;
    ec.detectors = {mp_async(1e-4, 200), plain(Algo::cg, 1e-4, 200)};
    ec.trials = 3;
    ec.base_seed = 70000;
    ec.areas = {1.0, 2.0};
    const auto render = [&] {
        const SweepReport r = sweep_network_size(ec);
        std::ostringstream sweep, summary;
        write_sweep_csv(r, sweep);
        write_summary_csv(r, summary);
        return sweep.str() + "\x1e" + summary.str();
    };
    const std::string a = render();
    const std::string b = render();

    std::ostringstream traj_a, traj_b;
    ExperimentConfig ec2 = ec;
    ec2.scenario.mode = PlacementMode::fixed_count;
    ec2.scenario.n_aps = 20;
    ec2.scenario.n_users = 16;
    ec2.scenario.area_km2 = 4.0;
    write_trajectory_csv(run_scenario(ec2), traj_a);
    write_trajectory_csv(run_scenario(ec2), traj_b);

    const bool ok = a == b && traj_a.str() == traj_b.str();
    detail = ok ? "sweep, summary, and trajectory CSVs identical across reruns"
                : "rerun output differs";
    return ok;
}

// ---- criterion 8: damping neutrality at beta = 1 ----
bool criterion8(std::string& detail) {
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(80000 + seed);
        const oracles::Dense h = oracles::dense_wellcond(8, 0.25, rng);
        const ChannelMatrix ch = oracles::channel_from_dense(h);
        ComplexVector y = oracles::matvec(h, oracles::random_cvec(8, rng));
        for (int i = 0; i < 8; ++i) y[i] += rng.cnormal();
        const ComplexVector x_ref = lmmse_direct(ch, y);
        const FactorGraph g = build_factor_graph(ch);

        DetectorParams sync = mp_async(1e-8, 100);
        sync.schedule = Schedule::sync;
        DetectorParams damped = sync;
        damped.schedule = Schedule::damped;
        damped.damping_beta = 1.0;
        const DetectionResult rs = run_gaussian_bp(g, y, 1.0, 1.0, sync, x_ref);
        const DetectionResult rd = run_gaussian_bp(g, y, 1.0, 1.0, damped, x_ref);
        if (rs.trajectory.size() != rd.trajectory.size()) {
            ++mismatches;
            continue;
        }
        if (std::memcmp(rs.trajectory.data(), rd.trajectory.data(),
                        rs.trajectory.size() * sizeof(double)) != 0 ||
            std::memcmp(rs.estimate.data(), rd.estimate.data(),
                        rs.estimate.size() * sizeof(cplx)) != 0)
            ++mismatches;
    }
    detail = std::to_string(mismatches) + " of 10 instances differ";
    return mismatches == 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria{
        {1, "oracle equivalence: every detector hits 1e-6 on dense 8x8 instances", criterion1},
        {2, "reference scenario: random-async damped mp beats cg, gamp, admm", criterion2},
        {3, "scaling: mp sweeps stay flat while cg grows with area", criterion3},
        {4, "tree graphs: beliefs equal the exact posterior", criterion4},
        {5, "cg error 2-norm is monotone", criterion5},
        {6, "label propagation equals the harmonic closed form", criterion6},
        {7, "byte-identical reruns of sweep and trajectory CSVs", criterion7},
        {8, "damped schedule with beta 1 is bit-identical to sync", criterion8},
    };

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.number << ". " << c.title << " ("
                  << detail << ") [" << secs << "s]\n";
        all_ok = all_ok && ok;
    }
    std::cout << (all_ok ? "acceptance: all criteria passed\n"
                         : "acceptance: FAILURES present\n");
    return all_ok ? 0 : 1;
}
