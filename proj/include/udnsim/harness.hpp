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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "udnsim/common.hpp"
#include "udnsim/config.hpp"
#include "udnsim/detectors.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/rng.hpp"

namespace udnsim {

// A full experiment: scenario, detector set, seeded Monte Carlo trials and,
// for sweeps, the list of areas. The experiment tol overrides each
// detector's stop threshold so every algorithm is measured against the
// same target.
struct ExperimentConfig {
    ScenarioConfig scenario;
    std::vector<DetectorParams> detectors;
    int trials = 1;
    std::uint64_t base_seed = 0;
    double tol = 1e-4;
    std::vector<double> areas;
    bool poisson_sweep = false;  // draw Poisson counts instead of rounded expectations

    void validate(bool sweep_mode) const {
        scenario.validate();
        if (detectors.empty()) throw config_error("experiment: no detectors configured");
        for (const auto& d : detectors) d.validate();
        if (trials < 1) throw config_error("experiment: trials must be >= 1");
        if (!(tol > 0.0)) throw config_error("experiment: tol must be > 0");
        if (sweep_mode) {
            if (areas.empty()) throw config_error("experiment: sweep needs a nonempty areas list");
            for (double a : areas)
                if (!(a > 0.0)) throw config_error("experiment: areas must be positive");
            if (!(scenario.ap_density > 0.0) || !(scenario.user_density > 0.0))
                throw config_error("experiment: sweep needs positive densities");
        }
    }
};

inline ExperimentConfig experiment_from_config(const KeyValueConfig& cfg) {
    ExperimentConfig ec;
    ec.scenario = scenario_from_config(cfg);
    ec.detectors = detectors_from_config(cfg);
    ec.trials = static_cast<int>(cfg.get_int("trials", ec.trials));
    ec.base_seed = static_cast<std::uint64_t>(cfg.get_int("base_seed", 0));
    ec.tol = cfg.get_double("tol", ec.tol);
    for (const std::string& a : cfg.get_list("areas"))
        ec.areas.push_back(KeyValueConfig::to_double("areas", a));
    const std::string ps = cfg.get_string("poisson_sweep", "false");
    if (ps == "true")
        ec.poisson_sweep = true;
    else if (ps != "false")
        throw config_error("config: poisson_sweep must be true or false");
    return ec;
}

// One generated uplink instance: topology, channels, transmitted symbols,
// observation, and the direct-LMMSE reference.
struct TrialInstance {
    NetworkTopology topo;
    ChannelMatrix ch;
    ComplexVector x_true;
    ComplexVector y;
    ComplexVector x_ref;
};

// Substreams 0..3 of the trial seed feed topology, fading, symbols/noise,
// and the message-passing schedule, in that order.
inline TrialInstance make_trial_instance(const ScenarioConfig& sc, std::uint64_t trial_seed) {
    TrialInstance ti;
    ti.topo = sample_topology(sc, derive_seed(trial_seed, 0));
    ti.ch = synth_channels(ti.topo, sc, derive_seed(trial_seed, 1));
    Rng rng(derive_seed(trial_seed, 2));
    const int n = ti.ch.h.n_rows;
    const int k = ti.ch.h.n_cols;
    const double xs = std::sqrt(ti.ch.prior_var);
    const double ns = std::sqrt(ti.ch.noise_var);
    ti.x_true.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) ti.x_true.push_back(xs * rng.cnormal());
    ti.y = spmv(ti.ch.h, ti.x_true);
    for (int i = 0; i < n; ++i) ti.y[static_cast<std::size_t>(i)] += ns * rng.cnormal();
    ti.x_ref = lmmse_direct(ti.ch, ti.y);
    return ti;
}

// Runs one configured detector on a trial instance. Divergence is caught
// and reported through the partial result (converged stays false).
inline DetectionResult run_trial_detector(const TrialInstance& ti, DetectorParams params,
                                          std::uint64_t trial_seed, double tol,
                                          bool* diverged = nullptr) {
    params.tol = tol;
    params.seed = derive_seed(trial_seed, 3);
    if (diverged) *diverged = false;
    try {
        return run_detector(ti.ch, ti.y, params, ti.x_ref);
    } catch (const divergence_error& ex) {
        if (diverged) *diverged = true;
        return ex.partial;
    }
}

struct TrajectoryRow {
    std::string algo;
    std::string schedule;  // "-" for non-mp detectors
    std::uint64_t seed = 0;
    int iter = 0;
    double rel_err = 0.0;
};

inline std::string trajectory_csv_header() { return "algo,schedule,seed,iter,rel_err"; }

inline void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, std::ostream& out) {
    out << trajectory_csv_header() << "\n";
    for (const auto& r : rows)
        out << r.algo << "," << r.schedule << "," << r.seed << "," << r.iter << ","
            << format_double(r.rel_err) << "\n";
}

// Per trial: derive the trial seed, build the instance, run every
// configured detector, and append its whole trajectory. Deterministic for
// a fixed config.
inline std::vector<TrajectoryRow> run_scenario(const ExperimentConfig& config) {
    config.validate(false);
    std::vector<TrajectoryRow> rows;
    for (int t = 0; t < config.trials; ++t) {
        const std::uint64_t trial_seed = config.base_seed + static_cast<std::uint64_t>(t);
        TrialInstance ti;
        try {
            ti = make_trial_instance(config.scenario, trial_seed);
        } catch (const degenerate_topology_error& ex) {
            throw degenerate_topology_error("trial " + std::to_string(t) + ": " + ex.what());
        }
        for (const DetectorParams& d : config.detectors) {
            const DetectionResult res = run_trial_detector(ti, d, trial_seed, config.tol);
            const std::string sched = d.algo == Algo::mp ? schedule_name(d.schedule) : "-";
            for (std::size_t i = 0; i < res.trajectory.size(); ++i)
                rows.push_back({algo_name(d.algo), sched, trial_seed, static_cast<int>(i),
                                res.trajectory[i]});
        }
    }
    return rows;
}

struct SweepRow {
    std::string algo;
    std::string schedule;
    double area_km2 = 0.0;
    int n_aps = 0;
    int n_users = 0;
    int trial = 0;
    std::optional<int> iters_to_tol;
    bool diverged = false;
    double wall_time_s = 0.0;  // informational; never written to the CSVs
};

struct SweepReport {
    std::vector<SweepRow> rows;
    int trials_per_cell = 0;
};

// Scales the region at fixed densities and measures every detector's
// iterations-to-tol per (area, trial). By default each area uses the
// rounded expected counts so the medians are not confounded by count
// variance; poisson_sweep draws true Poisson counts instead.
inline SweepReport sweep_network_size(const ExperimentConfig& config) {
    config.validate(true);
    std::vector<double> areas = config.areas;
    std::sort(areas.begin(), areas.end());
    SweepReport report;
    report.trials_per_cell = config.trials;
    for (double area : areas) {
        ScenarioConfig sc = config.scenario;
        sc.area_km2 = area;
        if (config.poisson_sweep) {
            sc.mode = PlacementMode::poisson;
        } else {
            sc.mode = PlacementMode::fixed_count;
            sc.n_aps = static_cast<int>(std::llround(sc.ap_density * area));
            sc.n_users = static_cast<int>(std::llround(sc.user_density * area));
            if (sc.n_aps < 1 || sc.n_users < 1)
                throw config_error("sweep: expected counts round to zero at area " +
                                   format_double(area));
        }
        for (int t = 0; t < config.trials; ++t) {
            const std::uint64_t trial_seed = config.base_seed + static_cast<std::uint64_t>(t);
            const TrialInstance ti = make_trial_instance(sc, trial_seed);
            for (const DetectorParams& d : config.detectors) {
                bool diverged = false;
                const DetectionResult res =
                    run_trial_detector(ti, d, trial_seed, config.tol, &diverged);
                SweepRow row;
                row.algo = algo_name(d.algo);
                row.schedule = d.algo == Algo::mp ? schedule_name(d.schedule) : "-";
                row.area_km2 = area;
                row.n_aps = ti.topo.n_aps();
                row.n_users = ti.topo.n_users();
                row.trial = t;
                row.iters_to_tol = iterations_to_tol(res.trajectory, config.tol);
                row.diverged = diverged;
                row.wall_time_s = res.wall_time_s;
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

namespace detail {

// Median / 90th percentile with not-reached treated as +infinity; the
// average-of-middles median surfaces as NA when it lands on infinity.
inline double quantile_inf(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (q == 0.5) {
        if (n % 2 == 1) return v[n / 2];
        return 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return v[std::min(n - 1, std::max<std::size_t>(rank, 1) - 1)];
}

inline std::string stat_str(double v) {
    return std::isfinite(v) ? format_double(v) : std::string("NA");
}

}  // namespace detail

inline std::string sweep_csv_header() {
    return "algo,schedule,area_km2,n_aps,n_users,trial,iters_to_tol";
}

inline void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << sweep_csv_header() << "\n";
    for (const auto& r : report.rows) {
        out << r.algo << "," << r.schedule << "," << format_double(r.area_km2) << "," << r.n_aps
            << "," << r.n_users << "," << r.trial << ",";
        if (r.iters_to_tol)
            out << *r.iters_to_tol;
        else
            out << "NA";
        out << "\n";
    }
}

inline std::string summary_csv_header() {
    return "algo,schedule,area_km2,median_iters,p90_iters,divergence_rate";
}

inline void write_summary_csv(const SweepReport& report, std::ostream& out) {
    out << summary_csv_header() << "\n";
    // Group by (area, algo, schedule) in first-occurrence order; rows are
    // already (area, trial, detector)-ordered.
    struct Group {
        std::string algo, schedule;
        double area;
        std::vector<double> iters;
        int diverged = 0;
    };
    std::vector<Group> groups;
    for (const auto& r : report.rows) {
        Group* g = nullptr;
        for (auto& cand : groups)
            if (cand.algo == r.algo && cand.schedule == r.schedule && cand.area == r.area_km2) {
                g = &cand;
                break;
            }
        if (!g) {
            groups.push_back({r.algo, r.schedule, r.area_km2, {}, 0});
            g = &groups.back();
        }
        g->iters.push_back(r.iters_to_tol ? static_cast<double>(*r.iters_to_tol)
                                          : std::numeric_limits<double>::infinity());
        if (r.diverged) ++g->diverged;
    }
    for (const auto& g : groups) {
        const double med = detail::quantile_inf(g.iters, 0.5);
        const double p90 = detail::quantile_inf(g.iters, 0.9);
        const double div_rate =
            static_cast<double>(g.diverged) / static_cast<double>(g.iters.size());
        out << g.algo << "," << g.schedule << "," << format_double(g.area) << ","
            << detail::stat_str(med) << "," << detail::stat_str(p90) << ","
            << format_double(div_rate) << "\n";
    }
}

// Writes <dir>/sweep.csv and <dir>/summary.csv with stable row order.
inline void emit_reports(const SweepReport& report, const std::string& out_dir) {
    if (report.rows.empty()) throw precondition_error("emit_reports: empty report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("emit_reports: cannot create " + out_dir + ": " + ec.message());
    const std::string sweep_path = out_dir + "/sweep.csv";
    const std::string summary_path = out_dir + "/summary.csv";
    std::ofstream sweep(sweep_path);
    if (!sweep) throw io_error("emit_reports: cannot open " + sweep_path);
    write_sweep_csv(report, sweep);
    if (!sweep.flush()) throw io_error("emit_reports: write failed: " + sweep_path);
    std::ofstream summary(summary_path);
    if (!summary) throw io_error("emit_reports: cannot open " + summary_path);
    write_summary_csv(report, summary);
    if (!summary.flush()) throw io_error("emit_reports: write failed: " + summary_path);
}

}  // namespace udnsim
