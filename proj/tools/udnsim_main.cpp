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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udnsim/config.hpp"
#include "udnsim/detectors.hpp"
#include "udnsim/geometry.hpp"
#include "udnsim/harness.hpp"
#include "udnsim/json_io.hpp"
#include "udnsim/label_propagation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw udnsim::io_error("cannot open " + path + " for writing");
    out << text;
    if (!out.flush()) throw udnsim::io_error("write failed: " + path);
}

int cmd_gen(const std::string& config_path, std::uint64_t seed, const std::string& out_path,
            const std::string& conflict_out) {
    const auto cfg = udnsim::KeyValueConfig::parse_file(config_path);
    const udnsim::ScenarioConfig sc = udnsim::scenario_from_config(cfg);
    // Substream 0 of the seed, matching the instance used by detect/sweep
    // for the same trial seed.
    const udnsim::NetworkTopology topo =
        udnsim::sample_topology(sc, udnsim::derive_seed(seed, 0));
    udnsim::save_json_file(out_path, udnsim::topology_to_json(topo));
    if (!conflict_out.empty()) {
        const udnsim::ConflictGraph g = udnsim::build_conflict_graph(topo, sc);
        udnsim::save_json_file(conflict_out, udnsim::conflict_graph_to_json(g));
    }
    std::cout << "gen: " << topo.n_aps() << " APs, " << topo.n_users() << " users -> "
              << out_path << "\n";
    return kExitOk;
}

int cmd_detect(const std::string& config_path, const std::string& algo,
               const std::string& schedule, std::uint64_t seed, const std::string& out_path) {
    const auto cfg = udnsim::KeyValueConfig::parse_file(config_path);
    const udnsim::ScenarioConfig sc = udnsim::scenario_from_config(cfg);
    udnsim::DetectorParams params = udnsim::detector_from_name(algo, cfg);
    if (!schedule.empty()) {
        if (params.algo != udnsim::Algo::mp)
            throw udnsim::config_error("--schedule only applies to --algo mp");
        params.schedule = udnsim::parse_schedule(schedule);
    }

    const udnsim::TrialInstance ti = udnsim::make_trial_instance(sc, seed);
    bool diverged = false;
    const udnsim::DetectionResult res =
        udnsim::run_trial_detector(ti, params, seed, params.tol, &diverged);

    std::vector<udnsim::TrajectoryRow> rows;
    const std::string sched =
        params.algo == udnsim::Algo::mp ? udnsim::schedule_name(params.schedule) : "-";
    for (std::size_t i = 0; i < res.trajectory.size(); ++i)
        rows.push_back({udnsim::algo_name(params.algo), sched, seed, static_cast<int>(i),
                        res.trajectory[i]});
    std::ofstream out(out_path);
    if (!out) throw udnsim::io_error("cannot open " + out_path + " for writing");
    udnsim::write_trajectory_csv(rows, out);
    if (!out.flush()) throw udnsim::io_error("write failed: " + out_path);

    if (diverged) {
        std::cerr << "detect: " << params.name() << " diverged after " << res.iterations
                  << " finite sweeps\n";
        return kExitDivergence;
    }
    std::cout << "detect: " << params.name() << (res.converged ? " converged" : " stopped")
              << " at iteration " << res.iterations << ", rel_err "
              << udnsim::format_double(res.trajectory.back()) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& areas, int trials,
              const std::string& out_dir) {
    auto cfg = udnsim::KeyValueConfig::parse_file(config_path);
    udnsim::ExperimentConfig ec = udnsim::experiment_from_config(cfg);
    if (!areas.empty()) {
        ec.areas.clear();
        for (const std::string& a :
             udnsim::KeyValueConfig::parse_text("areas = " + areas).get_list("areas"))
            ec.areas.push_back(udnsim::KeyValueConfig::to_double("areas", a));
    }
    if (trials > 0) ec.trials = trials;
    const udnsim::SweepReport report = udnsim::sweep_network_size(ec);
    udnsim::emit_reports(report, out_dir);
    std::cout << "sweep: " << report.rows.size() << " rows -> " << out_dir << "/sweep.csv, "
              << out_dir << "/summary.csv\n";
    return kExitOk;
}

int cmd_alloc(const std::string& graph_path, const std::string& seeds_path,
              const std::string& out_path, double tol, int max_iter) {
    const udnsim::ConflictGraph g =
        udnsim::conflict_graph_from_json(udnsim::load_json_file(graph_path));
    const udnsim::SeedLabels seeds = udnsim::seeds_from_json(udnsim::load_json_file(seeds_path));
    const udnsim::LabelAssignment la = udnsim::propagate_labels(g, seeds, tol, max_iter);

    std::string csv = "vertex,label";
    for (int l = 0; l < la.n_labels; ++l) csv += ",score_" + std::to_string(l);
    csv += "\n";
    for (int v = 0; v < la.n_vertices; ++v) {
        csv += std::to_string(v) + "," + std::to_string(la.labels[static_cast<std::size_t>(v)]);
        for (int l = 0; l < la.n_labels; ++l)
            csv += "," + udnsim::format_double(la.score(v, l));
        csv += "\n";
    }
    write_text_file(out_path, csv);
    std::cout << "alloc: labeled " << la.n_vertices << " vertices in " << la.iterations
              << " sweeps -> " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uplink detection and channel-allocation simulator for ultra-dense networks"};
    app.require_subcommand(1);

    std::string config_path, out_path, conflict_out, algo = "mp", schedule;
    std::string graph_path, seeds_path, areas;
    std::uint64_t seed = 0;
    int trials = 0, max_iter = 10000;
    double tol = 1e-6;

    auto* gen = app.add_subcommand("gen", "Sample a topology and export it as JSON");
    gen->add_option("--config", config_path, "scenario config file")->required();
    gen->add_option("--seed", seed, "trial seed");
    gen->add_option("--out", out_path, "topology JSON output")->required();
    gen->add_option("--conflict-out", conflict_out, "also export the conflict graph JSON");

    auto* detect = app.add_subcommand("detect", "Run one detector on one seeded instance");
    detect->add_option("--config", config_path, "scenario config file")->required();
    detect->add_option("--algo", algo, "lmmse | mp | cg | gamp | admm (mp-<schedule> allowed)");
    detect->add_option("--schedule", schedule, "sync | damped | random_async (mp only)");
    detect->add_option("--seed", seed, "trial seed");
    detect->add_option("--out", out_path, "trajectory CSV output")->required();

    auto* sweep = app.add_subcommand("sweep", "Area sweep at fixed densities, CSV reports");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--areas", areas, "comma-separated areas in km^2 (overrides config)");
    sweep->add_option("--trials", trials, "trials per area (overrides config)");
    sweep->add_option("--out", out_path, "output directory")->required();

    auto* alloc = app.add_subcommand("alloc", "Label propagation over a conflict graph");
    alloc->add_option("--graph", graph_path, "conflict graph JSON")->required();
    alloc->add_option("--seeds", seeds_path, "seed labels JSON")->required();
    alloc->add_option("--out", out_path, "assignment CSV output")->required();
    alloc->add_option("--tol", tol, "convergence threshold on score change");
    alloc->add_option("--max-iter", max_iter, "sweep limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen(config_path, seed, out_path, conflict_out);
        if (detect->parsed()) return cmd_detect(config_path, algo, schedule, seed, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, areas, trials, out_path);
        if (alloc->parsed()) return cmd_alloc(graph_path, seeds_path, out_path, tol, max_iter);
    } catch (const udnsim::divergence_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitDivergence;
    } catch (const udnsim::error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
