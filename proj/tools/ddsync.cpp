#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ddsync/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "ddsync - data-driven certification, synthesis and simulation of "
        "leader-follower output-synchronization protocols"};
    app.require_subcommand(1);
    app.fallthrough();  // global tolerance/seed flags may follow the subcommand

    ddsync::CliOptions options;
    app.add_option("--tol-informativity", options.tol_informativity,
                   "residual tolerance for informativity decisions")
        ->capture_default_str();
    app.add_option("--tol-stability", options.tol_stability,
                   "Schur stability margin")
        ->capture_default_str();
    app.add_option("--tol-verdict", options.tol_verdict,
                   "tail error tolerance for the synchronization verdict")
        ->capture_default_str();
    app.add_option("--tail-fraction", options.tail_fraction,
                   "fraction of the horizon used as the verdict window")
        ->capture_default_str();
    app.add_option("--seed", options.seed, "seed for random initial states")
        ->capture_default_str();
    std::string f_matrix;
    app.add_option("--f-matrix", f_matrix,
                   "CSV file with a user-supplied F (bypasses design, not verification)");

    std::string scenario_path, protocol_path, out_path, trace_path;
    std::size_t horizon = 300;

    CLI::App* check = app.add_subcommand(
        "check", "decide informativity for output synchronization");
    check->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* synth = app.add_subcommand(
        "synthesize", "synthesize the distributed protocol and write it to a file");
    synth->add_option("scenario", scenario_path, "scenario JSON file")->required();
    synth->add_option("-o,--output", out_path, "protocol output file")->required();

    CLI::App* sim = app.add_subcommand(
        "simulate", "run the closed-loop network and report the verdict");
    sim->add_option("scenario", scenario_path, "scenario JSON file (with true models)")
        ->required();
    sim->add_option("protocol", protocol_path, "protocol JSON file")->required();
    sim->add_option("--horizon", horizon, "number of simulation steps")
        ->capture_default_str();
    sim->add_option("-o,--trace", trace_path, "trace CSV output file");

    CLI::App* demo = app.add_subcommand(
        "demo", "run the embedded nine-follower demo end to end");

    CLI11_PARSE(app, argc, argv);

    if (!f_matrix.empty()) options.f_matrix_path = f_matrix;

    if (check->parsed())
        return ddsync::run_check(scenario_path, options, std::cout, std::cerr);
    if (synth->parsed())
        return ddsync::run_synthesize(scenario_path, out_path, options, std::cout,
                                      std::cerr);
    if (sim->parsed())
        return ddsync::run_simulate(scenario_path, protocol_path, horizon, trace_path,
                                    options, std::cout, std::cerr);
    if (demo->parsed()) return ddsync::run_demo(options, std::cout, std::cerr);
    return ddsync::kExitError;
}
